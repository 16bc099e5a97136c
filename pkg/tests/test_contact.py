"""
Tests for contact maps, pedal curves and the pedal group
"""
import math
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

import numpy as np
import pytest

from src.expr import eval_value, parse
from src.geometry import catalog
from src.geometry.contact import (ContactMap, contact_defect, contact_report, foot_of_perpendicular, from_lie,
                                  identity_map, induced_third, legendre_map, pedal_curve, pedal_curve_power,
                                  pedal_map, pedal_point, pedal_power, pedal_samples, to_lie, wrap_angle)
from src.geometry.curve import classify_point, point_jet, sample
from src.models.enums import Chart
from src.models.schemas import J1Point, LiePoint, PointClass
from src.utils.error_handler import ChartError, ContactError, ValidationError

JET = ("x", "y", "p")


def swap_map() -> ContactMap:
    return ContactMap(parse("x", JET), parse("p", JET), "swap")


class TestContactCheck(unittest.TestCase):
    """The contact condition and the induced slope"""

    def test_legendre_is_contact(self):
        """Zero defect everywhere; the image slope is x"""
        report = contact_report(legendre_map(), probes=1000, seed=1)
        self.assertTrue(report.is_contact)
        self.assertEqual(report.skipped, 0)
        self.assertAlmostEqual(induced_third(legendre_map(), 1.5, -0.5, 2.0), 1.5)

    def test_identity(self):
        """The identity carries the slope along"""
        self.assertEqual(contact_defect(identity_map(), 0.3, 0.4, 0.5), 0.0)
        self.assertAlmostEqual(induced_third(identity_map(), 0.3, 0.4, 0.5), 0.5)

    def test_non_contact_map(self):
        """(x, y, p) -> (x, p) has defect -1"""
        self.assertAlmostEqual(contact_defect(swap_map(), 0.1, 0.2, 0.3), -1.0)
        report = contact_report(swap_map(), probes=50)
        self.assertFalse(report.is_contact)
        self.assertAlmostEqual(report.max_defect, 1.0)

    def test_non_contact_slope_depends_on_p_prime(self):
        """No induced slope for a non-contact map"""
        with self.assertRaises(ContactError) as ctx:
            induced_third(swap_map(), 0.1, 0.2, 0.3)
        self.assertAlmostEqual(ctx.exception.defect, -1.0)

    def test_pedal_map_is_contact(self):
        """The pedal construction preserves contact elements"""
        report = contact_report(pedal_map(), probes=1000, seed=4)
        self.assertTrue(report.is_contact)

    def test_unknown_variables(self):
        """Maps only use x, y, p"""
        with self.assertRaises(ValidationError):
            ContactMap(parse("z", ("z",)), parse("x", JET))


class TestPedal(unittest.TestCase):
    """Pedal points and curves"""

    def test_parabola_point(self):
        """Tangent y = 2x - 1 of the parabola, pole at the origin"""
        image = pedal_point(J1Point(1.0, 1.0, 2.0))
        self.assertAlmostEqual(image.x, 0.4)
        self.assertAlmostEqual(image.y, -0.2)
        self.assertAlmostEqual(image.slope, -1.0 / 7.0)
        np.testing.assert_allclose(foot_of_perpendicular((1.0, 1.0), (1.0, 2.0)), [0.4, -0.2])

    def test_shifted_pole(self):
        """Moving the curve and the pole together moves the foot"""
        image = pedal_point(J1Point(4.0, -2.0, 2.0), pole=(3.0, -3.0))
        self.assertAlmostEqual(image.x, 3.4)
        self.assertAlmostEqual(image.y, -3.2)

    def test_tangent_through_pole(self):
        """The foot is the pole itself"""
        with self.assertRaises(ChartError):
            pedal_point(J1Point(2.0, 0.0, 0.0))

    def test_vertical_tangent(self):
        """Chart Q input with co-slope 0 is rejected pointwise"""
        with self.assertRaises(ChartError):
            pedal_point(J1Point(1.0, 0.0, 0.0, Chart.Q))

    def test_cardioid(self):
        """The pedal of a circle through the pole is a cardioid with a cusp at the pole"""
        pedal = pedal_curve(catalog.circle(1.0, 1.0, 0.0))
        for t in (0.4, 2.0, 4.5):
            np.testing.assert_allclose(point_jet(pedal, t).position,
                                       (1.0 + math.cos(t)) * np.array([math.cos(t), math.sin(t)]), atol=1e-12)
        kind = classify_point(pedal, math.pi)
        self.assertTrue(kind.same_type(PointClass.singular(2)))
        self.assertAlmostEqual(kind.alpha, 0.5)
        self.assertAlmostEqual(abs(kind.beta), 0.5)

    def test_centered_circle(self):
        """A circle about the pole is its own pedal"""
        points = sample(pedal_curve(catalog.circle(2.0)), 64).points
        np.testing.assert_allclose(np.hypot(points[:, 0], points[:, 1]), 2.0, atol=1e-12)

    def test_limacon(self):
        """Pole inside the circle gives (1 + d cos t)(cos t, sin t)"""
        pedal = pedal_curve(catalog.circle(1.0, 0.5, 0.0))
        for t in (0.0, 1.0, math.pi):
            np.testing.assert_allclose(point_jet(pedal, t).position,
                                       (1.0 + 0.5 * math.cos(t)) * np.array([math.cos(t), math.sin(t)]),
                                       atol=1e-12)

    def test_samples_flag_pole_tangent(self):
        """At t = 0 the parabola's tangent passes through the pole"""
        result = pedal_samples(catalog.parabola(), samples=5)
        self.assertEqual(result.flagged, [0.0])
        np.testing.assert_allclose(result.t, [-2.0, -1.0, 1.0, 2.0])
        curve = pedal_curve(catalog.parabola())
        for t, (x, y) in zip(result.t, result.xy):
            np.testing.assert_allclose(point_jet(curve, t).position, [x, y], atol=1e-12)


class TestPedalGroup(unittest.TestCase):
    """Polar-contact coordinates and pedal powers"""

    def test_round_trip(self):
        """to_lie and from_lie are inverse"""
        pt = J1Point(1.0, 1.0, 2.0)
        back = from_lie(to_lie(pt))
        self.assertAlmostEqual(back.x, 1.0)
        self.assertAlmostEqual(back.y, 1.0)
        self.assertAlmostEqual(back.p, 2.0)

    def test_pole_has_no_coordinates(self):
        """r = 0"""
        with self.assertRaises(ChartError):
            to_lie(J1Point(0.0, 0.0, 1.0))

    def test_first_power_is_pedal(self):
        """n = 1 lands on the foot of the perpendicular"""
        image = from_lie(pedal_power(to_lie(J1Point(1.0, 1.0, 2.0)), 1))
        self.assertAlmostEqual(image.x, 0.4)
        self.assertAlmostEqual(image.y, -0.2)
        self.assertAlmostEqual(image.p, -1.0 / 7.0)

    def test_group_law(self):
        """Powers add and n = -1 inverts n = 1"""
        lp = to_lie(J1Point(0.5, 1.5, -0.7))
        twice = pedal_power(pedal_power(lp, 1), 1)
        direct = pedal_power(lp, 2)
        self.assertAlmostEqual(twice.r, direct.r)
        self.assertAlmostEqual(wrap_angle(twice.phi - direct.phi), 0.0)
        back = pedal_power(pedal_power(lp, 1), -1)
        self.assertAlmostEqual(back.r, lp.r)
        self.assertAlmostEqual(wrap_angle(back.phi - lp.phi), 0.0)
        self.assertIs(pedal_power(lp, 0), lp)

    def test_tangent_through_pole(self):
        """sin psi = 0"""
        with self.assertRaises(ChartError):
            pedal_power(to_lie(J1Point(1.0, 0.0, 0.0)), 1)

    def test_curve_power(self):
        """n = 1 on the circle through the pole traces the cardioid, antipodal where sin psi > 0"""
        circle = catalog.circle(1.0, 1.0, 0.0)
        result = pedal_curve_power(circle, 1, samples=9)
        self.assertEqual(len(result.t) + len(result.flagged), 9)
        agree = 0
        for t, (x, y) in zip(result.t, result.points):
            expected = (1.0 + math.cos(t)) * np.array([math.cos(t), math.sin(t)])
            if np.allclose([x, y], expected, atol=1e-12):
                agree += 1
            else:
                np.testing.assert_allclose([x, y], -expected, atol=1e-12)
        self.assertGreater(agree, 0)


def test_wrap_angle():
    """Angles land in (-pi, pi]"""
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(2.5 * math.pi) == pytest.approx(0.5 * math.pi)
    assert wrap_angle(0.25) == 0.25


def test_from_lie_vertical_tangent():
    """theta = pi/2 comes back in chart Q"""
    pt = from_lie(LiePoint(1.0, 0.0, -math.pi / 2))
    assert pt.chart is Chart.Q
    assert pt.slope == pytest.approx(0.0, abs=1e-12)
    assert pt.x == pytest.approx(1.0)


def test_zero_direction():
    """A line needs a direction"""
    with pytest.raises(ValidationError):
        foot_of_perpendicular((0.0, 0.0), (0.0, 0.0))


def test_horizontal_tangent_foot():
    """The perpendicular from the origin to y = 1 lands on (0, 1)"""
    image = pedal_point(J1Point(3.0, 1.0, 0.0))
    assert (image.x, image.y) == (pytest.approx(0.0), pytest.approx(1.0))


def test_powers_are_distinct():
    """n = 1 and n = 2 move points of the parabola apart"""
    for x in (-1.5, -0.5, 0.7, 1.2):
        lp = to_lie(J1Point(x, x * x, 2.0 * x))
        one, two = pedal_power(lp, 1), pedal_power(lp, 2)
        assert math.hypot(one.r - two.r, wrap_angle(one.phi - two.phi)) > 1e-3


def random_lie_points(rng, count: int) -> list[LiePoint]:
    """Points whose tangent line stays well away from the pole"""
    points = []
    while len(points) < count:
        psi = rng.uniform(-math.pi, math.pi)
        if abs(math.sin(psi)) > 0.2:
            points.append(LiePoint(rng.uniform(0.5, 3.0), rng.uniform(-math.pi, math.pi), psi))
    return points


def test_group_law_for_real_powers():
    """Applying a then b equals applying a + b, and psi never moves"""
    rng = np.random.default_rng(11)
    for lp in random_lie_points(rng, 100):
        a, b = rng.uniform(-2.0, 2.0, 2)
        twice = pedal_power(pedal_power(lp, a), b)
        direct = pedal_power(lp, a + b)
        assert twice.r == pytest.approx(direct.r, rel=1e-12)
        assert wrap_angle(twice.phi - direct.phi) == pytest.approx(0.0, abs=1e-12)
        assert twice.psi == lp.psi and direct.psi == lp.psi


def test_half_power_twice_is_pedal():
    """Two half steps make one pedal step"""
    for lp in random_lie_points(np.random.default_rng(12), 20):
        half = pedal_power(pedal_power(lp, 0.5), 0.5)
        one = pedal_power(lp, 1)
        assert half.r == pytest.approx(one.r, rel=1e-12)
        assert wrap_angle(half.phi - one.phi) == pytest.approx(0.0, abs=1e-12)


def lie_position(lp: LiePoint) -> np.ndarray:
    return lp.r * np.array([math.cos(lp.phi), math.sin(lp.phi)])


def test_first_power_is_foot_along_parabola():
    """On y = x^2 sin psi < 0 away from the vertex, so n = 1 is the geometric foot"""
    for x in np.concatenate([np.linspace(-2.0, -0.1, 20), np.linspace(0.1, 2.0, 20)]):
        lp = to_lie(J1Point(x, x * x, 2.0 * x))
        assert math.sin(lp.psi) < 0
        np.testing.assert_allclose(lie_position(pedal_power(lp, 1)),
                                   foot_of_perpendicular((x, x * x), (1.0, 2.0 * x)), atol=1e-12)


def test_first_power_on_circle_through_pole():
    """n = 1 is the foot where sin psi < 0 and its antipode where sin psi > 0"""
    seen = set()
    for t in np.linspace(0.1, 2.0 * math.pi - 0.1, 40):
        point = (1.0 + math.cos(t), math.sin(t))
        direction = (-math.sin(t), math.cos(t))
        lp = to_lie(J1Point(point[0], point[1], direction[1] / direction[0]))
        foot = foot_of_perpendicular(point, direction)
        sign = -1.0 if math.sin(lp.psi) > 0 else 1.0
        seen.add(sign)
        np.testing.assert_allclose(lie_position(pedal_power(lp, 1)), sign * foot, atol=1e-10)
    assert seen == {1.0, -1.0}


@pytest.mark.parametrize("d", [0.3, 0.7, 1.0, 1.6])
def test_pedal_curve_is_foot_of_perpendicular(d):
    """Circles of radius 1 about (d, 0): every pedal point is the foot of the tangent"""
    c = catalog.circle(1.0, d, 0.0)
    pedal = pedal_curve(c)
    for t in np.linspace(0.05, 2.0 * math.pi - 0.05, 30):
        jet = point_jet(c, t)
        np.testing.assert_allclose(point_jet(pedal, t).position,
                                   foot_of_perpendicular(jet.position, jet.velocity), atol=1e-8)


@pytest.mark.parametrize("m", [legendre_map(), identity_map(), pedal_map()], ids=lambda m: m.name)
def test_induced_slope_matches_finite_differences(m):
    """H agrees with dY/dX of the image of the lifted parabola"""
    h = 1e-6

    def image(t: float) -> tuple[float, float]:
        point = {"x": t, "y": t * t, "p": 2.0 * t}
        return float(eval_value(m.F, point)), float(eval_value(m.G, point))

    for t in (-1.7, -0.9, -0.4, 0.3, 0.8, 1.5):
        (x0, y0), (x1, y1) = image(t - h), image(t + h)
        assert induced_third(m, t, t * t, 2.0 * t) == pytest.approx((y1 - y0) / (x1 - x0), rel=1e-6)
