"""
Tests for the Legendre transformation and dual curves
"""
import math
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

import numpy as np
import pytest

from src.expr import parse
from src.geometry import catalog
from src.geometry.curve import classify_point, find_singular_points, is_degenerate, point_jet, sample
from src.geometry.duality import (check_predictions, dual_curve, legendre_curve_points, legendre_point,
                                  predict_dual_singularities, projective_dual)
from src.models.enums import Chart, PointKind
from src.models.schemas import J1Point, PointClass
from src.utils.error_handler import ChartError


class TestLegendrePoint(unittest.TestCase):
    """The map (x, y, p) -> (p, xp - y, x)"""

    def test_image(self):
        """A single point"""
        image = legendre_point(J1Point(1.0, 2.0, 3.0))
        self.assertEqual((image.X, image.Y, image.P), (3.0, 1.0, 1.0))

    def test_involution(self):
        """Applying the transformation twice returns the point"""
        rng = np.random.default_rng(11)
        for x, y, p in rng.uniform(-3.0, 3.0, (20, 3)):
            twice = legendre_point(legendre_point(J1Point(x, y, p)).as_point())
            np.testing.assert_allclose((twice.X, twice.Y, twice.P), (x, y, p), atol=1e-12)

    def test_chart_q_input(self):
        """Co-slope 2 means p = 1/2"""
        image = legendre_point(J1Point(2.0, 0.0, 2.0, Chart.Q))
        self.assertAlmostEqual(image.X, 0.5)
        self.assertAlmostEqual(image.Y, 1.0)

    def test_vertical_tangent(self):
        """Co-slope 0 has no finite image"""
        with self.assertRaises(ChartError):
            legendre_point(J1Point(1.0, 0.0, 0.0, Chart.Q))


class TestDualCurve(unittest.TestCase):
    """Duals of the catalog curves"""

    def test_parabola(self):
        """The dual of y = x^2 is Y = X^2/4"""
        points = sample(dual_curve(catalog.parabola()), 101).points
        np.testing.assert_allclose(points[:, 1], points[:, 0] ** 2 / 4.0, atol=1e-12)

    def test_line_collapses(self):
        """The dual of y = 2x + 3 is the point (2, -3)"""
        dual = dual_curve(catalog.line(2.0, 3.0))
        self.assertTrue(is_degenerate(dual))
        np.testing.assert_allclose(point_jet(dual, 0.3).position, [2.0, -3.0])

    def test_cubic_cusp(self):
        """y = x^3 dualizes to (3t^2, 2t^3), a cusp over the inflection"""
        dual = dual_curve(catalog.cubic())
        np.testing.assert_allclose(point_jet(dual, 0.5).position, [0.75, 0.25])
        kind = classify_point(dual, 0.0)
        self.assertTrue(kind.same_type(PointClass.singular(2)))
        self.assertAlmostEqual(kind.alpha, 3.0)
        self.assertAlmostEqual(kind.beta, 2.0)

    def test_double_dual(self):
        """Dualizing twice returns the curve away from inflections"""
        c = catalog.parabola(-1.0, 1.0)
        twice = dual_curve(dual_curve(c))
        for t in (-0.9, -0.3, 0.2, 0.7):
            np.testing.assert_allclose(point_jet(twice, t).position, point_jet(c, t).position, atol=1e-12)

    def test_ellipse(self):
        """Vertical tangents are excluded; on an arc the dual is (-cot t/2, -1/sin t)"""
        full = dual_curve(catalog.ellipse(2.0, 1.0))
        self.assertIn(0.0, full.excluded)
        arc = dual_curve(catalog.ellipse(2.0, 1.0, 0.1, math.pi - 0.1))
        for t in (0.3, 1.2, 2.5):
            np.testing.assert_allclose(point_jet(arc, t).position,
                                       [-0.5 / math.tan(t), -1.0 / math.sin(t)], atol=1e-12)

    def test_projective_dual(self):
        """The projective chart of the ellipse dual is (cos t/2, -sin t)"""
        projective = projective_dual(catalog.ellipse(2.0, 1.0, 0.1, math.pi - 0.1))
        for t in (0.3, 1.2, 2.5):
            np.testing.assert_allclose(point_jet(projective, t).position,
                                       [0.5 * math.cos(t), -math.sin(t)], atol=1e-12)


class TestPredictions(unittest.TestCase):
    """Inflections and flat points predict dual singularities"""

    def test_sine_seven_pi(self):
        """Six interior inflections of sin on [0, 7 pi]"""
        predictions = predict_dual_singularities(catalog.sine(0.0, 7.0 * math.pi))
        self.assertEqual(len(predictions), 6)
        for k, (t, kind) in enumerate(predictions, start=1):
            self.assertAlmostEqual(t, k * math.pi, delta=1e-8)
            self.assertTrue(kind.same_type(PointClass.singular(2)))

    def test_flat_graph(self):
        """y = x^4 predicts Singular(3), and the dual (4t^3, 3t^4) has it"""
        c = catalog.graph(parse("x^4"), -1.0, 1.0)
        checked = check_predictions(c)
        self.assertEqual(len(checked), 1)
        t, predicted, actual = checked[0]
        self.assertTrue(predicted.same_type(PointClass.singular(3)))
        self.assertTrue(actual.same_type(predicted))
        self.assertAlmostEqual(actual.alpha, 4.0)
        self.assertAlmostEqual(actual.beta, 3.0)

    def test_predictions_match(self):
        """Every prediction for the cubic is confirmed"""
        for _, predicted, actual in check_predictions(catalog.cubic()):
            self.assertTrue(actual.same_type(predicted))

    def test_convex_curve(self):
        """No predictions for the parabola"""
        self.assertEqual(predict_dual_singularities(catalog.parabola()), [])


def test_legendre_curve_points_skip_vertical():
    """The vertical tangent of the circle at t = 0 has no image"""
    points = legendre_curve_points(catalog.circle(1.0), samples=9)
    assert 0.0 not in [t for t, _, _ in points]
    assert len(points) < 9
    for t, point, image in points:
        assert image.X == pytest.approx(point.p)
        assert image.P == pytest.approx(point.x)


def test_dual_point_kinds_of_regular_points():
    """Away from inflections the dual of the cubic is regular"""
    dual = dual_curve(catalog.cubic())
    assert classify_point(dual, 1.0).kind is PointKind.REGULAR


def test_ellipse_dual_is_hyperbola():
    """Y^2 - (aX)^2 = b^2 for the ellipse with a = 2, b = 1"""
    points = sample(dual_curve(catalog.ellipse(2.0, 1.0, 0.1, math.pi - 0.1)), 200).points
    np.testing.assert_allclose(points[:, 1] ** 2 - (2.0 * points[:, 0]) ** 2, 1.0, atol=1e-9)


DUAL_ARCS = [
    pytest.param(catalog.parabola(-1.0, 1.0), id="parabola"),
    pytest.param(catalog.ellipse(2.0, 1.0, 0.1, math.pi - 0.1), id="ellipse-arc"),
    pytest.param(catalog.sine(0.1, math.pi - 0.1), id="sine-arc"),
]


@pytest.mark.parametrize("c", DUAL_ARCS)
def test_dual_of_dual_returns_curve(c):
    """Arcs without inflections come back after two dualizations"""
    twice = dual_curve(dual_curve(c))
    for t in np.linspace(c.t_min + 0.05, c.t_max - 0.05, 15):
        np.testing.assert_allclose(point_jet(twice, t).position, point_jet(c, t).position, atol=1e-10)


@pytest.mark.parametrize("c", DUAL_ARCS + [pytest.param(catalog.cubic(0.2, 2.0), id="cubic-branch")])
def test_dual_is_legendrian(c):
    """P dX - dY vanishes along the dual with P = x of the original point"""
    dual = dual_curve(c)
    for t in np.linspace(c.t_min, c.t_max, 25):
        velocity = point_jet(dual, t).velocity
        x = point_jet(c, t).position[0]
        assert abs(x * velocity[0] - velocity[1]) <= 1e-9 * (1.0 + abs(velocity[1]))


@pytest.mark.parametrize("c", DUAL_ARCS + [pytest.param(catalog.cubic(0.2, 2.0), id="cubic-branch")])
def test_regular_points_stay_regular(c):
    """Points of non-zero curvature have regular images"""
    dual = dual_curve(c)
    for t in np.linspace(c.t_min, c.t_max, 25):
        assert classify_point(dual, t).kind is PointKind.REGULAR


def test_sine_dual_has_six_cusps():
    """The dual of sin on [0, 7 pi] has semicubic cusps over the six interior inflections"""
    dual = dual_curve(catalog.sine(0.0, 7.0 * math.pi))
    cusps = find_singular_points(dual)
    assert len(cusps) == 6
    for k, t in enumerate(cusps, start=1):
        assert t == pytest.approx(k * math.pi, abs=1e-8)
        assert classify_point(dual, t).same_type(PointClass.singular(2))
