"""
Tests for the convex conjugate of functions of one variable
"""
import math
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

import numpy as np
import pytest

from src.config import default_config
from src.expr import eval_value, parse
from src.geometry.conjugate import (biconjugate, conjugate_concave, conjugate_param, conjugate_param_values,
                                    conjugate_sup, fenchel_young_gap)
from src.geometry.curve import point_jet, sample
from src.models.schemas import ConjugateResult
from src.utils.error_handler import ConvexityError, ValidationError


class TestConjugateSup(unittest.TestCase):
    """sup_x (xp - f(x)) on a bounded x interval"""

    def test_half_square_is_self_conjugate(self):
        """x^2/2 -> p^2/2"""
        p = np.linspace(-1.5, 1.5, 13)
        result = conjugate_sup(parse("x^2/2"), (-2.0, 2.0), p)
        self.assertTrue(np.all(result.finite))
        np.testing.assert_allclose(result.values, p ** 2 / 2.0, atol=1e-8)
        self.assertEqual(result.effective_domain, [(-1.5, 1.5)])

    def test_square(self):
        """x^2 -> p^2/4"""
        p = np.linspace(-3.0, 3.0, 7)
        result = conjugate_sup(parse("x^2"), (-2.0, 2.0), p)
        np.testing.assert_allclose(result.values, p ** 2 / 4.0, atol=1e-8)

    def test_exp_effective_domain(self):
        """exp has conjugate p ln p - p on p > 0 and +inf for p <= 0"""
        p = np.linspace(-1.0, 3.0, 41)
        result = conjugate_sup(parse("exp(x)"), (-5.0, 3.0), p)
        positive = p > 0.05
        np.testing.assert_array_equal(result.finite, positive)
        expected = p[positive] * np.log(p[positive]) - p[positive]
        np.testing.assert_allclose(result.values[positive], expected, atol=1e-8)
        self.assertEqual(len(result.effective_domain), 1)
        self.assertAlmostEqual(result.effective_domain[0][1], 3.0)

    def test_slope_beyond_range_is_infinite(self):
        """x^2 on (-1, 1) has slopes in (-2, 2); p = 5 has no critical point"""
        result = conjugate_sup(parse("x^2"), (-1.0, 1.0), [0.0, 5.0, -5.0])
        self.assertAlmostEqual(result.values[0], 0.0, places=10)
        self.assertEqual(result.values[1], np.inf)
        self.assertEqual(result.values[2], np.inf)

    def test_not_convex(self):
        """x^3 is rejected"""
        with self.assertRaises(ConvexityError):
            conjugate_sup(parse("x^3"), (-1.0, 1.0), [0.0])

    def test_bad_inputs(self):
        """Empty grids and reversed intervals"""
        with self.assertRaises(ValidationError):
            conjugate_sup(parse("x^2"), (-1.0, 1.0), [])
        with self.assertRaises(ValidationError):
            conjugate_sup(parse("x^2"), (1.0, -1.0), [0.0])

    def test_concave(self):
        """sup_x (f - xp) of -x^2/2 is p^2/2"""
        p = np.linspace(-1.0, 1.0, 9)
        result = conjugate_concave(parse("-x^2/2"), (-2.0, 2.0), p)
        np.testing.assert_allclose(result.values, p ** 2 / 2.0, atol=1e-8)


class TestParametricConjugate(unittest.TestCase):
    """(f'(t), t f'(t) - f(t))"""

    def test_curve(self):
        """The parametric conjugate of x^2 is the graph of X^2/4"""
        points = sample(conjugate_param(parse("x^2"), (-1.0, 1.0)), 51).points
        np.testing.assert_allclose(points[:, 1], points[:, 0] ** 2 / 4.0, atol=1e-12)

    def test_values_agree_with_sup(self):
        """Both evaluations of cosh agree on the slope range"""
        f = parse("(exp(x) + exp(-x))/2")
        p = np.linspace(-1.0, 1.0, 11)
        closed = conjugate_param_values(f, (-2.0, 2.0), p)
        numeric = conjugate_sup(f, (-2.0, 2.0), p)
        np.testing.assert_allclose(numeric.values, closed.values, atol=1e-8)

    def test_values_outside_slope_range(self):
        """p outside f'([t_min, t_max]) is +inf"""
        result = conjugate_param_values(parse("x^2"), (-1.0, 1.0), [1.0, 3.0])
        self.assertAlmostEqual(result.values[0], 0.25)
        self.assertEqual(result.values[1], np.inf)

    def test_inflection_rejected(self):
        """f'' changes sign at 0"""
        with self.assertRaises(ConvexityError) as ctx:
            conjugate_param(parse("x^3"), (-1.0, 1.0))
        self.assertAlmostEqual(ctx.exception.probe, 0.0, delta=1e-10)


def test_biconjugate_recovers_function():
    """f** = f for a strictly convex f"""
    x = np.linspace(-1.0, 1.0, 5)
    result = biconjugate(parse("x^2"), (-2.0, 2.0), (-4.0, 4.0), x)
    np.testing.assert_allclose(result.values, x ** 2, atol=1e-6)


def test_fenchel_young_gap_non_negative():
    """f(x) + f*(p) >= xp"""
    f = parse("exp(x)")
    conjugate = conjugate_sup(f, (-5.0, 3.0), np.linspace(0.1, 3.0, 30))
    gap = fenchel_young_gap(f, conjugate, np.linspace(-2.0, 1.0, 25))
    assert gap.shape == (25, 30)
    assert gap.min() >= -1e-9


def test_domain_of_runs():
    """Maximal finite runs of a sampled function"""
    grid = np.arange(6.0)
    values = np.array([np.inf, 1.0, 2.0, np.inf, 3.0, 4.0])
    assert ConjugateResult.domain_of(grid, values) == [(1.0, 2.0), (4.0, 5.0)]


def test_result_rejects_nan():
    """Only finite values and +inf are allowed"""
    with pytest.raises(ValueError):
        ConjugateResult(np.array([0.0, 1.0]), np.array([0.0, np.nan]))


def test_concave_logarithm():
    """sup_x (ln x - x) = -1 at x = 1"""
    result = conjugate_concave(parse("ln(x)"), (0.1, 100.0), [1.0])
    assert result.values[0] == pytest.approx(-1.0, abs=1e-8)


def test_parametric_exp_at_zero():
    """(e^t, t e^t - e^t) passes through (1, -1)"""
    np.testing.assert_allclose(point_jet(conjugate_param(parse("exp(x)"), (-3.0, 3.0)), 0.0).position, [1.0, -1.0])


CONVEX_FUNCTIONS = [
    pytest.param("x^2", (-2.0, 2.0), (-3.0, 3.0), id="square"),
    pytest.param("x^2/2", (-2.0, 2.0), (-1.5, 1.5), id="half-square"),
    pytest.param("exp(x)", (-3.0, 2.0), (0.1, 5.0), id="exp"),
    pytest.param("x^4 + x^2", (-1.5, 1.5), (-8.0, 8.0), id="quartic"),
]


@pytest.mark.parametrize("source, x_interval, p_range", CONVEX_FUNCTIONS)
def test_sup_and_parametric_forms_agree(source, x_interval, p_range):
    """Both conjugate algorithms give the same values inside the slope range"""
    f = parse(source)
    p = np.linspace(*p_range, 37)
    by_sup = conjugate_sup(f, x_interval, p)
    by_param = conjugate_param_values(f, x_interval, p)
    assert np.all(by_sup.finite) and np.all(by_param.finite)
    np.testing.assert_allclose(by_sup.values, by_param.values, rtol=1e-9, atol=1e-6)


@pytest.mark.parametrize("source, x_interval, p_range", CONVEX_FUNCTIONS)
def test_conjugate_is_convex(source, x_interval, p_range):
    """Second differences of f* on a uniform p grid are non-negative"""
    p = np.linspace(*p_range, 61)
    values = conjugate_sup(parse(source), x_interval, p).values
    assert np.diff(values, 2).min() >= -1e-9


@pytest.mark.parametrize("source, x_interval, p_interval, x_points", [
    pytest.param("x^2/2", (-2.0, 2.0), (-2.0, 2.0), np.linspace(-1.5, 1.5, 7), id="half-square"),
    pytest.param("exp(x)", (-3.0, 2.0), (0.1, 5.0), np.linspace(-1.5, 1.2, 7), id="exp"),
    pytest.param("x^4 + x^2", (-1.5, 1.5), (-8.0, 8.0), np.linspace(-1.0, 1.0, 5), id="quartic"),
])
def test_biconjugate_of_convex_functions(source, x_interval, p_interval, x_points):
    """f** = f wherever f'(x) stays inside the p interval"""
    f = parse(source)
    result = biconjugate(f, x_interval, p_interval, x_points)
    expected = [float(eval_value(f, {"x": x})) for x in result.grid]
    np.testing.assert_allclose(result.values, expected, atol=1e-5)


def test_exp_conjugate_on_wide_interval():
    """exp* (p) = p ln p - p for p from 0.01 to 100"""
    p = np.geomspace(0.01, 100.0, 41)
    result = conjugate_sup(parse("exp(x)"), (-20.0, 5.0), p)
    np.testing.assert_allclose(result.values, p * np.log(p) - p, rtol=1e-8, atol=1e-8)


def test_exp_conjugate_infinite_past_both_ends():
    """Slopes beyond f' at either end give +inf, slopes just inside stay finite"""
    p = np.array([-0.5, 0.0068, 30.0])
    result = conjugate_sup(parse("exp(x)"), (-5.0, 3.0), p)
    assert result.values[0] == np.inf
    assert result.values[2] == np.inf
    assert result.values[1] == pytest.approx(0.0068 * math.log(0.0068) - 0.0068, abs=1e-10)
    np.testing.assert_array_equal(result.finite, [False, True, False])


@pytest.mark.parametrize("x_interval, direction", [((0.0, 2.0), 1.0), ((-2.0, 0.0), -1.0)])
def test_maximizer_inside_end_cell_is_refined(x_interval, direction):
    """A supremum between the first two (or last two) grid points is not the grid value"""
    h = 2.0 / (default_config.conjugate_grid - 1)
    p = direction * 2.0 * h / 3.0
    result = conjugate_sup(parse("x^2"), x_interval, [p])
    assert result.values[0] == pytest.approx(p * p / 4.0, rel=1e-6)
