"""
Tests for Clairaut equations: line solutions, discriminants and envelopes
"""
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

import numpy as np
import pytest

from src.expr import eval_value, parse
from src.geometry import catalog
from src.geometry.clairaut import (ClairautProblem, LineSolution, SingularSolution, discriminant_curve,
                                   dual_equation, envelope_check, general_discriminant, general_line_solutions,
                                   line_solutions, residual)
from src.geometry.curve import classify_point, point_jet
from src.models.schemas import PointClass
from src.utils.error_handler import ClairautError


def cubic_problem() -> ClairautProblem:
    return ClairautProblem.from_function(parse("p^3", ("p",)))


def semicubic_zero_set():
    return catalog.param(parse("t^2", ("t",)), parse("t^3", ("t",)), -1.5, 1.5)


class TestFunctionForm(unittest.TestCase):
    """xp - y = f(p)"""

    def test_discriminant(self):
        """f = p^3 gives (3p^2, 2p^3)"""
        disc = discriminant_curve(cubic_problem())
        np.testing.assert_allclose(point_jet(disc, 1.5).position, [6.75, 6.75])
        kind = classify_point(disc, 0.0)
        self.assertTrue(kind.same_type(PointClass.singular(2)))

    def test_lines_solve_equation(self):
        """y = cx - c^3 satisfies the equation identically"""
        pb = cubic_problem()
        x = np.linspace(-3.0, 10.0, 27)
        for line in line_solutions(pb, np.linspace(-2.0, 2.0, 9)):
            self.assertEqual(line.slope, line.parameter)
            self.assertLess(residual(pb, line, x).max_abs, 1e-12)

    def test_singular_solution(self):
        """The discriminant solves the equation, including its cusp"""
        pb = cubic_problem()
        report = residual(pb, SingularSolution(discriminant_curve(pb)), np.linspace(-2.0, 2.0, 9))
        self.assertEqual(report.evaluated, 9)
        self.assertLess(report.max_abs, 1e-12)

    def test_wrong_line(self):
        """y = x is not a solution for f = p^3"""
        report = residual(cubic_problem(), LineSolution(1.0, 0.0, 1.0), [0.0, 1.0, 2.0])
        self.assertAlmostEqual(report.max_abs, 1.0)

    def test_envelope(self):
        """Each line touches the discriminant at its own parameter"""
        pb = cubic_problem()
        lines = line_solutions(pb, np.linspace(-2.0, 2.0, 11))
        report = envelope_check(pb, lines, discriminant_curve(pb))
        self.assertTrue(report.applicable)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.checks), 11)

    def test_affine_f(self):
        """f = 2p + 1 has a point discriminant and no envelope"""
        pb = ClairautProblem.from_function(parse("2*p + 1", ("p",)))
        disc = discriminant_curve(pb)
        np.testing.assert_allclose(point_jet(disc, 0.7).position, [2.0, -1.0])
        report = envelope_check(pb, line_solutions(pb, [0.0, 1.0]), disc)
        self.assertFalse(report.applicable)
        self.assertFalse(report.passed)
        self.assertTrue(report.reason)


class TestGeneralForm(unittest.TestCase):
    """F(p, xp - y) = 0 with a parametrized zero set"""

    def setUp(self):
        self.pb = ClairautProblem.general(parse("u^3 - v^2", ("u", "v")), semicubic_zero_set())

    def test_lines(self):
        """Zero-set point (s^2, s^3) gives y = s^2 x - s^3"""
        lines = general_line_solutions(self.pb, [-1.0, 0.5, 1.2])
        for line in lines:
            s = line.parameter
            self.assertAlmostEqual(line.slope, s ** 2)
            self.assertAlmostEqual(line.intercept, -s ** 3)
            self.assertLess(residual(self.pb, line, np.linspace(-2.0, 2.0, 9)).max_abs, 1e-12)

    def test_discriminant(self):
        """The singular solution is Y = 4 X^3/27"""
        disc = general_discriminant(self.pb)
        for t in (-1.2, -0.4, 0.3, 1.1):
            x, y = point_jet(disc, t).position
            self.assertAlmostEqual(y, 4.0 * x ** 3 / 27.0, places=12)

    def test_zero_set_must_lie_on_F(self):
        """(t, t) is not on u^3 = v^2"""
        with self.assertRaises(ClairautError):
            ClairautProblem.general(parse("u^3 - v^2", ("u", "v")),
                                    catalog.param(parse("t", ("t",)), parse("t", ("t",)), -1.0, 1.0))

    def test_needs_general_form(self):
        """F-only operations reject the f form"""
        with self.assertRaises(ClairautError):
            general_discriminant(cubic_problem())
        with self.assertRaises(ClairautError):
            discriminant_curve(self.pb)


@pytest.mark.parametrize("kwargs", [
    {},
    {"f": parse("p^3", ("p",)), "general_F": parse("u - v", ("u", "v"))},
    {"f": parse("x*p", ("x", "p"))},
    {"f": parse("p^2", ("p",)), "p_interval": (1.0, -1.0)},
    {"general_F": parse("u - v", ("u", "v"))},
])
def test_problem_validation(kwargs):
    """Malformed problems"""
    with pytest.raises(ClairautError):
        ClairautProblem(**kwargs)


def test_dual_equation():
    """F(x, y, p) = xp - y - p^3 becomes XP - (XP - Y) - X^3 = Y - X^3"""
    F = parse("x*p - y - p^3", ("x", "y", "p"))
    dual = dual_equation(F)
    for X, Y, P in ((1.0, 2.0, 3.0), (-0.5, 0.25, 4.0)):
        assert float(eval_value(dual, {"X": X, "Y": Y, "P": P})) == pytest.approx(Y - X ** 3)
