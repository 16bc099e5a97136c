"""
Clairaut equations solved through duality.

The Legendre transformation sends xp - y = f(p) to the derivative-free Y = f(X),
so every solution is either a line y = cx - f(c) or the discriminant curve
x = f'(p), y = p f'(p) - f(p), the envelope of those lines. The generalized form
F(p, xp - y) = 0 works the same way with the zero set of F in place of the graph
of f.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from src.config import Config, default_config
from src.expr.calculus import differentiate, substitute
from src.expr.evaluate import eval_value
from src.expr.nodes import Expr, Var, free_variables
from src.geometry.curve import ParamCurve, is_degenerate, point_jet, sample
from src.geometry.duality import dual_curve
from src.geometry.jet import slope_at
from src.models.enums import Chart
from src.utils.error_handler import ClairautError, ExpressionDomainError, SingularPointError

logger = logging.getLogger(__name__)

JET_VARIABLES = ("x", "y", "p")
DUAL_VARIABLES = ("X", "Y", "P")


@dataclass(frozen=True)
class ClairautProblem:
    """
    Either xp - y = f(p) (``f`` in the variable p) or F(p, xp - y) = 0 (``general_F``
    in the variables u, v) together with a parametrization of the zero set of F.
    """
    f: Expr | None = None
    general_F: Expr | None = None
    zero_set: ParamCurve | None = None
    p_interval: tuple[float, float] = (-2.0, 2.0)
    samples: int = field(default_factory=lambda: default_config.curve_samples)

    def __post_init__(self):
        """Validate the problem form"""
        if (self.f is None) == (self.general_F is None):
            raise ClairautError("give exactly one of f (in p) or F (in u, v)")
        if self.f is not None:
            extra = free_variables(self.f) - {"p"}
            if extra:
                raise ClairautError(f"f may only use the variable p, found {sorted(extra)}")
            lo, hi = self.p_interval
            if not lo < hi:
                raise ClairautError(f"p interval must satisfy min < max, got {self.p_interval}")
            return
        extra = free_variables(self.general_F) - {"u", "v"}
        if extra:
            raise ClairautError(f"F may only use the variables u, v, found {sorted(extra)}")
        if self.zero_set is None:
            raise ClairautError("general form needs a parametrization of the zero set of F")
        self._check_zero_set()

    def _check_zero_set(self) -> None:
        samples = sample(self.zero_set)
        u, v = samples.x[0][samples.valid], samples.y[0][samples.valid]
        with np.errstate(all="ignore"):
            residual = np.broadcast_to(np.asarray(eval_value(self.general_F, {"u": u, "v": v}), dtype=float),
                                       u.shape)
        worst = float(np.max(np.abs(residual))) if residual.size else 0.0
        if not np.isfinite(worst) or worst >= default_config.zero_set_tol:
            raise ClairautError(f"zero-set parametrization misses F = 0 by {worst:.3g}")

    @property
    def is_general(self) -> bool:
        return self.general_F is not None

    @classmethod
    def from_function(cls, f: Expr, p_min: float = -2.0, p_max: float = 2.0) -> ClairautProblem:
        return cls(f=f, p_interval=(p_min, p_max))

    @classmethod
    def general(cls, F: Expr, zero_set: ParamCurve) -> ClairautProblem:
        return cls(general_F=F, zero_set=zero_set)


@dataclass(frozen=True)
class LineSolution:
    """y = slope * x + intercept; ``parameter`` locates its tangency on the discriminant"""
    slope: float
    intercept: float
    parameter: float

    def y_at(self, x):
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class SingularSolution:
    curve: ParamCurve


ClairautSolution = LineSolution | SingularSolution


@dataclass
class ResidualReport:
    """Largest ODE residual over the evaluated samples"""
    max_abs: float
    evaluated: int
    skipped: list[float] = field(default_factory=list)


@dataclass
class TangencyCheck:
    parameter: float
    point_error: float
    slope_error: float
    passed: bool


@dataclass
class EnvelopeReport:
    applicable: bool
    checks: list[TangencyCheck] = field(default_factory=list)
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.applicable and all(check.passed for check in self.checks)


def dual_equation(F: Expr, source: tuple[str, str, str] = JET_VARIABLES,
                  target: tuple[str, str, str] = DUAL_VARIABLES) -> Expr:
    """F*(X, Y, P) = F(P, XP - Y, X)"""
    x, y, p = source
    X, Y, P = (Var(name) for name in target)
    return substitute(F, {x: P, y: X * P - Y, p: X})


def discriminant_curve(pb: ClairautProblem) -> ParamCurve:
    """Singular solution x = f'(p), y = p f'(p) - f(p)"""
    if pb.f is None:
        raise ClairautError("discriminant_curve needs the f form; use general_discriminant")
    slope = differentiate(pb.f, "p")
    lo, hi = pb.p_interval
    curve = ParamCurve(slope, Var("p") * slope - pb.f, lo, hi, pb.samples, "p", "discriminant")
    if is_degenerate(curve):
        logger.info("Discriminant collapses to a point (f is affine)")
    return curve


def general_discriminant(pb: ClairautProblem, config: Config | None = None) -> ParamCurve:
    """Dual of the zero set of F; the singular solution of F(p, xp - y) = 0"""
    if not pb.is_general:
        raise ClairautError("general_discriminant needs the F form")
    return dual_curve(pb.zero_set, config)


def line_solutions(pb: ClairautProblem, c_values) -> list[LineSolution]:
    """
    Lines y = cx - f(c), or for the general form y = ax + b with (a, -b) on the zero
    set at parameter c.

    Raises:
        ExpressionDomainError: c outside the domain of f or of the zero set
    """
    lines = []
    for c in (float(v) for v in c_values):
        if pb.is_general:
            position = point_jet(pb.zero_set, c).position
            lines.append(LineSolution(float(position[0]), -float(position[1]), c))
        else:
            lines.append(LineSolution(c, -float(eval_value(pb.f, {"p": c})), c))
    return lines


def general_line_solutions(pb: ClairautProblem, s_values) -> list[LineSolution]:
    if not pb.is_general:
        raise ClairautError("general_line_solutions needs the F form")
    return line_solutions(pb, s_values)


def _ode_residual(pb: ClairautProblem, x: float, y: float, p: float) -> float:
    v = x * p - y
    if pb.is_general:
        return float(eval_value(pb.general_F, {"u": p, "v": v}))
    return float(v - eval_value(pb.f, {"p": p}))


def residual(pb: ClairautProblem, sol: ClairautSolution, t_samples, config: Config | None = None) -> ResidualReport:
    """
    max |x y' - y - f(y')| (or |F(y', x y' - y)|) over the samples.

    For a line the samples are x values; for a singular solution they are curve
    parameters. Vertical tangents are skipped and reported.
    """
    config = config or default_config
    worst = 0.0
    evaluated = 0
    skipped: list[float] = []
    for t in (float(v) for v in t_samples):
        match sol:
            case LineSolution(slope=c):
                value = _ode_residual(pb, t, sol.y_at(t), c)
            case SingularSolution(curve=curve):
                try:
                    point = slope_at(curve, t, config)
                except (SingularPointError, ExpressionDomainError):
                    skipped.append(t)
                    continue
                if point.chart is Chart.Q and point.slope == 0.0:
                    skipped.append(t)
                    continue
                value = _ode_residual(pb, point.x, point.y, point.p)
            case _:
                raise ClairautError(f"not a Clairaut solution: {sol!r}")
        worst = max(worst, abs(value))
        evaluated += 1
    if skipped:
        logger.warning(f"Residual skipped {len(skipped)} samples (vertical tangent or singular)")
    return ResidualReport(worst, evaluated, skipped)


def envelope_check(pb: ClairautProblem, lines: list[LineSolution], disc: ParamCurve,
                   tol: float = 1e-8, config: Config | None = None) -> EnvelopeReport:
    """
    Check that each line touches the discriminant at its own parameter.

    Verifies that the line passes through disc(parameter) and that its slope equals
    the tangent slope of the discriminant there.
    """
    config = config or default_config
    if is_degenerate(disc, config):
        return EnvelopeReport(False, reason="discriminant is a single point; envelope undefined")

    checks = []
    for line in lines:
        point = slope_at(disc, line.parameter, config)
        point_error = abs(line.y_at(point.x) - point.y)
        tangent = point.p
        slope_error = abs(tangent - line.slope) if np.isfinite(tangent) else np.inf
        passed = point_error <= tol and slope_error <= tol * max(1.0, abs(line.slope))
        checks.append(TangencyCheck(line.parameter, point_error, slope_error, passed))
    report = EnvelopeReport(True, checks)
    logger.debug(f"Envelope check: {sum(c.passed for c in checks)}/{len(checks)} tangencies pass")
    return report
