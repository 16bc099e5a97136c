"""
Smooth parametric planar curves.

A ``ParamCurve`` is a pair of expressions (phi(t), psi(t)) over a closed parameter
interval. Derivatives come from jet evaluation, so curvature, its derivative and
the local singularity type are exact up to rounding. Curves built by composition
(duals, pedals, discriminants) may carry a list of excluded parameters where
their expressions are undefined.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from src.config import Config, default_config
from src.expr.calculus import differentiate, nth_derivative, substitute
from src.expr.evaluate import eval_jet, eval_value
from src.expr.jet3 import Jet3
from src.expr.nodes import Expr, Var, free_variables, to_source
from src.models.schemas import InflectionReport, PointClass, PointJet
from src.utils.error_handler import (CurveRangeError, ExpressionDomainError,
                                     SingularPointError, ValidationError)

logger = logging.getLogger(__name__)

# Relative width of the band around a declared exclusion that sampling skips.
EXCLUSION_WIDTH = 1e-12


def _rows(jet: Jet3, shape: tuple[int, ...]) -> np.ndarray:
    return np.array([np.broadcast_to(np.asarray(v, dtype=float), shape) for v in jet.as_tuple()])


def evaluate_grid(x_expr: Expr, y_expr: Expr, param: str, t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Jets of both coordinates on a parameter grid.

    Returns ``(x, y, valid)`` where ``x`` and ``y`` have rows value, d1, d2, d3 and
    ``valid`` marks samples whose jets evaluated to finite numbers. A domain error
    anywhere on the grid falls back to per-sample evaluation.
    """
    t = np.asarray(t, dtype=float)
    try:
        with np.errstate(all="ignore"):
            x = _rows(eval_jet(x_expr, t, param), t.shape)
            y = _rows(eval_jet(y_expr, t, param), t.shape)
    except ExpressionDomainError:
        x = np.full((4,) + t.shape, np.nan)
        y = np.full((4,) + t.shape, np.nan)
        for i, ti in enumerate(t):
            try:
                with np.errstate(all="ignore"):
                    x[:, i] = eval_jet(x_expr, float(ti), param).as_tuple()
                    y[:, i] = eval_jet(y_expr, float(ti), param).as_tuple()
            except ExpressionDomainError:
                x[:, i] = np.nan
                y[:, i] = np.nan
    valid = np.all(np.isfinite(x), axis=0) & np.all(np.isfinite(y), axis=0)
    return x, y, valid


@dataclass(frozen=True)
class ParamCurve:
    """
    Planar curve x = phi(t), y = psi(t) on [t_min, t_max].

    Construction probes the default sample grid; any sample where the expressions
    cannot be evaluated must be listed in ``excluded``.
    """
    x_expr: Expr
    y_expr: Expr
    t_min: float
    t_max: float
    samples: int = field(default_factory=lambda: default_config.curve_samples)
    param: str = "t"
    name: str = ""
    excluded: tuple[float, ...] = ()

    def __post_init__(self):
        """Validate interval, variables and evaluability"""
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)) or self.t_min >= self.t_max:
            raise ValidationError(f"curve interval must satisfy t_min < t_max, got [{self.t_min}, {self.t_max}]",
                                  field_name="t_range")
        if self.samples < 2:
            raise ValidationError("a curve needs at least 2 samples", field_name="samples")
        extra = (free_variables(self.x_expr) | free_variables(self.y_expr)) - {self.param}
        if extra:
            raise ValidationError(f"curve expressions use unknown variables {sorted(extra)}",
                                  field_name="curve")

        _, _, valid = evaluate_grid(self.x_expr, self.y_expr, self.param, self.grid())
        unexpected = [float(t) for t in self.grid()[~valid] if not self.is_excluded(float(t))]
        if unexpected:
            raise ExpressionDomainError(
                f"curve {self.label} cannot be evaluated at {self.param}={unexpected[0]:.12g}",
                None,
            )

    @property
    def label(self) -> str:
        return self.name or f"({to_source(self.x_expr)}, {to_source(self.y_expr)})"

    @property
    def span(self) -> float:
        return self.t_max - self.t_min

    def grid(self, n: int | None = None) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, n or self.samples)

    def contains(self, t: float) -> bool:
        slack = EXCLUSION_WIDTH * max(1.0, self.span)
        return self.t_min - slack <= t <= self.t_max + slack

    def is_excluded(self, t: float) -> bool:
        width = EXCLUSION_WIDTH * max(1.0, self.span)
        return any(abs(t - e) <= width for e in self.excluded)


@dataclass(frozen=True)
class CurveSamples:
    """Jets of a curve on a sample grid (rows value, d1, d2, d3)"""
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    valid: np.ndarray

    @property
    def excluded(self) -> list[float]:
        return [float(v) for v in self.t[~self.valid]]

    @property
    def points(self) -> np.ndarray:
        """Valid positions as an (n, 2) array"""
        return np.column_stack((self.x[0][self.valid], self.y[0][self.valid]))

    @property
    def speed(self) -> np.ndarray:
        return np.hypot(self.x[1], self.y[1])


def compose_curve(x_expr: Expr, y_expr: Expr, like: ParamCurve, name: str = "",
                  exclude: Callable[[CurveSamples], np.ndarray] | None = None) -> ParamCurve:
    """
    Curve on the parameter interval of ``like`` whose undefined samples are excluded.

    ``exclude`` may flag further samples (vertical tangents, Y = 0 lines) from the
    evaluated jets of the new curve.
    """
    t = like.grid()
    x, y, valid = evaluate_grid(x_expr, y_expr, like.param, t)
    flagged = ~valid
    if exclude is not None:
        flagged |= exclude(CurveSamples(t, x, y, valid))
    excluded = tuple(float(v) for v in t[flagged]) + tuple(like.excluded)
    if excluded:
        logger.debug(f"{name or 'composed curve'}: {int(flagged.sum())} excluded samples")
    return ParamCurve(x_expr, y_expr, like.t_min, like.t_max, like.samples, like.param, name,
                      tuple(sorted(set(excluded))))


def sample(c: ParamCurve, n: int | None = None) -> CurveSamples:
    """Evaluate a curve on a uniform grid, marking undefined and excluded samples invalid"""
    t = c.grid(n)
    x, y, valid = evaluate_grid(c.x_expr, c.y_expr, c.param, t)
    if c.excluded:
        valid &= np.array([not c.is_excluded(float(v)) for v in t])
    return CurveSamples(t, x, y, valid)


def point_jet(c: ParamCurve, t: float) -> PointJet:
    """Position, velocity, acceleration and jerk at t"""
    if not c.contains(t):
        raise CurveRangeError(f"t={t:.12g} outside [{c.t_min:.12g}, {c.t_max:.12g}] of {c.label}", t=t)
    xj = eval_jet(c.x_expr, float(t), c.param)
    yj = eval_jet(c.y_expr, float(t), c.param)
    x, y = xj.as_tuple(), yj.as_tuple()
    return PointJet(*(np.array([float(x[k]), float(y[k])]) for k in range(4)))


def fourth_derivative(c: ParamCurve, t: float) -> np.ndarray:
    """Fourth derivative vector, from the jet of the symbolic first derivative"""
    dx = eval_jet(differentiate(c.x_expr, c.param), float(t), c.param)
    dy = eval_jet(differentiate(c.y_expr, c.param), float(t), c.param)
    return np.array([float(dx.d3), float(dy.d3)])


def velocity_norm(c: ParamCurve, t: float) -> float:
    return float(np.hypot(*point_jet(c, t).velocity))


def _curvature_from(v: np.ndarray, a: np.ndarray, j: np.ndarray) -> tuple:
    """Signed curvature and its t-derivative from stacked derivative vectors"""
    speed2 = v[0] ** 2 + v[1] ** 2
    cross = v[0] * a[1] - v[1] * a[0]
    cross_dot = v[0] * j[1] - v[1] * j[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        speed3 = speed2 ** 1.5
        kappa = cross / speed3
        kappa_prime = cross_dot / speed3 - 3.0 * cross * (v[0] * a[0] + v[1] * a[1]) / (speed2 * speed3)
    return kappa, kappa_prime


def curvature(c: ParamCurve, t: float, config: Config | None = None) -> tuple[float, float]:
    """
    Signed curvature (counterclockwise positive) and its derivative in t.

    Raises:
        SingularPointError: velocity vanishes; the message carries the local type
    """
    config = config or default_config
    _, v, a, j = point_jet(c, t)
    if np.hypot(*v) <= config.singular_tol:
        hint = str(classify_point(c, t, config))
        raise SingularPointError(f"velocity of {c.label} vanishes at t={t:.12g}", t=t, hint=hint)
    kappa, kappa_prime = _curvature_from(v, a, j)
    return float(kappa), float(kappa_prime)


def curvature_samples(samples: CurveSamples, config: Config | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Curvature arrays on a sample grid; NaN at invalid or singular samples"""
    config = config or default_config
    kappa, kappa_prime = _curvature_from(np.array([samples.x[1], samples.y[1]]),
                                         np.array([samples.x[2], samples.y[2]]),
                                         np.array([samples.x[3], samples.y[3]]))
    bad = ~samples.valid | (samples.speed <= config.singular_tol)
    kappa = np.where(bad, np.nan, kappa)
    kappa_prime = np.where(bad, np.nan, kappa_prime)
    return kappa, kappa_prime


def _bisect(fn: Callable[[float], float], a: float, b: float) -> float:
    return float(optimize.bisect(fn, a, b, xtol=1e-15, maxiter=200))


def _dedupe(values: list[float], width: float) -> list[float]:
    result: list[float] = []
    for v in sorted(values):
        if not result or abs(v - result[-1]) > width:
            result.append(v)
    return result


def find_inflections(c: ParamCurve, config: Config | None = None) -> InflectionReport:
    """
    Zeros of curvature on the sample grid.

    Sign changes of kappa are refined by bisection and reported as inflections when
    kappa' stays away from zero; zeros with vanishing kappa' (including touching
    zeros, located through sign changes of kappa') are reported as degenerate, and
    zeros at the interval ends as boundary roots.
    """
    config = config or default_config
    samples = sample(c)
    t = samples.t
    kappa, kappa_prime = curvature_samples(samples, config)
    n = len(t)
    if np.any(samples.valid & (samples.speed <= config.singular_tol)):
        logger.warning(f"{c.label} has singular samples; curvature skipped there")

    def kappa_at(s: float) -> float:
        return curvature(c, s, config)[0]

    def kappa_prime_at(s: float) -> float:
        return curvature(c, s, config)[1]

    inflections: list[float] = []
    degenerate: list[float] = []
    boundary: list[float] = []

    def settle(root: float) -> None:
        _, slope = curvature(c, root, config)
        if abs(slope) <= config.inflection_degenerate_tol:
            degenerate.append(root)
        else:
            inflections.append(root)

    for i in range(n):
        k = kappa[i]
        if not np.isfinite(k):
            continue
        if abs(k) < config.inflection_root_tol:
            if i == 0 or i == n - 1:
                boundary.append(float(t[i]))
            elif np.isfinite(kappa[i - 1]) and np.isfinite(kappa[i + 1]) and kappa[i - 1] * kappa[i + 1] < 0:
                settle(float(t[i]))
            elif abs(kappa_prime[i]) <= config.inflection_degenerate_tol:
                degenerate.append(float(t[i]))
            continue
        if i + 1 < n and np.isfinite(kappa[i + 1]) and abs(kappa[i + 1]) >= config.inflection_root_tol \
                and k * kappa[i + 1] < 0:
            settle(_bisect(kappa_at, float(t[i]), float(t[i + 1])))

    # Touching zeros: kappa' changes sign where kappa itself vanishes.
    for i in range(n - 1):
        kp0, kp1 = kappa_prime[i], kappa_prime[i + 1]
        if not (np.isfinite(kp0) and np.isfinite(kp1)) or kp0 * kp1 >= 0:
            continue
        if kappa[i] * kappa[i + 1] < 0:
            continue
        root = _bisect(kappa_prime_at, float(t[i]), float(t[i + 1]))
        if abs(kappa_at(root)) < config.inflection_root_tol:
            degenerate.append(root)

    width = 1e-9 * max(1.0, c.span)
    report = InflectionReport(
        inflections=_dedupe(inflections, width),
        degenerate=_dedupe(degenerate, width),
        boundary=_dedupe(boundary, width),
    )
    logger.debug(f"{c.label}: {len(report.inflections)} inflections, {len(report.degenerate)} degenerate, "
                 f"{len(report.boundary)} boundary")
    return report


def classify_point(c: ParamCurve, t0: float, config: Config | None = None) -> PointClass:
    """
    Local type of the point at t0.

    A vanishing velocity is matched against x = alpha t^n, y = beta t^(n+1) for
    n = 2 and 3 after rotating the first non-vanishing derivative onto the x-axis;
    anything else is Degenerate.
    """
    config = config or default_config
    tol = config.singular_tol
    _, v1, v2, v3 = point_jet(c, t0)
    if np.hypot(*v1) > tol:
        return PointClass.regular()

    for order, lead, follow, lead_scale, follow_scale in (
            (2, v2, v3, 2.0, 6.0),
            (3, v3, None, 6.0, 24.0)):
        size = float(np.hypot(*lead))
        if size <= tol:
            continue
        if follow is None:
            follow = fourth_derivative(c, t0)
        direction = lead / size
        normal = np.array([-direction[1], direction[0]])
        alpha = size / lead_scale
        beta = float(follow @ normal) / follow_scale
        if abs(beta) <= tol:
            return PointClass.degenerate()
        return PointClass.singular(order, alpha, beta)
    return PointClass.degenerate()


def find_singular_points(c: ParamCurve, config: Config | None = None) -> list[float]:
    """
    Interior parameters where the velocity vanishes.

    Candidates are sign changes of v.a (speed decreasing then increasing), refined by
    bisection and kept when the speed there is below the singularity tolerance.
    """
    config = config or default_config
    samples = sample(c)
    t = samples.t
    radial = samples.x[1] * samples.x[2] + samples.y[1] * samples.y[2]
    found: list[float] = []

    def radial_at(s: float) -> float:
        _, v, a, _ = point_jet(c, s)
        return float(v @ a)

    for i in range(1, len(t) - 1):
        if not (samples.valid[i] and samples.valid[i + 1]):
            continue
        if samples.speed[i] <= config.singular_tol:
            found.append(float(t[i]))
            continue
        if radial[i] < 0 < radial[i + 1]:
            root = _bisect(radial_at, float(t[i]), float(t[i + 1]))
            if velocity_norm(c, root) <= config.singular_tol:
                found.append(root)
    return _dedupe(found, 1e-9 * max(1.0, c.span))


def reparametrize(c: ParamCurve, t_of_s: Expr, s_min: float, s_max: float, param: str = "s") -> ParamCurve:
    """The same curve traced through t = t(s) on [s_min, s_max]"""
    for s in (s_min, s_max):
        t = float(eval_value(t_of_s, {param: s}))
        if not c.contains(t):
            raise CurveRangeError(f"reparametrization maps {param}={s:.12g} to t={t:.12g} outside the curve", t=t)
    mapping = {c.param: t_of_s}
    return ParamCurve(substitute(c.x_expr, mapping), substitute(c.y_expr, mapping), s_min, s_max,
                      c.samples, param, c.name)


def graph_function(c: ParamCurve) -> Expr | None:
    """f when the curve is the graph (t, f(t)), else None"""
    return c.y_expr if c.x_expr == Var(c.param) else None


def flat_order(f: Expr, x0: float, var: str = "x", config: Config | None = None) -> int | None:
    """
    Order of flatness of y = f(x) at x0.

    Returns the smallest n >= 2 with f'' .. f^(n) vanishing and f^(n+1) non-zero, 1
    when f''(x0) != 0, and None when every derivative checked vanishes.
    """
    config = config or default_config
    tol = config.singular_tol
    derivative = nth_derivative(f, var, 2)
    if abs(float(eval_value(derivative, {var: x0}))) > tol:
        return 1
    for order in range(2, config.max_flat_order + 1):
        derivative = differentiate(derivative, var)
        if abs(float(eval_value(derivative, {var: x0}))) > tol:
            return order
    return None


def is_degenerate(c: ParamCurve, config: Config | None = None) -> bool:
    """True when the velocity vanishes at every valid sample (the curve is a point)"""
    config = config or default_config
    samples = sample(c)
    speeds = samples.speed[samples.valid]
    return bool(speeds.size) and bool(np.all(speeds <= config.singular_tol))
