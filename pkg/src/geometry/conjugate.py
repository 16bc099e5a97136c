"""
Legendre transformation of functions of one variable.

The sup formula f*(p) = sup_x (xp - f(x)) is evaluated on a dense x grid and
refined by golden-section search around the grid maximizer (a bounded search when
it sits in an end cell). A maximizer within one grid cell of an interval end whose
objective still increases outward means there is no critical point, and the value
is +inf. The derivative-parametrized form (f'(t), t f'(t) - f(t)) is exact and
serves as the closed form.
"""
from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np
from scipy import optimize

from src.config import Config, default_config
from src.expr.calculus import differentiate, rename
from src.expr.evaluate import eval_jet, eval_value
from src.expr.nodes import Expr, Var
from src.geometry.curve import ParamCurve
from src.models.schemas import ConjugateResult
from src.utils.error_handler import ConvexityError, ExpressionDomainError, ValidationError

logger = logging.getLogger(__name__)


def _interval(bounds: tuple[float, float], name: str) -> tuple[float, float]:
    lo, hi = (float(b) for b in bounds)
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ValidationError(f"{name} must satisfy min < max, got [{lo}, {hi}]", field_name=name)
    return lo, hi


def _p_grid(p_grid) -> np.ndarray:
    grid = np.asarray(p_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValidationError("p grid is empty", field_name="p_grid")
    if not np.all(np.isfinite(grid)):
        raise ValidationError("p grid must be finite", field_name="p_grid")
    return grid


def _scalar(f: Expr, var: str) -> Callable[[float], float]:
    def value(x: float) -> float:
        return float(eval_value(f, {var: x}))
    return value


def check_convexity(f: Expr, x: np.ndarray, var: str = "x", sign: float = 1.0,
                    config: Config | None = None) -> None:
    """
    Require sign * f'' > 0 at every probe.

    Raises:
        ConvexityError: first probe where the second derivative has the wrong sign
    """
    config = config or default_config
    with np.errstate(all="ignore"):
        second = np.broadcast_to(np.asarray(eval_jet(f, x, var).d2, dtype=float), x.shape)
    bad = ~(sign * second > config.convexity_tol)
    if np.any(bad):
        probe = float(x[np.argmax(bad)])
        shape = "convex" if sign > 0 else "concave"
        raise ConvexityError(f"f is not strictly {shape}: f''({probe:.12g}) = {second[np.argmax(bad)]:.6g}",
                             probe=probe)


def sup_on_grid(objective: Callable[[float], float], grid: np.ndarray, values: np.ndarray,
                outward_left: float, outward_right: float, xtol: float) -> float:
    """
    Supremum of a concave objective sampled on ``grid``.

    ``outward_left``/``outward_right`` are the objective's slopes pointing out of
    the interval at each end; a positive outward slope at a boundary maximizer
    yields +inf. Otherwise the grid maximizer is refined: golden section on an
    interior bracket, bounded Brent search in an end cell.
    """
    i = int(np.argmax(values))
    n = len(grid)
    if i <= 1 and outward_left > 0:
        return np.inf
    if i >= n - 2 and outward_right > 0:
        return np.inf
    best = float(values[i])
    try:
        if 0 < i < n - 1:
            # Search in u = s - center + 1 so golden's relative tolerance acts as an absolute one.
            center = float(grid[i])
            result = optimize.minimize_scalar(lambda u: -objective(center + (u - 1.0)),
                                              bracket=(grid[i - 1] - center + 1.0, 1.0, grid[i + 1] - center + 1.0),
                                              method="golden", tol=xtol)
            if grid[0] <= center + (result.x - 1.0) <= grid[-1]:
                best = max(best, -float(result.fun))
        elif n > 1:
            cell = (float(grid[0]), float(grid[1])) if i == 0 else (float(grid[-2]), float(grid[-1]))
            result = optimize.minimize_scalar(lambda s: -objective(s), bounds=cell, method="bounded",
                                              options={"xatol": xtol})
            best = max(best, -float(result.fun))
    except (ValueError, ExpressionDomainError):
        logger.debug(f"Refinement rejected near {grid[i]:.12g}; keeping grid value")
    return best


def _transform(f: Expr, x_interval: tuple[float, float], p_grid, var: str, sign: float,
               config: Config) -> ConjugateResult:
    lo, hi = _interval(x_interval, "x_interval")
    grid = _p_grid(p_grid)
    x = np.linspace(lo, hi, config.conjugate_grid)
    check_convexity(f, x, var, sign, config)

    with np.errstate(all="ignore"):
        jet = eval_jet(f, x, var)
    fx = np.broadcast_to(np.asarray(jet.value, dtype=float), x.shape)
    slopes = np.broadcast_to(np.asarray(jet.d1, dtype=float), x.shape)
    value_of = _scalar(f, var)

    out = np.empty_like(grid)
    for k, p in enumerate(grid):
        # sign=+1: sup_x (xp - f);  sign=-1: sup_x (f - xp)
        objective_values = sign * (x * p - fx)
        derivative_left = sign * (p - slopes[0])
        derivative_right = sign * (p - slopes[-1])
        out[k] = sup_on_grid(lambda s, p=p: sign * (s * p - value_of(s)), x, objective_values,
                             -derivative_left, derivative_right, config.golden_xtol)
    domain = ConjugateResult.domain_of(grid, out)
    logger.debug(f"Conjugate on {grid.size} p values: {int(np.isfinite(out).sum())} finite")
    return ConjugateResult(grid, out, domain)


def conjugate_sup(f: Expr, x_interval: tuple[float, float], p_grid, var: str = "x",
                  config: Config | None = None) -> ConjugateResult:
    """
    f*(p) = sup_x (xp - f(x)) for strictly convex f.

    Raises:
        ConvexityError: f'' <= 0 at some probe of the x grid
        ValidationError: empty p grid or bad interval
    """
    return _transform(f, x_interval, p_grid, var, 1.0, config or default_config)


def conjugate_concave(f: Expr, x_interval: tuple[float, float], p_grid, var: str = "x",
                      config: Config | None = None) -> ConjugateResult:
    """f*(p) = sup_x (f(x) - xp) for strictly concave f"""
    return _transform(f, x_interval, p_grid, var, -1.0, config or default_config)


def _second_derivative_sign(f: Expr, t_interval: tuple[float, float], var: str, config: Config) -> float:
    lo, hi = t_interval
    t = np.linspace(lo, hi, config.curve_samples)
    with np.errstate(all="ignore"):
        second = np.broadcast_to(np.asarray(eval_jet(f, t, var).d2, dtype=float), t.shape)
    if np.all(second > 0):
        return 1.0
    if np.all(second < 0):
        return -1.0
    idx = int(np.argmin(np.abs(second)))
    changes = np.nonzero(np.sign(second[:-1]) * np.sign(second[1:]) < 0)[0]
    if changes.size:
        i = int(changes[0])
        root = float(optimize.bisect(lambda s: float(eval_jet(f, s, var).d2), t[i], t[i + 1], xtol=1e-14))
    else:
        root = float(t[idx])
    raise ConvexityError(f"f'' vanishes at {var}={root:.12g} (inflection)", probe=root)


def conjugate_param(f: Expr, t_interval: tuple[float, float], var: str = "x",
                    config: Config | None = None) -> ParamCurve:
    """
    Parametric conjugate X = f'(t), Y = t f'(t) - f(t).

    Raises:
        ConvexityError: f'' vanishes on the interval
    """
    config = config or default_config
    lo, hi = _interval(t_interval, "t_interval")
    _second_derivative_sign(f, (lo, hi), var, config)
    g = rename(f, var, "t")
    slope = differentiate(g, "t")
    return ParamCurve(slope, Var("t") * slope - g, lo, hi, name="conjugate")


def conjugate_param_values(f: Expr, t_interval: tuple[float, float], p_grid, var: str = "x",
                           config: Config | None = None) -> ConjugateResult:
    """
    Conjugate values on a p grid from the parametric form.

    Each p in the range of f' over the interval is inverted with Brent's method;
    p outside that range gets +inf.
    """
    config = config or default_config
    lo, hi = _interval(t_interval, "t_interval")
    sign = _second_derivative_sign(f, (lo, hi), var, config)
    grid = _p_grid(p_grid)
    slope = differentiate(f, var)
    slope_at = _scalar(slope, var)
    value_of = _scalar(f, var)
    ends = sorted((slope_at(lo), slope_at(hi)))

    out = np.full_like(grid, np.inf)
    for k, p in enumerate(grid):
        if not ends[0] <= p <= ends[1]:
            continue
        if p == slope_at(lo):
            t = lo
        elif p == slope_at(hi):
            t = hi
        else:
            t = optimize.brentq(lambda s: slope_at(s) - p, lo, hi, xtol=1e-14)
        out[k] = sign * (t * p - value_of(t))
    return ConjugateResult(grid, out, ConjugateResult.domain_of(grid, out))


def biconjugate(f: Expr, x_interval: tuple[float, float], p_interval: tuple[float, float], x_points,
                var: str = "x", config: Config | None = None) -> ConjugateResult:
    """
    f**(x) = sup_p (xp - f*(p)) with f* from the sup formula on ``p_interval``.

    Accurate where the maximizing p = f'(x) lies inside ``p_interval``.
    """
    config = config or default_config
    p_lo, p_hi = _interval(p_interval, "p_interval")
    points = np.unique(_p_grid(x_points))
    p = np.linspace(p_lo, p_hi, config.biconjugate_grid)
    first = conjugate_sup(f, x_interval, p, var, config)
    finite = first.finite
    if not np.any(finite):
        raise ConvexityError("conjugate is +inf on the whole p interval")
    p, f_star = p[finite], first.values[finite]

    def f_star_at(s: float) -> float:
        return float(conjugate_sup(f, x_interval, [s], var, config).values[0])

    # f* of a strictly convex f is convex, so xp - f*(p) is concave in p.
    values = np.empty_like(points)
    for k, x in enumerate(points):
        values[k] = sup_on_grid(lambda s, x=x: x * s - f_star_at(s), p, x * p - f_star,
                                -np.inf, -np.inf, config.golden_xtol)
    return ConjugateResult(points, values, ConjugateResult.domain_of(points, values))


def fenchel_young_gap(f: Expr, conjugate: ConjugateResult, x_points, var: str = "x") -> np.ndarray:
    """
    Matrix of f(x) + f*(p) - xp over x_points (rows) and finite grid p (columns).

    Young's inequality makes every entry non-negative.
    """
    x = _p_grid(x_points)
    with np.errstate(all="ignore"):
        fx = np.broadcast_to(np.asarray(eval_value(f, {var: x}), dtype=float), x.shape)
    finite = conjugate.finite
    p = conjugate.grid[finite]
    return fx[:, None] + conjugate.values[finite][None, :] - x[:, None] * p[None, :]
