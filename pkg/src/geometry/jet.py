"""
The 1-jet space J1 with coordinates (x, y, p).

A curve is lifted by attaching its tangent slope to every point. Near vertical
tangents the slope is stored in chart Q as the co-slope dx/dy; at singular points
the slope is continued by L'Hopital from the second, then third derivatives.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.config import Config, default_config
from src.expr.evaluate import eval_jet
from src.expr.nodes import Expr
from src.geometry.curve import ParamCurve, point_jet
from src.models.enums import Chart
from src.models.schemas import J1Point
from src.utils.error_handler import ExpressionDomainError, SingularPointError

logger = logging.getLogger(__name__)


def _point_from_direction(x: float, y: float, dx: float, dy: float) -> J1Point:
    """Chart Q when |dx| < |dy|, so the stored slope never exceeds 1 in magnitude"""
    if abs(dx) < abs(dy):
        return J1Point(x, y, dx / dy, Chart.Q)
    return J1Point(x, y, dy / dx, Chart.P)


def _line_angle(direction: np.ndarray) -> float:
    """Angle of the line spanned by a direction, in (-pi/2, pi/2]"""
    angle = math.atan2(direction[1], direction[0])
    if angle > math.pi / 2:
        angle -= math.pi
    elif angle <= -math.pi / 2:
        angle += math.pi
    return angle


def _angle_gap(a: float, b: float) -> float:
    """Distance between two line angles modulo pi"""
    gap = abs(a - b) % math.pi
    return min(gap, math.pi - gap)


def slope_at(c: ParamCurve, t: float, config: Config | None = None) -> J1Point:
    """
    Lifted point of ``c`` at ``t``.

    Raises:
        SingularPointError: every derivative up to order 3 vanishes, or the one-sided
            tangent directions disagree with the continued slope
    """
    config = config or default_config
    position, v1, v2, v3 = point_jet(c, t)
    x, y = float(position[0]), float(position[1])
    if np.hypot(*v1) > config.singular_tol:
        return _point_from_direction(x, y, float(v1[0]), float(v1[1]))

    for lead in (v2, v3):
        if np.hypot(*lead) > config.singular_tol:
            break
    else:
        raise SingularPointError(f"all derivatives of {c.label} vanish at t={t:.12g}", t=t,
                                 hint="slope cannot be continued")

    limit = _line_angle(lead)
    h = 1e-8 * max(1.0, c.span)
    for side in (t - h, t + h):
        if not (c.t_min <= side <= c.t_max):
            continue
        _, velocity, _, _ = point_jet(c, side)
        if not np.any(velocity):
            continue
        if _angle_gap(_line_angle(velocity), limit) > config.limit_rel_tol * max(1.0, abs(limit)):
            raise SingularPointError(f"one-sided tangents of {c.label} disagree at t={t:.12g}", t=t,
                                     hint="corner point")
    logger.debug(f"Continued slope of {c.label} at singular t={t:.12g}")
    return _point_from_direction(x, y, float(lead[0]), float(lead[1]))


@dataclass(frozen=True)
class J1Curve:
    """
    Sampled curve in J1.

    ``slope_expr`` is set only for hand-built curves whose third coordinate is
    prescribed rather than derived from the base curve.
    """
    base: ParamCurve
    t: np.ndarray
    points: tuple[J1Point, ...]
    excluded: tuple[float, ...] = ()
    slope_expr: Expr | None = None
    slope_chart: Chart = Chart.P

    def __len__(self) -> int:
        return len(self.points)

    @property
    def xs(self) -> np.ndarray:
        return np.array([pt.x for pt in self.points])

    @property
    def ys(self) -> np.ndarray:
        return np.array([pt.y for pt in self.points])

    @property
    def charts(self) -> list[Chart]:
        return [pt.chart for pt in self.points]

    def point_at(self, t: float, config: Config | None = None) -> J1Point:
        if self.slope_expr is None:
            return slope_at(self.base, t, config)
        position = point_jet(self.base, t).position
        slope = float(eval_jet(self.slope_expr, float(t), self.base.param).value)
        return J1Point(float(position[0]), float(position[1]), slope, self.slope_chart)

    @classmethod
    def from_expressions(cls, x_expr: Expr, y_expr: Expr, slope_expr: Expr, t_min: float, t_max: float,
                         samples: int | None = None, chart: Chart = Chart.P,
                         param: str = "t") -> J1Curve:
        """Curve in J1 with a prescribed third coordinate, integral or not"""
        n = samples or default_config.lift_samples
        base = ParamCurve(x_expr, y_expr, t_min, t_max, n, param)
        t = base.grid(n)
        points = []
        for ti in t:
            position = point_jet(base, float(ti)).position
            slope = float(eval_jet(slope_expr, float(ti), param).value)
            points.append(J1Point(float(position[0]), float(position[1]), slope, chart))
        return cls(base, t, tuple(points), (), slope_expr, chart)


def lift(c: ParamCurve, samples: int | None = None, config: Config | None = None) -> J1Curve:
    """
    Legendrian lift of a curve on a uniform grid.

    Samples where the curve is undefined or excluded are skipped and listed in
    ``excluded``; singular samples get the continued slope.

    Raises:
        SingularPointError: a singular sample whose slope cannot be continued
    """
    config = config or default_config
    n = samples or config.lift_samples
    t = c.grid(n)
    kept_t: list[float] = []
    points: list[J1Point] = []
    excluded: list[float] = []
    for ti in t:
        ti = float(ti)
        if c.is_excluded(ti):
            excluded.append(ti)
            continue
        try:
            point = slope_at(c, ti, config)
        except ExpressionDomainError:
            excluded.append(ti)
            continue
        kept_t.append(ti)
        points.append(point)
    if excluded:
        logger.warning(f"Lift of {c.label}: {len(excluded)} samples excluded")
    logger.debug(f"Lifted {c.label} at {len(points)} samples")
    return J1Curve(c, np.array(kept_t), tuple(points), tuple(excluded))


def contact_residual(jc: J1Curve, t: float, config: Config | None = None) -> float:
    """p x'(t) - y'(t) in chart P, q y'(t) - x'(t) in chart Q"""
    point = jc.point_at(t, config)
    velocity = point_jet(jc.base, t).velocity
    if point.chart is Chart.P:
        return float(point.slope * velocity[0] - velocity[1])
    return float(point.slope * velocity[1] - velocity[0])


def theta_coordinate(pt: J1Point) -> float:
    """Angle arctan(p) of the tangent, in (-pi/2, pi/2]"""
    if pt.chart is Chart.P:
        return math.atan(pt.slope)
    theta = math.pi / 2 - math.atan(pt.slope)
    if theta > math.pi / 2:
        theta -= math.pi
    return theta
