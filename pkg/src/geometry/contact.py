"""
Contact transformations of J1 and the pedal group.

A map X = F(x, y, p), Y = G(x, y, p) is contact when
F_p (G_x + p G_y) = G_p (F_x + p F_y); the slope of the image is then the induced
third component H. The pedal transformation (foot of the perpendicular from a
pole to each tangent line) is the Legendre map followed by
(X, Y) -> (XY / (1 + X^2), -Y / (1 + X^2)). In polar-contact coordinates
(r, phi, psi) it embeds in the one-parameter group R = r |sin psi|^n,
Phi = phi - n (psi + pi/2), Psi = psi.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.config import Config, default_config
from src.expr.calculus import differentiate, substitute
from src.expr.evaluate import eval_value, partials
from src.expr.nodes import Expr, Var, free_variables
from src.expr.parser import parse
from src.geometry.curve import ParamCurve, compose_curve, sample
from src.geometry.jet import lift, theta_coordinate
from src.models.enums import Chart
from src.models.schemas import J1Point, LiePoint
from src.utils.error_handler import ChartError, ContactError, ExpressionDomainError, ValidationError

logger = logging.getLogger(__name__)

JET_VARIABLES = ("x", "y", "p")
P_PRIME_PROBES = (0.0, 1.0, -1.0, 2.0)


@dataclass(frozen=True)
class ContactMap:
    """X = F(x, y, p), Y = G(x, y, p); contactness is decided by the checker, not assumed"""
    F: Expr
    G: Expr
    name: str = ""

    def __post_init__(self):
        """Validate variables"""
        extra = (free_variables(self.F) | free_variables(self.G)) - set(JET_VARIABLES)
        if extra:
            raise ValidationError(f"contact map may only use x, y, p; found {sorted(extra)}", field_name="map")

    def gradients(self, x: float, y: float, p: float) -> tuple[float, dict[str, float], float, dict[str, float]]:
        point = {"x": x, "y": y, "p": p}
        f_value, f_grad = partials(self.F, point, JET_VARIABLES)
        g_value, g_grad = partials(self.G, point, JET_VARIABLES)
        return f_value, f_grad, g_value, g_grad


@functools.cache
def legendre_map() -> ContactMap:
    return ContactMap(Var("p"), Var("x") * Var("p") - Var("y"), "legendre")


@functools.cache
def identity_map() -> ContactMap:
    return ContactMap(Var("x"), Var("y"), "identity")


@functools.cache
def pedal_map() -> ContactMap:
    """Legendre map composed with the planar map of the pedal construction"""
    legendre = legendre_map()
    images = {"X": legendre.F, "Y": legendre.G}
    X_bar = substitute(parse("X*Y/(1 + X^2)", ("X", "Y")), images)
    Y_bar = substitute(parse("-Y/(1 + X^2)", ("X", "Y")), images)
    return ContactMap(X_bar, Y_bar, "pedal")


def contact_defect(m: ContactMap, x: float, y: float, p: float) -> float:
    """F_p (G_x + p G_y) - G_p (F_x + p F_y)"""
    _, dF, _, dG = m.gradients(x, y, p)
    return dF["p"] * (dG["x"] + p * dG["y"]) - dG["p"] * (dF["x"] + p * dF["y"])


def induced_third(m: ContactMap, x: float, y: float, p: float, config: Config | None = None) -> float:
    """
    Slope H = dY/dX of the image of a curve through (x, y, p).

    Uses (G_x + p G_y) / (F_x + p F_y), or G_p / F_p where the first denominator
    vanishes, and checks that the general quotient does not depend on p'.

    Raises:
        ChartError: both quotients are undefined
        ContactError: the quotient depends on p' (the map is not contact here)
    """
    config = config or default_config
    tol = config.contact_tol
    _, dF, _, dG = m.gradients(x, y, p)
    numerator = dG["x"] + p * dG["y"]
    denominator = dF["x"] + p * dF["y"]
    if abs(denominator) > tol:
        H = numerator / denominator
    elif abs(dF["p"]) > tol:
        H = dG["p"] / dF["p"]
    else:
        raise ChartError(f"induced slope undefined at ({x:.6g}, {y:.6g}, {p:.6g}): image has a vertical tangent")

    quotients = []
    for p_prime in P_PRIME_PROBES:
        den = denominator + p_prime * dF["p"]
        if abs(den) > tol:
            quotients.append((numerator + p_prime * dG["p"]) / den)
    if quotients and max(quotients) - min(quotients) > config.p_prime_spread_tol * max(1.0, abs(H)):
        raise ContactError(f"{m.name or 'map'} is not contact at ({x:.6g}, {y:.6g}, {p:.6g}): "
                           f"image slope depends on p'", defect=contact_defect(m, x, y, p))
    return float(H)


@dataclass
class ContactReport:
    probes: int
    max_defect: float
    is_contact: bool
    skipped: int = 0


def contact_report(m: ContactMap, probes: int = 1000, seed: int = 0, box: float = 2.0,
                   config: Config | None = None) -> ContactReport:
    """Contact defect on random probes in [-box, box]^3"""
    config = config or default_config
    rng = np.random.default_rng(seed)
    worst = 0.0
    skipped = 0
    for x, y, p in rng.uniform(-box, box, size=(probes, 3)):
        try:
            defect = contact_defect(m, float(x), float(y), float(p))
        except ExpressionDomainError:
            skipped += 1
            continue
        worst = max(worst, abs(defect))
    is_contact = worst < config.contact_tol and skipped < probes
    logger.info(f"Contact check of {m.name or 'map'}: max |defect| {worst:.3g} over {probes - skipped} probes")
    return ContactReport(probes, worst, is_contact, skipped)


def _to_chart_p(pt: J1Point) -> J1Point:
    if pt.chart is Chart.Q:
        if pt.slope == 0.0:
            raise ChartError(f"vertical tangent at ({pt.x:.6g}, {pt.y:.6g})")
        return pt.to_chart(Chart.P)
    return pt


def pedal_point(pt: J1Point, pole: tuple[float, float] = (0.0, 0.0), config: Config | None = None) -> J1Point:
    """
    Foot of the perpendicular from the pole to the tangent line at ``pt``, with the
    slope of the pedal curve there.

    Raises:
        ChartError: vertical tangent, or tangent line through the pole
    """
    config = config or default_config
    ox, oy = pole
    local = _to_chart_p(pt)
    x, y, p = local.x - ox, local.y - oy, local.slope
    m = pedal_map()
    point = {"x": x, "y": y, "p": p}
    X_bar = float(eval_value(m.F, point))
    Y_bar = float(eval_value(m.G, point))
    if math.hypot(X_bar, Y_bar) <= config.contact_tol:
        raise ChartError(f"tangent line at ({pt.x:.6g}, {pt.y:.6g}) passes through the pole")
    P_bar = induced_third(m, x, y, p, config)
    return J1Point(X_bar + ox, Y_bar + oy, P_bar, Chart.P)


def pedal_curve(c: ParamCurve, pole: tuple[float, float] = (0.0, 0.0), config: Config | None = None) -> ParamCurve:
    """
    Pedal curve as a composed expression.

    Uses foot = ((x - o) x v) / |v|^2 * (v_y, -v_x) + o, which agrees with the
    pointwise construction and stays defined at vertical tangents; singular points
    of ``c`` are excluded.
    """
    config = config or default_config
    lift(c, config=config)
    ox, oy = pole
    dx = differentiate(c.x_expr, c.param)
    dy = differentiate(c.y_expr, c.param)
    cross = (c.x_expr - ox) * dy - (c.y_expr - oy) * dx
    scale = cross / (dx ** 2 + dy ** 2)

    base = sample(c)
    with np.errstate(invalid="ignore"):
        singular = base.speed <= config.singular_tol
    curve = compose_curve(scale * dy + ox, -(scale * dx) + oy, c,
                          name=f"pedal({c.label}; {ox:g},{oy:g})", exclude=lambda _: singular)
    logger.debug(f"Pedal of {c.label} about ({ox:g}, {oy:g}): {len(curve.excluded)} excluded samples")
    return curve


@dataclass
class PedalSamples:
    t: np.ndarray
    points: list[J1Point]
    flagged: list[float] = field(default_factory=list)

    @property
    def xy(self) -> np.ndarray:
        return np.array([(pt.x, pt.y) for pt in self.points]).reshape(-1, 2)


def pedal_samples(c: ParamCurve, pole: tuple[float, float] = (0.0, 0.0), samples: int | None = None,
                  config: Config | None = None) -> PedalSamples:
    """pedal_point along the lift of ``c``; failing samples are flagged"""
    jc = lift(c, samples, config)
    kept, points, flagged = [], [], list(jc.excluded)
    for t, pt in zip(jc.t, jc.points):
        try:
            points.append(pedal_point(pt, pole, config))
            kept.append(float(t))
        except (ChartError, ContactError):
            flagged.append(float(t))
    if flagged:
        logger.warning(f"Pedal of {c.label}: {len(flagged)} flagged samples")
    return PedalSamples(np.array(kept), points, sorted(flagged))


def wrap_angle(angle: float) -> float:
    """Angle in (-pi, pi]"""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def to_lie(pt: J1Point) -> LiePoint:
    """
    Polar-contact coordinates (r, phi, psi) with psi = phi - arctan(p).

    Raises:
        ChartError: the point is the pole
    """
    r = math.hypot(pt.x, pt.y)
    if r == 0.0:
        raise ChartError("polar-contact coordinates are undefined at the pole")
    phi = math.atan2(pt.y, pt.x)
    return LiePoint(r, phi, phi - theta_coordinate(pt))


def from_lie(lp: LiePoint) -> J1Point:
    """Back to (x, y, p); a vertical tangent comes back in chart Q"""
    x, y = lp.r * math.cos(lp.phi), lp.r * math.sin(lp.phi)
    theta = lp.phi - lp.psi
    c, s = math.cos(theta), math.sin(theta)
    if abs(c) <= default_config.sin_psi_tol:
        return J1Point(x, y, c / s, Chart.Q)
    return J1Point(x, y, s / c, Chart.P)


def pedal_power(lp: LiePoint, n: float, config: Config | None = None) -> LiePoint:
    """
    (R, Phi, Psi) = (r |sin psi|^n, phi - n (psi + pi/2), psi).

    Raises:
        ChartError: sin psi = 0 with n != 0 (tangent line through the pole)
    """
    config = config or default_config
    if n == 0:
        return lp
    sin_psi = abs(math.sin(lp.psi))
    if sin_psi <= config.sin_psi_tol:
        raise ChartError("pedal power undefined: tangent line passes through the pole")
    return LiePoint(lp.r * sin_psi ** n, wrap_angle(lp.phi - n * (lp.psi + math.pi / 2)), lp.psi)


@dataclass
class PowerSamples:
    t: np.ndarray
    points: np.ndarray
    flagged: list[float] = field(default_factory=list)


def pedal_curve_power(c: ParamCurve, n: float, pole: tuple[float, float] = (0.0, 0.0),
                      samples: int | None = None, config: Config | None = None) -> PowerSamples:
    """Image of the lifted curve under the n-th pedal power, as positions"""
    config = config or default_config
    ox, oy = pole
    jc = lift(c, samples, config)
    kept, points, flagged = [], [], list(jc.excluded)
    for t, pt in zip(jc.t, jc.points):
        local = J1Point(pt.x - ox, pt.y - oy, pt.slope, pt.chart)
        try:
            image = pedal_power(to_lie(local), n, config)
        except ChartError:
            flagged.append(float(t))
            continue
        kept.append(float(t))
        points.append((image.r * math.cos(image.phi) + ox, image.r * math.sin(image.phi) + oy))
    return PowerSamples(np.array(kept), np.array(points).reshape(-1, 2), sorted(flagged))


def foot_of_perpendicular(point, direction, pole=(0.0, 0.0)) -> np.ndarray:
    """Foot of the perpendicular from ``pole`` to the line through ``point`` along ``direction``"""
    a = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    o = np.asarray(pole, dtype=float)
    norm2 = float(d @ d)
    if norm2 == 0.0:
        raise ValidationError("line direction must be non-zero", field_name="direction")
    return a + (float((o - a) @ d) / norm2) * d
