"""
Figure catalog.

Each figure is built from the library operations it illustrates and returns the
layers, markers and a summary of what was detected, so the command line can
report the same numbers the picture shows.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.config import Config, default_config
from src.expr.parser import parse
from src.geometry import catalog
from src.geometry.clairaut import (ClairautProblem, discriminant_curve, envelope_check, line_solutions,
                                   residual)
from src.geometry.conjugate import conjugate_sup
from src.geometry.contact import pedal_curve
from src.geometry.curve import (ParamCurve, classify_point, find_inflections, find_singular_points,
                                point_jet, sample)
from src.geometry.duality import dual_curve, predict_dual_singularities
from src.geometry.jet import lift
from src.models.enums import CurveRole, FigureId, MarkerRole, PointKind
from src.cli.render import CurveLayer, Marker, RenderSpec

logger = logging.getLogger(__name__)

PEDAL_DISTANCES = (0.3, 0.7, 1.0, 1.6)
CAUSTIC_LINES = 41


@dataclass
class FigureResult:
    layers: list[CurveLayer]
    markers: list[Marker] = field(default_factory=list)
    spec: RenderSpec = field(default_factory=RenderSpec)
    summary: dict[str, Any] = field(default_factory=dict)


def polyline(c: ParamCurve, n: int | None = None) -> np.ndarray:
    """Sampled positions with NaN rows at undefined samples"""
    samples = sample(c, n)
    points = np.column_stack((samples.x[0], samples.y[0]))
    points[~samples.valid] = np.nan
    return points


def _is_cusp(c: ParamCurve, t: float, config: Config) -> bool:
    kind = classify_point(c, t, config)
    return kind.kind is PointKind.SINGULAR and kind.order == 2


def cusp_markers(c: ParamCurve, parameters, panel: int, config: Config) -> tuple[list[Marker], list[float]]:
    markers, found = [], []
    for t in parameters:
        if _is_cusp(c, t, config):
            x, y = point_jet(c, t).position
            markers.append(Marker(float(x), float(y), MarkerRole.CUSP, panel))
            found.append(float(t))
    return markers, found


def germs_figure(config: Config) -> FigureResult:
    """Regular point, inflection and semicubic cusp side by side"""
    regular = catalog.param(parse("t", ("t",)), parse("t^2", ("t",)), -1.0, 1.0)
    inflected = catalog.param(parse("t", ("t",)), parse("t^3", ("t",)), -1.0, 1.0)
    cusp = catalog.param(parse("t^2", ("t",)), parse("t^3", ("t",)), -1.0, 1.0)

    layers = [CurveLayer(CurveRole.PRIMAL, polyline(c), panel=i) for i, c in enumerate((regular, inflected, cusp))]
    inflections = find_inflections(inflected, config).inflections
    markers = [Marker(float(t), float(t) ** 3, MarkerRole.INFLECTION, 1) for t in inflections]
    found_markers, cusps = cusp_markers(cusp, find_singular_points(cusp, config), 2, config)
    markers += found_markers
    return FigureResult(layers, markers, RenderSpec(width=900, height=300),
                        {"inflections": inflections, "cusps": cusps})


def lift_figure(config: Config) -> FigureResult:
    """Contact elements along the parabola and the lift seen in the (x, p) plane"""
    curve = catalog.parabola(-1.5, 1.5)
    jc = lift(curve, 15, config)
    segments = []
    for pt in jc.points:
        direction = np.array([1.0, pt.p]) / math.hypot(1.0, pt.p)
        segments.append(np.array([[pt.x, pt.y] - 0.25 * direction, [pt.x, pt.y] + 0.25 * direction]))
    dense = lift(curve, config.lift_samples, config)
    layers = [
        CurveLayer(CurveRole.PRIMAL, polyline(curve)),
        CurveLayer(CurveRole.LINES, segments=segments),
        CurveLayer(CurveRole.DUAL, np.column_stack((dense.xs, [pt.p for pt in dense.points])), panel=1),
    ]
    return FigureResult(layers, [], RenderSpec(width=800, height=400), {"contact_elements": len(segments)})


def sine_dual_figure(config: Config, extent: float = 7.0 * math.pi) -> FigureResult:
    """
    Graph of sine on (0, extent] with its dual; the left end is moved in by one grid
    step so every multiple of pi up to ``extent`` is an interior inflection.
    """
    step = extent / (config.curve_samples - 1)
    curve = catalog.sine(step, extent + step)
    dual = dual_curve(curve, config)
    predicted = [t for t, kind in predict_dual_singularities(curve, config)
                 if kind.kind is PointKind.SINGULAR and kind.order == 2]
    markers, cusps = cusp_markers(dual, predicted, 1, config)
    layers = [CurveLayer(CurveRole.PRIMAL, polyline(curve)), CurveLayer(CurveRole.DUAL, polyline(dual), panel=1)]
    logger.info(f"Sine dual on (0, {extent:.6g}]: {len(cusps)} cusps")
    return FigureResult(layers, markers, RenderSpec(width=900, height=450),
                        {"cusps": len(cusps), "cusp_parameters": cusps})


def conjugate_figure(config: Config) -> FigureResult:
    """exp and its conjugate p ln p - p"""
    f = parse("exp(x)")
    primal = catalog.graph(f, -3.0, 1.5)
    p = np.linspace(0.05, 4.0, 160)
    result = conjugate_sup(f, (-3.0, 1.5), p, config=config)
    finite = result.finite
    exact = p[finite] * np.log(p[finite]) - p[finite]
    layers = [
        CurveLayer(CurveRole.PRIMAL, polyline(primal)),
        CurveLayer(CurveRole.DUAL, np.column_stack((p[finite], result.values[finite])), panel=1),
    ]
    error = float(np.max(np.abs(result.values[finite] - exact))) if np.any(finite) else math.inf
    return FigureResult(layers, [], RenderSpec(width=800, height=400),
                        {"finite": int(finite.sum()), "max_error": error})


def clairaut_caustic_figure(config: Config) -> FigureResult:
    """Lines y = cx - c^3 enveloping the semicubic parabola"""
    problem = ClairautProblem.from_function(parse("p^3", ("p",)))
    disc = discriminant_curve(problem)
    lines = line_solutions(problem, np.linspace(-2.0, 2.0, CAUSTIC_LINES))
    x_span = np.array([-2.0, 14.0])
    segments = [np.column_stack((x_span, line.y_at(x_span))) for line in lines]
    worst = max(residual(problem, line, np.linspace(-2.0, 14.0, 9), config).max_abs for line in lines)
    envelope = envelope_check(problem, lines, disc, config=config)
    markers, cusps = cusp_markers(disc, [0.0], 0, config)
    layers = [CurveLayer(CurveRole.LINES, segments=segments), CurveLayer(CurveRole.ENVELOPE, polyline(disc))]
    return FigureResult(layers, markers, RenderSpec(width=500, height=700, viewport=(-2.0, 14.0, -20.0, 20.0)),
                        {"lines": len(lines), "max_residual": worst, "envelope_passed": envelope.passed,
                         "cusps": cusps})


def pedal_family_figure(config: Config) -> FigureResult:
    """Pedals of the unit circle for poles at several distances from its center"""
    layers, markers, singular = [], [], {}
    for panel, d in enumerate(PEDAL_DISTANCES):
        circle = catalog.circle(1.0, d, 0.0)
        pedal = pedal_curve(circle, (0.0, 0.0), config)
        layers.append(CurveLayer(CurveRole.AUXILIARY, polyline(circle), panel=panel))
        layers.append(CurveLayer(CurveRole.DUAL, polyline(pedal), panel=panel))
        markers.append(Marker(0.0, 0.0, MarkerRole.POLE, panel))
        found_markers, cusps = cusp_markers(pedal, find_singular_points(pedal, config), panel, config)
        markers += found_markers
        singular[f"{d:g}"] = cusps
    return FigureResult(layers, markers, RenderSpec(width=1200, height=320), {"cusps": singular})


def build_figure(figure: FigureId, config: Config | None = None, extent: float | None = None) -> FigureResult:
    """Build one catalog figure; ``extent`` only applies to the sine dual"""
    config = config or default_config
    match figure:
        case FigureId.GERMS:
            result = germs_figure(config)
        case FigureId.LIFT:
            result = lift_figure(config)
        case FigureId.SINE_DUAL:
            result = sine_dual_figure(config, extent if extent is not None else 7.0 * math.pi)
        case FigureId.CONJUGATE:
            result = conjugate_figure(config)
        case FigureId.CLAIRAUT_CAUSTIC:
            result = clairaut_caustic_figure(config)
        case FigureId.PEDAL_FAMILY:
            result = pedal_family_figure(config)
    result.summary["figure"] = figure.value
    return result
