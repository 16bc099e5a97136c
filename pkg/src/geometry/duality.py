"""
Legendre transformation of J1 and dual curves.

The dual of a curve is its lift pushed through (x, y, p) -> (p, xp - y, x) and
projected to the (X, Y) plane. Duals are composed expressions in the original
parameter, so matched parameters compare directly and duals can be classified
and dualized again.
"""
from __future__ import annotations

import logging

import numpy as np

from src.config import Config, default_config
from src.expr.calculus import differentiate
from src.geometry.curve import (ParamCurve, classify_point, compose_curve, find_inflections,
                                flat_order, graph_function, sample)
from src.geometry.jet import lift
from src.models.enums import Chart
from src.models.schemas import J1Point, LegendreImage, PointClass
from src.utils.error_handler import ChartError, DualityError

logger = logging.getLogger(__name__)


def legendre_point(pt: J1Point) -> LegendreImage:
    """
    Image (X, Y, P) = (p, xp - y, x).

    Raises:
        ChartError: vertical tangent; the image escapes to infinity
    """
    if pt.chart is Chart.Q:
        if pt.slope == 0.0:
            raise ChartError(f"vertical tangent at ({pt.x:.12g}, {pt.y:.12g}): Legendre image escapes to infinity")
        pt = pt.to_chart(Chart.P)
    return LegendreImage(X=pt.slope, Y=pt.x * pt.slope - pt.y, P=pt.x)


def legendre_curve_points(c: ParamCurve, samples: int | None = None,
                          config: Config | None = None) -> list[tuple[float, J1Point, LegendreImage]]:
    """(t, lifted point, image) for every lifted sample with a finite image"""
    jc = lift(c, samples, config)
    result = []
    for t, point in zip(jc.t, jc.points):
        try:
            result.append((float(t), point, legendre_point(point)))
        except ChartError:
            logger.warning(f"{c.label}: no Legendre image at vertical tangent t={float(t):.12g}")
    return result


def dual_curve(c: ParamCurve, config: Config | None = None) -> ParamCurve:
    """
    Dual curve t -> (p(t), x(t) p(t) - y(t)) with p = y'/x'.

    Samples where the base curve has a vertical tangent are excluded.

    Raises:
        SingularPointError: the lift of ``c`` fails
    """
    config = config or default_config
    lift(c, config=config)
    slope = differentiate(c.y_expr, c.param) / differentiate(c.x_expr, c.param)

    base = sample(c)
    with np.errstate(invalid="ignore"):
        vertical = np.abs(base.x[1]) <= config.singular_tol * np.maximum(1.0, np.abs(base.y[1]))

    dual = compose_curve(slope, c.x_expr * slope - c.y_expr, c, name=f"dual({c.label})",
                         exclude=lambda _: vertical)
    logger.debug(f"Dual of {c.label}: {len(dual.excluded)} excluded samples")
    return dual


def projective_dual(c: ParamCurve, config: Config | None = None) -> ParamCurve:
    """
    Projective chart t -> (X/Y, 1/Y) of the dual curve.

    Raises:
        DualityError: Y vanishes at every sample
    """
    config = config or default_config
    dual = dual_curve(c, config)
    dual_samples = sample(dual)
    with np.errstate(invalid="ignore"):
        on_axis = ~dual_samples.valid | (np.abs(dual_samples.y[0]) <= config.singular_tol)
    if np.all(on_axis):
        raise DualityError(f"dual of {c.label} lies on Y = 0; projective chart undefined")

    projective = compose_curve(dual.x_expr / dual.y_expr, 1.0 / dual.y_expr, dual,
                               name=f"projective-dual({c.label})", exclude=lambda _: on_axis)
    logger.debug(f"Projective dual of {c.label}: {len(projective.excluded)} excluded samples")
    return projective


def predict_dual_singularities(c: ParamCurve, config: Config | None = None) -> list[tuple[float, PointClass]]:
    """
    Singular points the dual must have.

    Inflections predict semicubic cusps. Degenerate curvature zeros of a graph
    predict the singularity type given by the flatness order there (Degenerate
    beyond order 3); on other curves they predict Degenerate.
    """
    config = config or default_config
    report = find_inflections(c, config)
    predictions = [(t, PointClass.singular(2)) for t in report.inflections]
    f = graph_function(c)
    for t in report.degenerate:
        order = flat_order(f, t, c.param, config) if f is not None else None
        if order is not None and 2 <= order <= 3:
            predictions.append((t, PointClass.singular(order)))
        else:
            predictions.append((t, PointClass.degenerate()))
    predictions.sort(key=lambda item: item[0])
    logger.debug(f"{c.label}: {len(predictions)} predicted dual singularities")
    return predictions


def check_predictions(c: ParamCurve, config: Config | None = None) -> list[tuple[float, PointClass, PointClass]]:
    """(t, predicted, classified on the computed dual) for every prediction"""
    dual = dual_curve(c, config)
    return [(t, predicted, classify_point(dual, t, config))
            for t, predicted in predict_dual_singularities(c, config)]
