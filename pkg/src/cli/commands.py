"""
Command handlers.

Each handler takes the parsed arguments and the configuration, writes its files
under the output directory and returns the summary printed on stdout.
"""
from __future__ import annotations

import argparse
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from src.config import Config
from src.expr.nodes import to_source
from src.expr.parser import parse
from src.geometry.catalog import curve_from_spec, split_arguments
from src.geometry.clairaut import (ClairautProblem, SingularSolution, discriminant_curve, envelope_check,
                                   general_discriminant, line_solutions, residual)
from src.geometry.conjugate import conjugate_concave, conjugate_sup
from src.geometry.contact import ContactMap, contact_report, pedal_curve, pedal_curve_power
from src.geometry.curve import ParamCurve, classify_point, find_singular_points, sample
from src.geometry.duality import (check_predictions, dual_curve, legendre_curve_points,
                                  projective_dual)
from src.geometry.jet import contact_residual, lift, theta_coordinate
from src.models.enums import Chart, CurveRole, DualVariant, FigureId, MarkerRole, OutputFormat, get_enum_value
from src.utils.error_handler import ErrorContext, ValidationError, handle_errors
from src.utils.validation import InputValidator
from src.cli.figures import build_figure, cusp_markers, polyline
from src.cli.output import write_csv, write_text
from src.cli.render import CurveLayer, Marker, RenderSpec, render_svg

logger = logging.getLogger(__name__)

# Prediction details listed in a summary; a straight line predicts one per sample.
MAX_LISTED = 20


def _number(text: str | None, field_name: str) -> float | None:
    return None if text is None else InputValidator.require_number(text, field_name)


def _out_dir(args: argparse.Namespace, config: Config) -> Path:
    return Path(args.out_dir) if args.out_dir else config.OUTPUT_DIR


def _format(args: argparse.Namespace) -> OutputFormat:
    try:
        return get_enum_value(OutputFormat, args.out)
    except ValueError as err:
        raise ValidationError(str(err), field_name="out") from err


def _curve(args: argparse.Namespace, spec: str | None = None) -> ParamCurve:
    t_range = (_number(args.tmin, "tmin"), _number(args.tmax, "tmax"))
    return curve_from_spec(spec or args.curve, t_range)


def _singularities(c: ParamCurve, config: Config) -> list[dict[str, Any]]:
    return [{"t": t, "type": str(classify_point(c, t, config))} for t in find_singular_points(c, config)]


def _curve_rows(c: ParamCurve) -> list[tuple[float, float, float]]:
    samples = sample(c)
    return [(t, x, y) for t, x, y, ok in zip(samples.t, samples.x[0], samples.y[0], samples.valid) if ok]


@handle_errors(context=ErrorContext(operation="lift"))
def lift_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    curve = _curve(args)
    samples = InputValidator.validate_positive_int(args.samples, "samples")
    if not samples.is_valid:
        raise ValidationError("; ".join(samples.warnings), field_name="samples")
    jc = lift(curve, int(samples.value), config)

    rows = [(t, pt.x, pt.y, pt.slope, pt.chart.value, theta_coordinate(pt)) for t, pt in zip(jc.t, jc.points)]
    path = _out_dir(args, config) / "lift.csv"
    write_csv(path, ("t", "x", "y", "slope", "chart", "theta"), rows)
    worst = max((abs(contact_residual(jc, float(t), config)) for t in jc.t), default=0.0)
    return {
        "command": "lift",
        "curve": curve.label,
        "samples": len(jc),
        "excluded": len(jc.excluded),
        "chart_q": sum(1 for chart in jc.charts if chart is Chart.Q),
        "max_contact_residual": worst,
        "files": [path],
    }


@handle_errors(context=ErrorContext(operation="dual"))
def dual_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    curve = _curve(args)
    try:
        variant = get_enum_value(DualVariant, args.variant)
    except ValueError as err:
        raise ValidationError(str(err), field_name="variant") from err
    fmt = _format(args)
    dual = projective_dual(curve, config) if variant is DualVariant.PROJECTIVE else dual_curve(curve, config)

    predictions = check_predictions(curve, config)
    out_dir = _out_dir(args, config)
    if fmt is OutputFormat.CSV:
        path = out_dir / f"dual-{variant.value}.csv"
        if variant is DualVariant.LEGENDRE:
            rows = [(t, image.X, image.Y, image.P) for t, _, image in legendre_curve_points(curve, config=config)]
            count = write_csv(path, ("t", "X", "Y", "P"), rows)
        else:
            count = write_csv(path, ("t", "X", "Y"), _curve_rows(dual))
    else:
        path = out_dir / f"dual-{variant.value}.svg"
        layers = [CurveLayer(CurveRole.PRIMAL, polyline(curve)), CurveLayer(CurveRole.DUAL, polyline(dual), panel=1)]
        markers, _ = cusp_markers(dual, [t for t, _, _ in predictions], 1, config)
        write_text(path, render_svg(layers, markers, RenderSpec(width=900, height=450)))
        count = len(dual.excluded)
    return {
        "command": "dual",
        "curve": curve.label,
        "variant": variant.value,
        "rows": count if fmt is OutputFormat.CSV else None,
        "excluded": len(dual.excluded),
        "predictions": len(predictions),
        "predictions_agree": all(p.same_type(found) for _, p, found in predictions),
        "predicted": [{"t": t, "predicted": str(p), "found": str(found)}
                      for t, p, found in predictions[:MAX_LISTED]],
        "files": [path],
    }


@handle_errors(context=ErrorContext(operation="conjugate"))
def conjugate_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    f = parse(InputValidator.require_expression(args.f, "f"))
    x_interval = (_number(args.xmin, "xmin"), _number(args.xmax, "xmax"))
    p_lo, p_hi = _number(args.pmin, "pmin"), _number(args.pmax, "pmax")
    count = InputValidator.validate_positive_int(args.n, "n")
    if not count.is_valid:
        raise ValidationError("; ".join(count.warnings), field_name="n")
    grid = np.linspace(p_lo, p_hi, int(count.value))
    transform = conjugate_concave if args.concave else conjugate_sup
    result = transform(f, x_interval, grid, config=config)

    out_dir = _out_dir(args, config)
    if _format(args) is OutputFormat.CSV:
        path = out_dir / "conjugate.csv"
        write_csv(path, ("p", "f_star", "finite"),
                  zip(result.grid, result.values, result.finite))
    else:
        path = out_dir / "conjugate.svg"
        finite = result.finite
        if not np.any(finite):
            raise ValidationError("conjugate is +inf on the whole p grid; nothing to draw", field_name="p_grid")
        layers = [CurveLayer(CurveRole.DUAL, np.column_stack((result.grid[finite], result.values[finite])))]
        write_text(path, render_svg(layers))
    return {
        "command": "conjugate",
        "f": to_source(f),
        "points": int(result.grid.size),
        "finite": int(result.finite.sum()),
        "domain": [list(interval) for interval in result.effective_domain],
        "files": [path],
    }


def _line_values(text: str | None, interval: tuple[float, float]) -> list[float]:
    if not text:
        return list(np.linspace(interval[0], interval[1], 9))
    return [InputValidator.require_number(v, "lines") for v in split_arguments(text)]


@handle_errors(context=ErrorContext(operation="clairaut"))
def clairaut_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    if (args.f is None) == (args.F is None):
        raise ValidationError("give exactly one of --f or --F", field_name="clairaut")
    if args.F is not None:
        if not args.zeroset:
            raise ValidationError("--F needs --zeroset with a parametrization of F = 0", field_name="zeroset")
        zero_set = _curve(args, args.zeroset)
        problem = ClairautProblem.general(parse(InputValidator.require_expression(args.F, "F"), ("u", "v")),
                                          zero_set)
        disc = general_discriminant(problem, config)
        c_values = _line_values(args.lines, (zero_set.t_min, zero_set.t_max))
    else:
        p_interval = (_number(args.pmin, "pmin"), _number(args.pmax, "pmax"))
        problem = ClairautProblem.from_function(parse(InputValidator.require_expression(args.f, "f"), ("p",)),
                                                *p_interval)
        disc = discriminant_curve(problem)
        c_values = _line_values(args.lines, p_interval)

    lines = line_solutions(problem, c_values)
    x_samples = np.linspace(-2.0, 2.0, 21)
    line_residual = max((residual(problem, line, x_samples, config).max_abs for line in lines), default=0.0)
    singular = residual(problem, SingularSolution(disc), disc.grid(201), config)
    envelope = envelope_check(problem, lines, disc, config=config)

    out_dir = _out_dir(args, config)
    if _format(args) is OutputFormat.CSV:
        path = out_dir / "clairaut-discriminant.csv"
        write_csv(path, (disc.param, "x", "y"), _curve_rows(disc))
    else:
        path = out_dir / "clairaut.svg"
        disc_points = polyline(disc)
        finite = disc_points[np.all(np.isfinite(disc_points), axis=1)]
        x_lo, x_hi = (float(finite[:, 0].min()) - 1.0, float(finite[:, 0].max()) + 1.0) if finite.size else (-1.0, 1.0)
        x_span = np.array([x_lo, x_hi])
        segments = [np.column_stack((x_span, line.y_at(x_span))) for line in lines]
        layers = [CurveLayer(CurveRole.LINES, segments=segments), CurveLayer(CurveRole.ENVELOPE, disc_points)]
        markers, _ = cusp_markers(disc, find_singular_points(disc, config), 0, config)
        write_text(path, render_svg(layers, markers, RenderSpec(width=600, height=600)))
    return {
        "command": "clairaut",
        "lines": len(lines),
        "max_line_residual": line_residual,
        "max_singular_residual": singular.max_abs,
        "singular_skipped": len(singular.skipped),
        "envelope": {"applicable": envelope.applicable, "passed": envelope.passed, "reason": envelope.reason},
        "singularities": _singularities(disc, config),
        "files": [path],
    }


def _pole(text: str) -> tuple[float, float]:
    parts = split_arguments(text)
    if len(parts) != 2:
        raise ValidationError(f"pole must be 'x,y', got '{text}'", field_name="pole")
    return (InputValidator.require_number(parts[0], "pole"), InputValidator.require_number(parts[1], "pole"))


@handle_errors(context=ErrorContext(operation="pedal"))
def pedal_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    curve = _curve(args)
    pole = _pole(args.pole)
    power = InputValidator.require_number(args.power, "power")
    fmt = _format(args)
    out_dir = _out_dir(args, config)

    summary: dict[str, Any] = {"command": "pedal", "curve": curve.label, "pole": list(pole), "power": power}
    if power == 1.0:
        pedal = pedal_curve(curve, pole, config)
        points = polyline(pedal)
        rows = _curve_rows(pedal)
        markers, _ = cusp_markers(pedal, find_singular_points(pedal, config), 0, config)
        summary.update(excluded=len(pedal.excluded), singularities=_singularities(pedal, config))
    else:
        image = pedal_curve_power(curve, power, pole, config=config)
        points = image.points
        rows = [(t, x, y) for t, (x, y) in zip(image.t, image.points)]
        markers = []
        summary.update(flagged=len(image.flagged))

    if fmt is OutputFormat.CSV:
        path = out_dir / "pedal.csv"
        summary["rows"] = write_csv(path, ("t", "x", "y"), rows)
    else:
        path = out_dir / "pedal.svg"
        layers = [CurveLayer(CurveRole.AUXILIARY, polyline(curve)), CurveLayer(CurveRole.DUAL, points)]
        markers.append(Marker(pole[0], pole[1], MarkerRole.POLE))
        write_text(path, render_svg(layers, markers))
    summary["files"] = [path]
    return summary


@handle_errors(context=ErrorContext(operation="contact-check"))
def contact_check_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    variables = ("x", "y", "p")
    m = ContactMap(parse(InputValidator.require_expression(args.F, "F"), variables),
                   parse(InputValidator.require_expression(args.G, "G"), variables))
    count = InputValidator.validate_positive_int(args.probes, "probes")
    if not count.is_valid:
        raise ValidationError("; ".join(count.warnings), field_name="probes")
    report = contact_report(m, int(count.value), args.seed, config=config)
    return {
        "command": "contact-check",
        "F": to_source(m.F),
        "G": to_source(m.G),
        "probes": report.probes,
        "skipped": report.skipped,
        "max_defect": report.max_defect,
        "report": "contact" if report.is_contact else "not contact",
    }


@handle_errors(context=ErrorContext(operation="figure"))
def figure_command(args: argparse.Namespace, config: Config) -> dict[str, Any]:
    try:
        figure = get_enum_value(FigureId, args.figure)
    except ValueError as err:
        raise ValidationError(str(err), field_name="figure") from err
    extent = _number(args.range, "range")
    if extent is not None and not (extent > 0 and math.isfinite(extent)):
        raise ValidationError("range must be positive", field_name="range")
    result = build_figure(figure, config, extent)
    path = _out_dir(args, config) / f"{figure.value}.svg"
    write_text(path, render_svg(result.layers, result.markers, result.spec))
    return {"command": "figure", **result.summary, "files": [path]}
