"""
Command-line entry point.

    legendre-duality lift --curve parabola
    legendre-duality dual --curve "ellipse(2,1)" --variant projective --out svg
    legendre-duality figure fig-sine-dual --range 7pi

Summaries go to stdout as JSON, logs and error messages to stderr. Exit codes:
0 success, 1 computation error, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from src.config import Config, default_config
from src.models.enums import DualVariant, FigureId, OutputFormat
from src.utils.error_handler import global_error_handler
from src.utils.logger import setup_logging
from src.cli import commands
from src.cli.output import summary_json

logger = logging.getLogger(__name__)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--out-dir", default=None, help="Directory for CSV and SVG output")
    common.add_argument("--tmin", default=None, help="Override the start of the curve parameter interval")
    common.add_argument("--tmax", default=None, help="Override the end of the curve parameter interval")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="legendre-duality",
        description="Legendre duality of curves and functions: lifts, duals, conjugates, "
                    "Clairaut equations and pedal transformations",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {default_config.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    formats = [f.value for f in OutputFormat]

    lift = sub.add_parser("lift", parents=[common], help="Legendrian lift of a curve (CSV)")
    lift.add_argument("--curve", required=True, help="Curve spec, e.g. parabola, circle(1), param(t^2,t^3,-1,1)")
    lift.add_argument("--samples", default=default_config.lift_samples, help="Number of lifted samples")
    lift.set_defaults(handler=commands.lift_command)

    dual = sub.add_parser("dual", parents=[common], help="Dual curve with singularity predictions")
    dual.add_argument("--curve", required=True)
    dual.add_argument("--variant", default=DualVariant.LEGENDRE.value, choices=[v.value for v in DualVariant])
    dual.add_argument("--out", default=OutputFormat.CSV.value, choices=formats)
    dual.set_defaults(handler=commands.dual_command)

    conjugate = sub.add_parser("conjugate", parents=[common], help="Convex conjugate on a p grid")
    conjugate.add_argument("--f", required=True, help="Strictly convex function of x")
    conjugate.add_argument("--xmin", default="-2")
    conjugate.add_argument("--xmax", default="2")
    conjugate.add_argument("--pmin", default="-2")
    conjugate.add_argument("--pmax", default="2")
    conjugate.add_argument("--n", default=101, help="Number of p grid points")
    conjugate.add_argument("--concave", action="store_true", help="Use sup (f - xp) for concave f")
    conjugate.add_argument("--out", default=OutputFormat.CSV.value, choices=formats)
    conjugate.set_defaults(handler=commands.conjugate_command)

    clairaut = sub.add_parser("clairaut", parents=[common], help="Solve a Clairaut equation")
    clairaut.add_argument("--f", default=None, help="Right-hand side f(p) of xp - y = f(p)")
    clairaut.add_argument("--F", default=None, help="F(u, v) of the general form F(p, xp - y) = 0")
    clairaut.add_argument("--zeroset", default=None, help="Curve spec parametrizing F = 0 as (u, v)")
    clairaut.add_argument("--pmin", default="-2")
    clairaut.add_argument("--pmax", default="2")
    clairaut.add_argument("--lines", default=None, help="Comma-separated line parameters c1,c2,...")
    clairaut.add_argument("--out", default=OutputFormat.CSV.value, choices=formats)
    clairaut.set_defaults(handler=commands.clairaut_command)

    pedal = sub.add_parser("pedal", parents=[common], help="Pedal curve, or a power of the pedal group")
    pedal.add_argument("--curve", required=True)
    pedal.add_argument("--pole", default="0,0", help="Pole as x,y")
    pedal.add_argument("--power", default="1", help="Exponent n of the pedal group")
    pedal.add_argument("--out", default=OutputFormat.CSV.value, choices=formats)
    pedal.set_defaults(handler=commands.pedal_command)

    contact = sub.add_parser("contact-check", parents=[common], help="Check the contact condition of a map")
    contact.add_argument("--F", required=True, help="X = F(x, y, p)")
    contact.add_argument("--G", required=True, help="Y = G(x, y, p)")
    contact.add_argument("--probes", default=1000)
    contact.add_argument("--seed", type=int, default=0)
    contact.set_defaults(handler=commands.contact_check_command)

    figure = sub.add_parser("figure", parents=[common], help="Render a catalog figure (SVG)")
    figure.add_argument("figure", choices=[f.value for f in FigureId])
    figure.add_argument("--range", default=None, help="Extent of the sine graph for fig-sine-dual, e.g. 7pi")
    figure.set_defaults(handler=commands.figure_command)
    return parser


def main(argv: Sequence[str] | None = None, config: Config | None = None) -> int:
    """Run one command; returns the process exit code"""
    config = config or default_config
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(args.log_level)
    logger.debug(f"Running {args.command} with {vars(args)}")
    try:
        summary = args.handler(args, config)
    except Exception as error:
        message, code = global_error_handler.describe(error)
        print(message, file=sys.stderr)
        return code
    print(summary_json(summary))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
