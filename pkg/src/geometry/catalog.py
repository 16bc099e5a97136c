"""
Built-in curves and the curve spec mini-language.

    line(a,b)  parabola  cubic  sine  circle(r)  circle(r,cx,cy)  ellipse(a,b)
    param(<x-expr>,<y-expr>,t_min,t_max)  graph(<f-expr>,x_min,x_max)

Numeric arguments accept ``pi`` multiples (``7pi``) and constant expressions.
"""
import logging
import math
import re

from src.config import default_config
from src.expr.calculus import rename
from src.expr.nodes import Expr, Var, call
from src.expr.parser import parse
from src.geometry.curve import ParamCurve
from src.utils.error_handler import ValidationError
from src.utils.validation import InputValidator

logger = logging.getLogger(__name__)

T = Var("t")

_SPEC = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$", re.DOTALL)


def line(a: float, b: float, t_min: float = -1.0, t_max: float = 1.0) -> ParamCurve:
    return ParamCurve(T, a * T + b, t_min, t_max, name=f"line({a:g},{b:g})")


def parabola(t_min: float = -2.0, t_max: float = 2.0) -> ParamCurve:
    return ParamCurve(T, T ** 2, t_min, t_max, name="parabola")


def cubic(t_min: float = -2.0, t_max: float = 2.0) -> ParamCurve:
    return ParamCurve(T, T ** 3, t_min, t_max, name="cubic")


def sine(t_min: float = 0.0, t_max: float = 2.0 * math.pi) -> ParamCurve:
    return ParamCurve(T, call("sin", T), t_min, t_max, name="sine")


def circle(r: float = 1.0, cx: float = 0.0, cy: float = 0.0,
           t_min: float = 0.0, t_max: float = 2.0 * math.pi) -> ParamCurve:
    if r <= 0:
        raise ValidationError(f"circle radius must be positive, got {r}", field_name="curve")
    return ParamCurve(cx + r * call("cos", T), cy + r * call("sin", T), t_min, t_max,
                      name=f"circle({r:g},{cx:g},{cy:g})")


def ellipse(a: float, b: float, t_min: float = 0.0, t_max: float = 2.0 * math.pi) -> ParamCurve:
    if a <= 0 or b <= 0:
        raise ValidationError(f"ellipse semi-axes must be positive, got ({a}, {b})", field_name="curve")
    return ParamCurve(a * call("cos", T), b * call("sin", T), t_min, t_max, name=f"ellipse({a:g},{b:g})")


def param(x_expr: Expr, y_expr: Expr, t_min: float, t_max: float) -> ParamCurve:
    return ParamCurve(x_expr, y_expr, t_min, t_max)


def graph(f: Expr, x_min: float, x_max: float, var: str = "x") -> ParamCurve:
    """Graph (t, f(t)) of a function of ``var``"""
    return ParamCurve(T, rename(f, var, "t"), x_min, x_max)


def split_arguments(text: str) -> list[str]:
    """Split on commas that are not nested inside parentheses"""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValidationError("unbalanced parentheses in curve spec", field_name="curve")
        current.append(ch)
    if depth != 0:
        raise ValidationError("unbalanced parentheses in curve spec", field_name="curve")
    parts.append("".join(current).strip())
    return parts


def _numbers(args: list[str], count: tuple[int, ...], name: str) -> list[float]:
    if len(args) not in count:
        expected = " or ".join(str(n) for n in count)
        raise ValidationError(f"{name} takes {expected} arguments, got {len(args)}", field_name="curve")
    return [InputValidator.require_number(a, f"{name} argument") for a in args]


def curve_from_spec(spec: str, t_range: tuple[float | None, float | None] = (None, None),
                    samples: int | None = None) -> ParamCurve:
    """
    Build a curve from its spec text.

    Args:
        spec: Catalog name or ``param``/``graph`` form
        t_range: Optional overrides of the parameter bounds
        samples: Optional sampling density

    Raises:
        ValidationError: unknown name or wrong arguments
        ExpressionSyntaxError: malformed expression argument
    """
    text = InputValidator.require_expression(spec, "curve")
    match = _SPEC.match(text)
    if match is None:
        raise ValidationError(f"malformed curve spec '{spec}'", field_name="curve")
    name, body = match.group(1).lower(), match.group(2)
    args = split_arguments(body) if body is not None and body.strip() else []

    match name:
        case "line":
            curve = line(*_numbers(args, (2,), name))
        case "parabola":
            _numbers(args, (0,), name)
            curve = parabola()
        case "cubic":
            _numbers(args, (0,), name)
            curve = cubic()
        case "sine":
            _numbers(args, (0,), name)
            curve = sine()
        case "circle":
            curve = circle(*_numbers(args, (1, 3), name))
        case "ellipse":
            curve = ellipse(*_numbers(args, (2,), name))
        case "param":
            if len(args) != 4:
                raise ValidationError("param takes 4 arguments: x-expr, y-expr, t_min, t_max", field_name="curve")
            x_expr, y_expr = (parse(a, variables=("t",)) for a in args[:2])
            t_min, t_max = _numbers(args[2:], (2,), name)
            curve = param(x_expr, y_expr, t_min, t_max)
        case "graph":
            if len(args) != 3:
                raise ValidationError("graph takes 3 arguments: f-expr, x_min, x_max", field_name="curve")
            x_min, x_max = _numbers(args[1:], (2,), name)
            curve = graph(parse(args[0], variables=("x",)), x_min, x_max)
        case _:
            raise ValidationError(f"unknown curve '{name}'", field_name="curve")

    t_min = curve.t_min if t_range[0] is None else t_range[0]
    t_max = curve.t_max if t_range[1] is None else t_range[1]
    if (t_min, t_max, samples) != (curve.t_min, curve.t_max, None):
        curve = ParamCurve(curve.x_expr, curve.y_expr, t_min, t_max,
                           samples or default_config.curve_samples, curve.param, curve.name)
    logger.debug(f"Curve spec {spec!r} -> {curve.label} on [{curve.t_min:.6g}, {curve.t_max:.6g}]")
    return curve
