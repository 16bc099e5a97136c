"""
Expression trees for functions and parametric curves.

Nodes are immutable and compare structurally. Arithmetic operators on nodes build
new trees with light constant folding, so geometric code can compose expressions
directly (``dpsi / dphi``, ``x * p - y``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

FUNCTIONS: frozenset[str] = frozenset({"sin", "cos", "tan", "exp", "ln", "abs", "sqrt"})
# Not parseable; only produced by differentiating abs.
DERIVED_FUNCTIONS: frozenset[str] = FUNCTIONS | {"sign"}
CONSTANTS: dict[str, float] = {"pi": math.pi, "e": math.e}

# Binding strength used by the printer; higher binds tighter.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


class Expr:
    """Base class of all expression nodes."""

    def __add__(self, other: Expr | float) -> Expr:
        return make_add(self, as_expr(other))

    def __radd__(self, other: float) -> Expr:
        return make_add(as_expr(other), self)

    def __sub__(self, other: Expr | float) -> Expr:
        return make_sub(self, as_expr(other))

    def __rsub__(self, other: float) -> Expr:
        return make_sub(as_expr(other), self)

    def __mul__(self, other: Expr | float) -> Expr:
        return make_mul(self, as_expr(other))

    def __rmul__(self, other: float) -> Expr:
        return make_mul(as_expr(other), self)

    def __truediv__(self, other: Expr | float) -> Expr:
        return make_div(self, as_expr(other))

    def __rtruediv__(self, other: float) -> Expr:
        return make_div(as_expr(other), self)

    def __neg__(self) -> Expr:
        return make_neg(self)

    def __pow__(self, exponent: float) -> Expr:
        if isinstance(exponent, Expr):
            raise TypeError("exponent must be a numeric constant")
        return make_pow(self, float(exponent))

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: float


@dataclass(frozen=True, eq=True)
class Const(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True, eq=True)
class Call(Expr):
    name: str
    arg: Expr

    def __post_init__(self) -> None:
        if self.name not in DERIVED_FUNCTIONS:
            raise ValueError(f"unknown function '{self.name}'")


ZERO = Num(0.0)
ONE = Num(1.0)


def as_expr(value: Expr | float | int) -> Expr:
    """Wrap plain numbers as literals."""
    if isinstance(value, Expr):
        return value
    return Num(float(value))


def _is_num(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Num) and (value is None or e.value == value)


def make_add(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b):
        return Num(a.value + b.value)
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    return Add(a, b)


def make_sub(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b):
        return Num(a.value - b.value)
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return make_neg(b)
    return Sub(a, b)


def make_mul(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b):
        return Num(a.value * b.value)
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return ZERO
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if _is_num(a, -1.0):
        return make_neg(b)
    if _is_num(b, -1.0):
        return make_neg(a)
    return Mul(a, b)


def make_div(a: Expr, b: Expr) -> Expr:
    if _is_num(b, 1.0):
        return a
    if _is_num(a) and _is_num(b) and b.value != 0.0:
        return Num(a.value / b.value)
    if _is_num(a, 0.0) and _is_num(b) and b.value != 0.0:
        return ZERO
    return Div(a, b)


def make_neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def make_pow(a: Expr, exponent: float) -> Expr:
    if exponent == 1.0:
        return a
    if exponent == 0.0:
        return ONE
    if isinstance(a, Num) and (a.value > 0 or float(exponent).is_integer()):
        return Num(a.value ** exponent)
    return Pow(a, exponent)


def call(name: str, arg: Expr) -> Expr:
    return Call(name, arg)


def format_number(value: float) -> str:
    """Shortest text that re-parses to the same float."""
    if math.isfinite(value) and value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


def _precedence(e: Expr) -> int:
    match e:
        case Add() | Sub():
            return _PREC_ADD
        case Mul() | Div():
            return _PREC_MUL
        case Neg():
            return _PREC_NEG
        case Num(value=v) if v < 0 or math.copysign(1.0, v) < 0:
            return _PREC_NEG
        case Pow():
            return _PREC_POW
        case _:
            return _PREC_ATOM


def _wrap(e: Expr, minimum: int) -> str:
    text = to_source(e)
    return f"({text})" if _precedence(e) < minimum else text


def to_source(e: Expr) -> str:
    """Print an expression in the input grammar with minimal parentheses."""
    match e:
        case Num(value=v):
            return format_number(v)
        case Const(name=name) | Var(name=name):
            return name
        case Neg(operand=a):
            return "-" + _wrap(a, _PREC_NEG)
        case Add(left=a, right=b):
            return f"{_wrap(a, _PREC_ADD)} + {_wrap(b, _PREC_MUL)}"
        case Sub(left=a, right=b):
            return f"{_wrap(a, _PREC_ADD)} - {_wrap(b, _PREC_MUL)}"
        case Mul(left=a, right=b):
            return f"{_wrap(a, _PREC_MUL)}*{_wrap(b, _PREC_NEG)}"
        case Div(left=a, right=b):
            return f"{_wrap(a, _PREC_MUL)}/{_wrap(b, _PREC_NEG)}"
        case Pow(base=a, exponent=n):
            return f"{_wrap(a, _PREC_ATOM)}^{format_number(n)}"
        case Call(name=name, arg=a):
            return f"{name}({to_source(a)})"
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(e: Expr) -> frozenset[str]:
    """Names of the variables occurring in an expression."""
    match e:
        case Var(name=name):
            return frozenset({name})
        case Num() | Const():
            return frozenset()
        case Neg(operand=a) | Pow(base=a) | Call(arg=a):
            return free_variables(a)
        case Add(left=a, right=b) | Sub(left=a, right=b) | Mul(left=a, right=b) | Div(left=a, right=b):
            return free_variables(a) | free_variables(b)
    raise TypeError(f"not an expression node: {e!r}")


def node_count(e: Expr) -> int:
    match e:
        case Num() | Const() | Var():
            return 1
        case Neg(operand=a) | Pow(base=a) | Call(arg=a):
            return 1 + node_count(a)
        case Add(left=a, right=b) | Sub(left=a, right=b) | Mul(left=a, right=b) | Div(left=a, right=b):
            return 1 + node_count(a) + node_count(b)
    raise TypeError(f"not an expression node: {e!r}")
