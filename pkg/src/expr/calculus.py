"""
Symbolic differentiation and substitution on expression trees.

Geometric constructions (duals, pedals, discriminants) are built by composing the
input expressions, so the results stay expressions and remain differentiable to
order 3 by jet evaluation.
"""
from __future__ import annotations

from collections.abc import Mapping

from src.expr.nodes import (ONE, ZERO, Add, Call, Const, Div, Expr, Mul, Neg, Num, Pow,
                            Sub, Var, as_expr, call, make_pow)


def differentiate(e: Expr, var: str) -> Expr:
    """Derivative of ``e`` with respect to ``var``."""
    match e:
        case Num() | Const():
            return ZERO
        case Var(name=name):
            return ONE if name == var else ZERO
        case Neg(operand=a):
            return -differentiate(a, var)
        case Add(left=a, right=b):
            return differentiate(a, var) + differentiate(b, var)
        case Sub(left=a, right=b):
            return differentiate(a, var) - differentiate(b, var)
        case Mul(left=a, right=b):
            return differentiate(a, var) * b + a * differentiate(b, var)
        case Div(left=a, right=b):
            da, db = differentiate(a, var), differentiate(b, var)
            if db == ZERO:
                return da / b
            return (da * b - a * db) / make_pow(b, 2.0)
        case Pow(base=a, exponent=n):
            return n * make_pow(a, n - 1.0) * differentiate(a, var)
        case Call(name=name, arg=a):
            da = differentiate(a, var)
            if da == ZERO:
                return ZERO
            return _outer_derivative(name, a) * da
    raise TypeError(f"not an expression node: {e!r}")


def _outer_derivative(name: str, a: Expr) -> Expr:
    match name:
        case "sin":
            return call("cos", a)
        case "cos":
            return -call("sin", a)
        case "tan":
            return 1.0 + make_pow(call("tan", a), 2.0)
        case "exp":
            return call("exp", a)
        case "ln":
            return 1.0 / a
        case "sqrt":
            return 0.5 / call("sqrt", a)
        case "abs":
            return call("sign", a)
        case "sign":
            return ZERO
    raise ValueError(f"unknown function '{name}'")


def nth_derivative(e: Expr, var: str, n: int) -> Expr:
    for _ in range(n):
        e = differentiate(e, var)
    return e


def substitute(e: Expr, mapping: Mapping[str, Expr | float]) -> Expr:
    """
    Replace variables simultaneously.

    ``substitute(x*p - y, {"x": P, "y": X*P - Y, "p": X})`` yields the composed
    residual in the new variables; names missing from ``mapping`` are kept.
    """
    bindings = {name: as_expr(value) for name, value in mapping.items()}
    return _substitute(e, bindings)


def _substitute(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    match e:
        case Var(name=name):
            return bindings.get(name, e)
        case Num() | Const():
            return e
        case Neg(operand=a):
            return -_substitute(a, bindings)
        case Add(left=a, right=b):
            return _substitute(a, bindings) + _substitute(b, bindings)
        case Sub(left=a, right=b):
            return _substitute(a, bindings) - _substitute(b, bindings)
        case Mul(left=a, right=b):
            return _substitute(a, bindings) * _substitute(b, bindings)
        case Div(left=a, right=b):
            return _substitute(a, bindings) / _substitute(b, bindings)
        case Pow(base=a, exponent=n):
            return make_pow(_substitute(a, bindings), n)
        case Call(name=name, arg=a):
            return call(name, _substitute(a, bindings))
    raise TypeError(f"not an expression node: {e!r}")


def rename(e: Expr, old: str, new: str) -> Expr:
    return substitute(e, {old: Var(new)})
