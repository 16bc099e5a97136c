"""
Jet evaluation of expression trees.
"""
from __future__ import annotations

import logging
from collections.abc import Mapping

import numpy as np

from src.expr import jet3 as J
from src.expr.jet3 import Jet3, Real
from src.expr.nodes import (CONSTANTS, Add, Call, Const, Div, Expr, Mul, Neg, Num,
                            Pow, Sub, Var, to_source)
from src.utils.error_handler import ExpressionDomainError, ValidationError

logger = logging.getLogger(__name__)

Binding = Jet3 | float | np.ndarray


def _bind(value: Binding) -> Jet3:
    return value if isinstance(value, Jet3) else Jet3.constant(value)


def _eval(e: Expr, env: Mapping[str, Jet3]) -> Jet3:
    match e:
        case Num(value=v):
            return Jet3.constant(v)
        case Const(name=name):
            return Jet3.constant(CONSTANTS[name])
        case Var(name=name):
            try:
                return env[name]
            except KeyError:
                raise ValidationError(f"no value bound for variable '{name}'", field_name=name) from None
        case Neg(operand=a):
            return -_eval(a, env)
        case Add(left=a, right=b):
            return _eval(a, env) + _eval(b, env)
        case Sub(left=a, right=b):
            return _eval(a, env) - _eval(b, env)
        case Mul(left=a, right=b):
            return _eval(a, env) * _eval(b, env)
        case Div(left=a, right=b):
            numerator, denominator = _eval(a, env), _eval(b, env)
            return _checked(e, lambda: numerator / denominator)
        case Pow(base=a, exponent=n):
            base = _eval(a, env)
            return _checked(e, lambda: J.power(base, n))
        case Call(name=name, arg=a):
            argument = _eval(a, env)
            return _checked(e, lambda: J.FUNCTION_JETS[name](argument))
    raise TypeError(f"not an expression node: {e!r}")


def _checked(node: Expr, compute) -> Jet3:
    """Attach the offending subexpression to domain errors raised by jet arithmetic."""
    try:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return compute()
    except ExpressionDomainError as err:
        if err.subexpression is None:
            raise ExpressionDomainError(err.message, to_source(node)) from None
        raise


def evaluate(e: Expr, env: Mapping[str, Binding]) -> Jet3:
    """
    Evaluate an expression with every variable bound to a jet or a constant.

    Seed exactly one variable with ``Jet3.variable`` to obtain derivatives along it;
    unseeded variables act as constants, which yields partial derivatives.
    """
    return _eval(e, {name: _bind(value) for name, value in env.items()})


def eval_jet(e: Expr, x: Real, var: str = "x", env: Mapping[str, Binding] | None = None) -> Jet3:
    """Value and derivatives of orders 1-3 of ``e`` along ``var`` at ``x``."""
    bindings: dict[str, Binding] = dict(env or {})
    bindings[var] = Jet3.variable(x)
    return evaluate(e, bindings)


def eval_value(e: Expr, env: Mapping[str, Binding]) -> Real:
    return evaluate(e, env).value


def constant_value(e: Expr) -> float:
    """Value of a variable-free expression."""
    return float(evaluate(e, {}).value)


def partials(e: Expr, point: Mapping[str, float], variables: tuple[str, ...]) -> tuple[float, dict[str, float]]:
    """Value and first partial derivatives at a point, one seeded pass per variable."""
    value = 0.0
    gradient: dict[str, float] = {}
    for name in variables:
        bindings: dict[str, Binding] = dict(point)
        bindings[name] = Jet3.variable(point[name])
        jet = evaluate(e, bindings)
        value = float(jet.value)
        gradient[name] = float(jet.d1)
    return value, gradient
