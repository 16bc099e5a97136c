"""
Third-order forward-mode jets.

A ``Jet3`` carries a value and its first three derivatives along one seeded
variable. Fields may be floats or numpy arrays of equal shape, so a whole sample
grid can be pushed through an expression at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from src.utils.error_handler import ExpressionDomainError

Real = Union[float, np.ndarray]


@dataclass(frozen=True)
class Jet3:
    """Value and derivatives of orders 1-3 at the evaluation point."""
    value: Real
    d1: Real = 0.0
    d2: Real = 0.0
    d3: Real = 0.0
    # True when an abs/sign kink was crossed exactly; derivatives are one-sided (right).
    nonsmooth: bool = False

    @classmethod
    def constant(cls, value: Real) -> Jet3:
        zero = np.zeros_like(value, dtype=float) if isinstance(value, np.ndarray) else 0.0
        return cls(value, zero, zero, zero)

    @classmethod
    def variable(cls, value: Real) -> Jet3:
        if isinstance(value, np.ndarray):
            value = value.astype(float)
            return cls(value, np.ones_like(value), np.zeros_like(value), np.zeros_like(value))
        return cls(float(value), 1.0, 0.0, 0.0)

    def as_tuple(self) -> tuple[Real, Real, Real, Real]:
        return (self.value, self.d1, self.d2, self.d3)

    def compose(self, g0: Real, g1: Real, g2: Real, g3: Real, nonsmooth: bool = False) -> Jet3:
        """Jet of g(self) given g and its derivatives at self.value (Faa di Bruno, order 3)."""
        u1, u2, u3 = self.d1, self.d2, self.d3
        return Jet3(
            g0,
            g1 * u1,
            g2 * u1 * u1 + g1 * u2,
            g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3,
            self.nonsmooth or nonsmooth,
        )

    def __add__(self, other: Jet3 | Real) -> Jet3:
        if isinstance(other, Jet3):
            return Jet3(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2,
                        self.d3 + other.d3, self.nonsmooth or other.nonsmooth)
        return Jet3(self.value + other, self.d1, self.d2, self.d3, self.nonsmooth)

    __radd__ = __add__

    def __neg__(self) -> Jet3:
        return Jet3(-self.value, -self.d1, -self.d2, -self.d3, self.nonsmooth)

    def __sub__(self, other: Jet3 | Real) -> Jet3:
        return self + (-other)

    def __rsub__(self, other: Real) -> Jet3:
        return (-self) + other

    def __mul__(self, other: Jet3 | Real) -> Jet3:
        if isinstance(other, Jet3):
            a0, a1, a2, a3 = self.as_tuple()
            b0, b1, b2, b3 = other.as_tuple()
            return Jet3(
                a0 * b0,
                a1 * b0 + a0 * b1,
                a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
                a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
                self.nonsmooth or other.nonsmooth,
            )
        return Jet3(self.value * other, self.d1 * other, self.d2 * other, self.d3 * other, self.nonsmooth)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet3:
        u = self.value
        if np.any(u == 0):
            raise ExpressionDomainError("division by zero")
        inv = 1.0 / u
        return self.compose(inv, -inv * inv, 2.0 * inv ** 3, -6.0 * inv ** 4)

    def __truediv__(self, other: Jet3 | Real) -> Jet3:
        if isinstance(other, Jet3):
            return self * other.reciprocal()
        if np.any(np.asarray(other) == 0):
            raise ExpressionDomainError("division by zero")
        return self * (1.0 / other)

    def __rtruediv__(self, other: Real) -> Jet3:
        return self.reciprocal() * other


def _power_term(u: Real, n: float, k: int) -> Real:
    """k-th derivative of u**n with respect to u."""
    coefficient = 1.0
    for i in range(k):
        coefficient *= n - i
    if coefficient == 0.0:
        return np.zeros_like(u, dtype=float) if isinstance(u, np.ndarray) else 0.0
    exponent = n - k
    if exponent < 0 and np.any(u == 0):
        raise ExpressionDomainError("power with negative exponent at zero")
    return coefficient * np.power(u, exponent)


def power(j: Jet3, n: float) -> Jet3:
    u = j.value
    if not float(n).is_integer() and np.any(np.asarray(u) < 0):
        raise ExpressionDomainError("non-integer power of a negative base")
    return j.compose(*(_power_term(u, n, k) for k in range(4)))


def sin(j: Jet3) -> Jet3:
    s, c = np.sin(j.value), np.cos(j.value)
    return j.compose(s, c, -s, -c)


def cos(j: Jet3) -> Jet3:
    s, c = np.sin(j.value), np.cos(j.value)
    return j.compose(c, -s, -c, s)


def tan(j: Jet3) -> Jet3:
    if np.any(np.cos(j.value) == 0):
        raise ExpressionDomainError("tan at an odd multiple of pi/2")
    t = np.tan(j.value)
    sec2 = 1.0 + t * t
    return j.compose(t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t))


def exp(j: Jet3) -> Jet3:
    e = np.exp(j.value)
    return j.compose(e, e, e, e)


def ln(j: Jet3) -> Jet3:
    u = j.value
    if np.any(np.asarray(u) <= 0):
        raise ExpressionDomainError("ln of a non-positive argument")
    inv = 1.0 / u
    return j.compose(np.log(u), inv, -inv * inv, 2.0 * inv ** 3)


def sqrt(j: Jet3) -> Jet3:
    u = j.value
    if np.any(np.asarray(u) <= 0):
        raise ExpressionDomainError("sqrt of a non-positive argument")
    r = np.sqrt(u)
    return j.compose(r, 0.5 / r, -0.25 / (r * u), 0.375 / (r * u * u))


def absolute(j: Jet3) -> Jet3:
    u = j.value
    kink = bool(np.any(np.asarray(u) == 0))
    # Right derivative at the kink.
    slope = np.where(np.asarray(u) >= 0, 1.0, -1.0)
    if not isinstance(u, np.ndarray):
        slope = float(slope)
    zero = np.zeros_like(u, dtype=float) if isinstance(u, np.ndarray) else 0.0
    return j.compose(np.abs(u), slope, zero, zero, nonsmooth=kink)


def sign(j: Jet3) -> Jet3:
    u = j.value
    kink = bool(np.any(np.asarray(u) == 0))
    zero = np.zeros_like(u, dtype=float) if isinstance(u, np.ndarray) else 0.0
    value = np.sign(u)
    return Jet3(value if isinstance(u, np.ndarray) else float(value), zero, zero, zero,
                j.nonsmooth or kink)


FUNCTION_JETS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "abs": absolute,
    "sign": sign,
}
