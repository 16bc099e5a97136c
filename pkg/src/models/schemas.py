"""
Value types shared across the geometry modules
"""
import math
from dataclasses import dataclass, field

import numpy as np

from src.models.enums import Chart, PointKind
from src.utils.error_handler import ChartError


@dataclass(frozen=True)
class PointJet:
    """Position and derivatives of orders 1-3 of a planar curve at one parameter"""
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    jerk: np.ndarray

    def __iter__(self):
        return iter((self.position, self.velocity, self.acceleration, self.jerk))


@dataclass(frozen=True)
class J1Point:
    """
    Point (x, y, slope) of the 1-jet space.

    In chart P ``slope`` is dy/dx; in chart Q it is the co-slope dx/dy, so a
    vertical tangent is stored as co-slope 0.
    """
    x: float
    y: float
    slope: float
    chart: Chart = Chart.P

    def __post_init__(self):
        """Validate coordinates"""
        if not all(math.isfinite(v) for v in (self.x, self.y, self.slope)):
            raise ValueError("J1Point coordinates must be finite")

    @property
    def p(self) -> float:
        """Slope dy/dx; infinite for a vertical tangent"""
        if self.chart is Chart.P:
            return self.slope
        return math.inf if self.slope == 0.0 else 1.0 / self.slope

    @property
    def q(self) -> float:
        """Co-slope dx/dy; infinite for a horizontal tangent"""
        if self.chart is Chart.Q:
            return self.slope
        return math.inf if self.slope == 0.0 else 1.0 / self.slope

    def to_chart(self, chart: Chart) -> "J1Point":
        """Same point expressed in another chart"""
        if chart is self.chart:
            return self
        if self.slope == 0.0:
            raise ChartError(f"point ({self.x}, {self.y}) has no finite coordinate in chart {chart.value}")
        return J1Point(self.x, self.y, 1.0 / self.slope, chart)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.slope)


@dataclass(frozen=True)
class PointClass:
    """
    Local classification of a curve point.

    ``Singular(n)`` means x = alpha t^n + ..., y = beta t^(n+1) + ... after a rotation;
    ``alpha``/``beta`` are None for predictions that fix only the order.
    """
    kind: PointKind
    order: int | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        """Validate classification"""
        if self.kind is PointKind.SINGULAR:
            if self.order is None or self.order < 2:
                raise ValueError("singular points need an order n >= 2")
            if (self.alpha is not None and self.alpha == 0.0) or (self.beta is not None and self.beta == 0.0):
                raise ValueError("leading coefficients of a singular point must be non-zero")
        elif self.order is not None:
            raise ValueError(f"{self.kind.value} points carry no order")

    @classmethod
    def regular(cls) -> "PointClass":
        return cls(PointKind.REGULAR)

    @classmethod
    def degenerate(cls) -> "PointClass":
        return cls(PointKind.DEGENERATE)

    @classmethod
    def singular(cls, order: int, alpha: float | None = None, beta: float | None = None) -> "PointClass":
        return cls(PointKind.SINGULAR, order, alpha, beta)

    def same_type(self, other: "PointClass") -> bool:
        """Kind and order agree; coefficients are ignored"""
        return self.kind is other.kind and self.order == other.order

    def __str__(self) -> str:
        match self.kind:
            case PointKind.SINGULAR:
                return f"Singular({self.order})"
            case PointKind.REGULAR:
                return "Regular"
            case _:
                return "Degenerate"


@dataclass(frozen=True)
class LegendreImage:
    """Image (X, Y, P) of a 1-jet point under the Legendre transformation"""
    X: float
    Y: float
    P: float

    def as_point(self) -> J1Point:
        return J1Point(self.X, self.Y, self.P, Chart.P)


@dataclass(frozen=True)
class LiePoint:
    """Polar-contact coordinates: x = r cos(phi), y = r sin(phi), psi = phi - arctan(p)"""
    r: float
    phi: float
    psi: float

    def __post_init__(self):
        """Validate radius"""
        if self.r < 0 or not math.isfinite(self.r):
            raise ValueError("LiePoint radius must be finite and non-negative")


@dataclass(frozen=True)
class ConjugateResult:
    """
    Sampled extended-real function.

    ``values`` holds ``numpy.inf`` where the conjugate is +infinity;
    ``effective_domain`` lists the closed intervals of the grid where it is finite.
    """
    grid: np.ndarray
    values: np.ndarray
    effective_domain: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        """Validate grid"""
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values must have the same shape")
        if self.grid.size > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly ascending")
        if np.any(np.isnan(self.values)) or np.any(self.values == -np.inf):
            raise ValueError("values must be finite or +inf")

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.values)

    @staticmethod
    def domain_of(grid: np.ndarray, values: np.ndarray) -> list[tuple[float, float]]:
        """Maximal runs of finite values as (first, last) grid points"""
        runs: list[tuple[float, float]] = []
        start = None
        for i, finite in enumerate(np.isfinite(values)):
            if finite and start is None:
                start = i
            if not finite and start is not None:
                runs.append((float(grid[start]), float(grid[i - 1])))
                start = None
        if start is not None:
            runs.append((float(grid[start]), float(grid[-1])))
        return runs


@dataclass(frozen=True)
class InflectionReport:
    """Zeros of curvature, split by how they behave"""
    inflections: list[float]
    degenerate: list[float] = field(default_factory=list)
    boundary: list[float] = field(default_factory=list)

    def __iter__(self):
        return iter(self.inflections)

    def __len__(self) -> int:
        return len(self.inflections)
