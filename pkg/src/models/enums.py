"""
Enums for the Legendre duality toolkit
"""
from enum import Enum


class Chart(Enum):
    """Affine chart of the 1-jet space"""
    P = "P"  # slope dy/dx
    Q = "Q"  # co-slope dx/dy, used near vertical tangents


class PointKind(Enum):
    """Local type of a curve point"""
    REGULAR = "regular"
    SINGULAR = "singular"
    DEGENERATE = "degenerate"


class DualVariant(Enum):
    """How a dual curve is charted"""
    LEGENDRE = "legendre"
    PROJECTIVE = "projective"


class OutputFormat(Enum):
    CSV = "csv"
    SVG = "svg"


class FigureId(Enum):
    """Reproducible figures"""
    GERMS = "fig-germs"
    LIFT = "fig-lift"
    SINE_DUAL = "fig-sine-dual"
    CONJUGATE = "fig-conjugate"
    CLAIRAUT_CAUSTIC = "fig-clairaut-caustic"
    PEDAL_FAMILY = "fig-pedal-family"


class CurveRole(Enum):
    """Stroke role of a rendered curve"""
    PRIMAL = "primal"
    DUAL = "dual"
    ENVELOPE = "envelope"
    LINES = "lines"
    AUXILIARY = "auxiliary"


class MarkerRole(Enum):
    CUSP = "cusp"
    INFLECTION = "inflection"
    POLE = "pole"


def get_enum_value(enum_type: type[Enum], value: str) -> Enum:
    """Look up an enum member by its value, case-insensitively."""
    wanted = value.strip().lower()
    for member in enum_type:
        if member.value.lower() == wanted:
            return member
    choices = ", ".join(member.value for member in enum_type)
    raise ValueError(f"'{value}' is not one of: {choices}")
