"""
Curves, 1-jets and the transformations acting on them.
"""
from src.geometry.curve import ParamCurve, classify_point, curvature, find_inflections, point_jet, sample
from src.geometry.duality import dual_curve, legendre_point, projective_dual
from src.geometry.jet import J1Curve, lift, slope_at

__all__ = [
    "J1Curve",
    "ParamCurve",
    "classify_point",
    "curvature",
    "dual_curve",
    "find_inflections",
    "legendre_point",
    "lift",
    "point_jet",
    "projective_dual",
    "sample",
    "slope_at",
]
