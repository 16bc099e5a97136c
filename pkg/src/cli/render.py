"""
Deterministic SVG rendering of curves, line families and markers.

Every artist carries a gid (``curve-<i>-<role>``, ``<marker role>-<i>``) so the
output can be inspected without parsing coordinates. The hash salt is fixed and the
date metadata dropped, so identical input renders to identical bytes.
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure

from src.models.enums import CurveRole, MarkerRole
from src.utils.error_handler import RenderError

logger = logging.getLogger(__name__)

HASH_SALT = "legendre-duality"

DEFAULT_STYLES: dict[CurveRole, dict] = {
    CurveRole.PRIMAL: {"color": "#1f4e9c", "linewidth": 1.6},
    CurveRole.DUAL: {"color": "#b8321a", "linewidth": 1.6},
    CurveRole.ENVELOPE: {"color": "#b8321a", "linewidth": 2.0},
    CurveRole.LINES: {"color": "#6b6b6b", "linewidth": 0.5},
    CurveRole.AUXILIARY: {"color": "#999999", "linewidth": 0.8, "linestyle": "--"},
}

MARKER_STYLES: dict[MarkerRole, dict] = {
    MarkerRole.CUSP: {"marker": "v", "color": "#000000", "markersize": 6},
    MarkerRole.INFLECTION: {"marker": "o", "color": "#2e7d32", "markersize": 5},
    MarkerRole.POLE: {"marker": "+", "color": "#000000", "markersize": 8},
}


@dataclass
class RenderSpec:
    """
    Output size in pixels and the visible rectangle (x_min, x_max, y_min, y_max).

    ``viewport=None`` fits each panel to its data.
    """
    width: int = 640
    height: int = 480
    viewport: tuple[float, float, float, float] | None = None
    styles: dict[CurveRole, dict] = field(default_factory=lambda: dict(DEFAULT_STYLES))
    title: str = ""

    def __post_init__(self):
        """Validate size and viewport"""
        if self.width <= 0 or self.height <= 0:
            raise RenderError(f"image size must be positive, got {self.width}x{self.height}")
        if self.viewport is not None:
            x_min, x_max, y_min, y_max = self.viewport
            if not (x_max > x_min and y_max > y_min):
                raise RenderError(f"viewport must have positive width and height, got {self.viewport}")


@dataclass
class CurveLayer:
    """A polyline (``points``, NaN rows break it) or a family of segments"""
    role: CurveRole
    points: np.ndarray | None = None
    segments: list[np.ndarray] | None = None
    panel: int = 0
    label: str = ""

    def __post_init__(self):
        if (self.points is None) == (self.segments is None):
            raise RenderError("a curve layer needs either points or segments")
        if self.points is not None:
            self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)

    def bounds(self) -> np.ndarray:
        data = self.points if self.points is not None else np.vstack(self.segments)
        return data[np.all(np.isfinite(data), axis=1)]


@dataclass(frozen=True)
class Marker:
    x: float
    y: float
    role: MarkerRole = MarkerRole.CUSP
    panel: int = 0


def _fit(points: np.ndarray) -> tuple[float, float, float, float]:
    if points.size == 0:
        return (-1.0, 1.0, -1.0, 1.0)
    lo, hi = points.min(axis=0), points.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = np.where(hi - lo > 1e-9, 0.05 * span, 1.0)
    return (float(lo[0] - pad[0]), float(hi[0] + pad[0]), float(lo[1] - pad[1]), float(hi[1] + pad[1]))


def render_svg(layers: list[CurveLayer], markers: list[Marker] | None = None,
               spec: RenderSpec | None = None) -> str:
    """
    Render curves and markers to an SVG 1.1 document.

    Raises:
        RenderError: no curves to draw
    """
    spec = spec or RenderSpec()
    markers = markers or []
    if not layers:
        raise RenderError("nothing to render: at least one curve is required")

    panels = 1 + max(max(layer.panel for layer in layers), max((m.panel for m in markers), default=0))
    with matplotlib.rc_context({"svg.hashsalt": HASH_SALT, "svg.fonttype": "none"}):
        fig = Figure(figsize=(spec.width / 100.0, spec.height / 100.0), dpi=100)
        FigureCanvasSVG(fig)
        fig.patch.set_visible(False)
        axes = fig.subplots(1, panels, squeeze=False)[0]

        for i, layer in enumerate(layers):
            ax = axes[layer.panel]
            style = spec.styles.get(layer.role, DEFAULT_STYLES[layer.role])
            gid = f"curve-{i}-{layer.role.value}"
            if layer.segments is not None:
                collection = LineCollection(layer.segments, **{k: v for k, v in style.items() if k != "color"},
                                            colors=style.get("color"))
                collection.set_gid(gid)
                ax.add_collection(collection)
            else:
                (artist,) = ax.plot(layer.points[:, 0], layer.points[:, 1], **style)
                artist.set_gid(gid)

        counts: dict[MarkerRole, int] = {}
        for m in markers:
            index = counts.get(m.role, 0)
            counts[m.role] = index + 1
            (artist,) = axes[m.panel].plot([m.x], [m.y], linestyle="none", **MARKER_STYLES[m.role])
            artist.set_gid(f"{m.role.value}-{index}")

        for panel, ax in enumerate(axes):
            if spec.viewport is not None:
                x_min, x_max, y_min, y_max = spec.viewport
            else:
                data = [layer.bounds() for layer in layers if layer.panel == panel]
                x_min, x_max, y_min, y_max = _fit(np.vstack(data) if data else np.empty((0, 2)))
            ax.set_xlim(x_min, x_max)
            ax.set_ylim(y_min, y_max)
            ax.set_aspect("equal", adjustable="box")
            ax.set_axis_off()
        if spec.title:
            fig.suptitle(spec.title)

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    logger.debug(f"Rendered {len(layers)} curves and {len(markers)} markers in {panels} panels")
    return buffer.getvalue()
