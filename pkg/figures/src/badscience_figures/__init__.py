from .render import (
    DEFAULT_CURVES,
    FigureSpec,
    SweepFormatError,
    build_comparison,
    build_gap,
    render_comparison,
    render_gap,
)

__all__ = [
    "DEFAULT_CURVES",
    "FigureSpec",
    "SweepFormatError",
    "build_comparison",
    "build_gap",
    "render_comparison",
    "render_gap",
]
