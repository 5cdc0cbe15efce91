"""Figure rendering for vlcsec experiment CSV outputs."""

from .figures import (
    FIGURE_IDS,
    FigureSpec,
    SchemaError,
    build_figure,
    render_figure,
)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_IDS",
    "FigureSpec",
    "SchemaError",
    "build_figure",
    "render_figure",
    "__version__",
]
