"""Figure rendering for the cavity Jahn-Teller simulator's CSV outputs."""

from .render import FigureJob, render, pr_color_norm, KINDS
from .io import MissingColumnError

__version__ = "0.1.0"

__all__ = ["FigureJob", "render", "pr_color_norm", "KINDS",
           "MissingColumnError", "__version__"]
