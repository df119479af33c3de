"""Figure rendering for knet pipeline artifacts."""

from .artifacts import ArtifactError
from .render import KINDS, FigureJob, RenderResult, render

__version__ = "0.1.0"

__all__ = ["ArtifactError", "FigureJob", "KINDS", "RenderResult", "render", "__version__"]
