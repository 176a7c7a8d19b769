"""Cellular automata realizing adic systems on ordered Bratteli diagrams."""

from .diagram import CLOCK, Diagram, DiagramSpec, PathRep, Tail, analyze, path_count, telescope, validate
from .errors import AdicError
from .vershik import maximal_path, minimal_path, predecessor, successor
from .synth import build_rule, make_x_init, verify_conjugacy

__all__ = [
    "CLOCK", "Diagram", "DiagramSpec", "PathRep", "Tail", "AdicError",
    "analyze", "path_count", "telescope", "validate",
    "minimal_path", "maximal_path", "successor", "predecessor",
    "build_rule", "make_x_init", "verify_conjugacy",
]
__version__ = "0.1.0"
