"""Piecewise bijections of the circle: exact algebra, L1 metric, flow straightening."""
from .geometry import Arc, CirclePoint, circle_dist
from .pac import Affine, FlowChart, PacMap, Piece, bp0, compose, invert, normalize, sharp
from .metric import MetricValue, d, d_tilde1

__all__ = [
    "Arc", "CirclePoint", "circle_dist",
    "Affine", "FlowChart", "PacMap", "Piece", "bp0", "compose", "invert", "normalize", "sharp",
    "MetricValue", "d", "d_tilde1",
]
__version__ = "0.1.0"
