"""Polyominoes and toric polyominoes with many holes."""

from ._budget import CapacityError
from .polyomino import CellSet, face_census, holes, is_rook_connected

__all__ = ["CapacityError", "CellSet", "face_census", "holes", "is_rook_connected"]
__version__ = "0.1.0"
