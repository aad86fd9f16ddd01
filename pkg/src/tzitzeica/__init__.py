"""Exact symbolic engine for the conservation laws of the Tzitzeica equation."""

from .diffpoly import DiffPoly
from .jets import SystemParams
from .scalars import Scalar

__all__ = ["DiffPoly", "Scalar", "SystemParams"]
__version__ = "0.1.0"
