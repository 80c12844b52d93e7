"""Elliptic theta functions, genera from characteristic series, Thom sheaves of
virtual circle representations, and numerical checks of Thom sections on
fixed-point data.
"""

from .kernels import BACKEND
from .lattice import Lattice
from .theta import ThetaFunction

__version__ = "0.1.0"
__all__ = ["BACKEND", "Lattice", "ThetaFunction", "__version__"]
