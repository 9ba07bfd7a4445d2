"""Counting polynomials of quiver moduli over finite fields."""

from quivercount.arith import Polynomial, RationalFunction
from quivercount.quiver import Quiver

__all__ = ["Polynomial", "RationalFunction", "Quiver"]
__version__ = "0.1.0"
