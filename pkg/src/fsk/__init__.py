"""Frobenius splittings of graded hypersurfaces over F_p: compatible
ideals, their lattice, and ring extensions realizing them as trace ideals."""

from .ring import PolyRing, Polynomial

__version__ = "0.1.0"
