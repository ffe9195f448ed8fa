"""Frobenius machinery on hypersurface quotients: bracket powers, p-th
roots of ideals, Fedder's criterion and the splitting datum (R, u, e).

Conventions: R = F_p[x]/(f) is presented by its ambient ring, every
ideal of R is an ambient ideal containing f, and the Cartier action of
the datum on such an ideal is I -> ((u I + f^[q]) )^[1/q] with q = p^e.
"""

from dataclasses import dataclass

import numpy as np

from .ideals import Hypersurface, Ideal
from .ring import Polynomial


def bracket_power(ideal: Ideal, e: int) -> Ideal:
    """I^[p^e], generator-wise Frobenius."""
    q = ideal.ring.p ** e
    return Ideal(ideal.ring, [g.frobenius_shift(q) for g in ideal.gens])


def poly_roots(g: Polynomial, q: int):
    """The h_a in the unique expansion g = sum_a x^a h_a^q, a < q."""
    if g.is_zero():
        return []
    ring = g.ring
    res = g.exps % q
    quo = g.exps // q
    _, inverse = np.unique(res, axis=0, return_inverse=True)
    out = []
    for k in range(inverse.max() + 1):
        pick = inverse == k
        out.append(ring.from_terms(quo[pick], g.coeffs[pick]))
    return out


def frobenius_root(ideal: Ideal, e: int) -> Ideal:
    """Smallest J with I contained in J^[p^e]; additive over generators."""
    q = ideal.ring.p ** e
    gens = []
    for g in ideal.gens:
        gens.extend(poly_roots(g, q))
    return Ideal(ideal.ring, gens)


def fedder_element(surface: Hypersurface) -> Polynomial:
    return surface.f ** (surface.p - 1)


@dataclass(frozen=True)
class FrobeniusDatum:
    """A splitting datum: the hypersurface with multiplier u at level e."""

    surface: Hypersurface
    u: Polynomial
    e: int = 1

    @classmethod
    def fedder(cls, surface: Hypersurface, e: int = 1) -> "FrobeniusDatum":
        return cls(surface, fedder_element(surface), e)

    @property
    def ring(self):
        return self.surface.ring

    @property
    def p(self):
        return self.surface.p

    @property
    def q(self):
        return self.p ** self.e

    def multiplier(self) -> Polynomial:
        """u_e = u^(1 + p + .. + p^(e-1)), the level-e multiplier."""
        expo = (self.q - 1) // (self.p - 1)
        return self.u ** expo

    def cartier(self, ideal: Ideal, modulus: Ideal = None) -> Ideal:
        """One Cartier step (u I + J^[q])^[1/q]; J defaults to (f)."""
        if modulus is None:
            modulus = self.surface.defining
        work = Ideal(self.ring, [self.multiplier() * g for g in ideal.gens])
        work = work + bracket_power(modulus, self.e)
        return frobenius_root(work, self.e)


def is_fpure(surface: Hypersurface, e: int = 1) -> bool:
    """Fedder: f^(q-1) outside (x_1^q, .., x_n^q)."""
    q = surface.p ** e
    u = surface.f ** (q - 1)
    bracket = Ideal(surface.ring,
                    [g.frobenius_shift(q) for g in surface.ring.gens()])
    return not bracket.contains(u)


def is_fpure_colon(surface: Hypersurface, e: int = 1) -> bool:
    """Same test through the general colon form (J^[q] : J) vs m^[q]."""
    q = surface.p ** e
    ring = surface.ring
    J = Ideal(ring, [surface.f])
    colon = bracket_power(J, e).colon(J)
    bracket = Ideal(ring, [g.frobenius_shift(q) for g in ring.gens()])
    return any(not bracket.contains(g) for g in colon.gb())
