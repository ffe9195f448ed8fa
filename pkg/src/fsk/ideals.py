"""Ideals of F_p[x_1..x_n] and the graded hypersurface quotients they cut.

An Ideal lives in the ambient polynomial ring and caches one reduced
Groebner basis per monomial order; the reduced grevlex basis is the
canonical form, so ideal equality is list equality of those bases.
Quotient rings R = F_p[x]/(f) are handled through Hypersurface, whose
ideals are ambient ideals containing f.
"""

import itertools

import numpy as np

from .groebner import GREVLEX_ORDER, Context, PackedBasis, groebner
from .orders import BLOCK, Order
from .ring import PolyRing, Polynomial


def elim_order(ring: PolyRing, drop) -> Order:
    """Block order eliminating the variables with indices in drop."""
    drop = set(drop)
    return Order(BLOCK, tuple(0 if i in drop else 1 for i in range(ring.nvars)))


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient f/g, raising if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    ring = f.ring
    q = ring.zero()
    glead = g.exps[0]
    ginv = pow(g.lead_coeff(), ring.p - 2, ring.p)
    while not f.is_zero():
        diff = f.exps[0] - glead
        if (diff < 0).any():
            raise ValueError("inexact polynomial division")
        c = f.lead_coeff() * ginv % ring.p
        t = ring.monomial(diff, c)
        q = q + t
        f = f - t * g
    return q


class Ideal:
    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        self.gens = [ring(g) for g in gens]
        self.gens = [g for g in self.gens if not g.is_zero()]
        self._gb = {}
        self._basis = {}

    @classmethod
    def from_gb(cls, ring, gb):
        ideal = cls(ring, gb)
        ideal._gb[GREVLEX_ORDER] = list(gb)
        return ideal

    def gb(self, order: Order = GREVLEX_ORDER):
        if order not in self._gb:
            self._gb[order] = groebner(self.gens, order, ring=self.ring)
        return self._gb[order]

    def basis(self, order: Order = GREVLEX_ORDER) -> PackedBasis:
        if order not in self._basis:
            self._basis[order] = PackedBasis(Context(self.ring, order),
                                             self.gb(order))
        return self._basis[order]

    def nf(self, f: Polynomial, order: Order = GREVLEX_ORDER) -> Polynomial:
        return self.basis(order).reduce(self.ring(f))

    def contains(self, f) -> bool:
        return self.nf(self.ring(f)).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_zero(self) -> bool:
        return not self.gb()

    def is_one(self) -> bool:
        g = self.gb()
        return len(g) == 1 and g[0].is_constant()

    def canonical(self):
        """Reduced grevlex basis: the canonical generator list."""
        return self.gb(GREVLEX_ORDER)

    def _key(self):
        return (self.ring._key(), tuple(g._key() for g in self.canonical()))

    def __eq__(self, other):
        return isinstance(other, Ideal) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.canonical()) + ")"

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gb())

    # -- lattice operations ---------------------------------------------

    def __add__(self, other):
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        gens = [a * b for a in self.gens for b in other.gens]
        return Ideal(self.ring, gens)

    def intersect(self, other: "Ideal") -> "Ideal":
        ring = self.ring
        ext = ring.extend(("@t",))
        t = ext.variable(ext.nvars - 1)
        into = [ext.variable(i) for i in range(ring.nvars)]
        gens = [g.map(ext, into) * t for g in self.gens]
        gens += [g.map(ext, into) * (ext.one() - t) for g in other.gens]
        work = Ideal(ext, gens)
        kept = work.eliminate([ext.nvars - 1])
        back = [ring.variable(i) for i in range(ring.nvars)] + [ring.zero()]
        return Ideal(ring, [g.map(ring, back) for g in kept])

    def colon_poly(self, g: Polynomial) -> "Ideal":
        if g.is_zero():
            return Ideal(self.ring, [self.ring.one()])
        meet = self.intersect(Ideal(self.ring, [g]))
        return Ideal(self.ring, [divide_exact(h, g) for h in meet.gb()])

    def colon(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            return self.colon_poly(other)
        out = None
        for g in other.gens:
            piece = self.colon_poly(g)
            out = piece if out is None else out.intersect(piece)
        if out is None:
            return Ideal(self.ring, [self.ring.one()])
        return out

    def saturate(self, h: Polynomial) -> "Ideal":
        """(I : h^infinity) by eliminating t from I + (1 - t h)."""
        ring = self.ring
        if h.is_zero():
            return Ideal(ring, [ring.one()]) if self.is_zero() else Ideal(ring, self.gens)
        ext = ring.extend(("@t",))
        t = ext.variable(ext.nvars - 1)
        into = [ext.variable(i) for i in range(ring.nvars)]
        gens = [g.map(ext, into) for g in self.gens]
        gens.append(ext.one() - t * h.map(ext, into))
        kept = Ideal(ext, gens).eliminate([ext.nvars - 1])
        back = [ring.variable(i) for i in range(ring.nvars)] + [ring.zero()]
        return Ideal(ring, [g.map(ring, back) for g in kept])

    def eliminate(self, drop):
        """Generators of I intersected with the subring avoiding drop."""
        order = elim_order(self.ring, drop)
        drop = list(drop)
        out = []
        for g in self.gb(order):
            if not any(g.uses(i) for i in drop):
                out.append(g)
        return out

    def radical_contains(self, f: Polynomial) -> bool:
        """f in rad(I), by the trick of inverting f."""
        f = self.ring(f)
        if f.is_zero():
            return self.contains(f)
        sat = Ideal(self.ring, self.gens).saturate(f)
        return sat.is_one()

    # -- numerical invariants ----------------------------------------------

    def lead_exponents(self, order: Order = GREVLEX_ORDER) -> np.ndarray:
        gb = self.gb(order)
        if not gb:
            return np.zeros((0, self.ring.nvars), np.int64)
        return np.stack([g.exps[0] for g in gb])

    def dimension(self) -> int:
        """Krull dimension of ring/I (-1 for the unit ideal)."""
        if self.is_one():
            return -1
        leads = self.lead_exponents()
        if leads.shape[0] == 0:
            return self.ring.nvars
        n = self.ring.nvars
        for size in range(n, 0, -1):
            for sub in itertools.combinations(range(n), size):
                mask = np.zeros(n, bool)
                mask[list(sub)] = True
                # sub is independent iff no lead monomial lives inside it
                if not np.any(np.all(leads[:, ~mask] == 0, axis=1)):
                    return size
        return 0

    def is_zero_dimensional(self) -> bool:
        return self.dimension() == 0

    def standard_monomials(self) -> np.ndarray:
        """Monomial basis of ring/I when zero dimensional."""
        leads = self.lead_exponents()
        n = self.ring.nvars
        bounds = np.zeros(n, np.int64)
        for i in range(n):
            pure = leads[np.all(leads[:, np.arange(n) != i] == 0, axis=1), i]
            pure = pure[pure > 0]
            if pure.size == 0:
                raise ValueError("ideal is not zero dimensional")
            bounds[i] = pure.min()
        from .ring import box_exponents
        box = box_exponents(bounds)
        keep = ~np.any(np.all(box[:, None, :] >= leads[None, :, :], axis=2), axis=1)
        return box[keep]

    def map(self, target: PolyRing, images) -> "Ideal":
        return Ideal(target, [g.map(target, images) for g in self.gens])


class Hypersurface:
    """R = F_p[x_1..x_n] / (f), f the defining equation (0 allowed)."""

    def __init__(self, ring: PolyRing, f: Polynomial):
        self.ring = ring
        self.f = ring(f)
        self.p = ring.p
        self.defining = Ideal(ring, [self.f])

    def _key(self):
        return (self.ring._key(), self.f._key())

    def __eq__(self, other):
        return isinstance(other, Hypersurface) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"{self.ring!r}/({self.f})"

    def ideal(self, gens) -> Ideal:
        """The ambient ideal generated by gens together with f."""
        return Ideal(self.ring, list(gens) + [self.f])

    def maximal_ideal(self) -> Ideal:
        return Ideal(self.ring, list(self.ring.gens()) + [self.f])

    def dimension(self) -> int:
        return self.defining.dimension()

    def reduce(self, g: Polynomial) -> Polynomial:
        return self.defining.nf(g)
