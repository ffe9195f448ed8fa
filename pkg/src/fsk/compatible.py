"""Compatible and fixed ideals of a splitting datum, test ideals, the
splitting prime, and enumeration of all compatible primes.

An ideal I (ambient, containing f) is compatible when u I lies in
I^[q] + (f)^[q]; since f is in I this is just u I inside I^[q].  The
Cartier step C(I) = (u I + f^[q])^[1/q] is the left adjoint: C(I)
inside I iff I compatible.  Fixed means C(I) = I.  Enumeration follows
the stratification: minimal primes of (f), then minimal primes of the
restricted test ideal above each prime found, then minimal primes of
pairwise sums, until the set stabilizes.
"""

import itertools
import os
from dataclasses import dataclass, field

from .frobenius import FrobeniusDatum, bracket_power
from .ideals import Hypersurface, Ideal
from .primes import DecompositionUnavailable, minimal_primes
from .ring import Polynomial

ITER_CAP = 64


class NoTestElement(ValueError):
    """The Jacobian provides no element avoiding the minimal primes."""


class EnumerationCap(RuntimeError):
    """Compatible-prime enumeration exceeded the configured cap."""


def _cap(default=4096):
    return int(os.environ.get("FSK_CAP", default))


def is_compatible(datum: FrobeniusDatum, ideal: Ideal) -> bool:
    """Adjoint form: C(I) inside I."""
    return ideal.contains_ideal(datum.cartier(ideal))


def is_compatible_direct(datum: FrobeniusDatum, ideal: Ideal) -> bool:
    """Definition form: u I inside I^[q] + f^[q]."""
    u = datum.multiplier()
    target = bracket_power(ideal, datum.e) + bracket_power(
        datum.surface.defining, datum.e)
    return all(target.contains(u * g) for g in ideal.gens)


def is_fixed(datum: FrobeniusDatum, ideal: Ideal) -> bool:
    return datum.cartier(ideal) == Ideal(ideal.ring, ideal.canonical())


def compatible_closure(datum: FrobeniusDatum, ideal: Ideal) -> Ideal:
    """Smallest compatible ideal containing ideal (ascending iteration)."""
    cur = ideal + datum.surface.defining
    for _ in range(ITER_CAP):
        nxt = cur + datum.cartier(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError("compatible closure did not stabilize")


# -- test elements ---------------------------------------------------------

def _det(rows):
    if len(rows) == 1:
        return rows[0][0]
    ring = rows[0][0].ring
    out = ring.zero()
    for j in range(len(rows)):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def jacobian_minors(center: Ideal):
    """Size-codim minors of the Jacobian of the reduced basis."""
    ring = center.ring
    gens = center.canonical()
    codim = ring.nvars - center.dimension()
    if codim <= 0:
        return []
    jac = [[g.derivative(i) for i in range(ring.nvars)] for g in gens]
    out = []
    for rows in itertools.combinations(range(len(gens)), codim):
        for cols in itertools.combinations(range(ring.nvars), codim):
            sub = [[jac[r][c] for c in cols] for r in rows]
            d = _det(sub)
            if not d.is_zero():
                out.append(d)
    return out


def avoidance_element(ring, candidates, avoid):
    """Deterministic element of (candidates) outside every ideal in avoid.

    Tries the candidates, then F_p-linear combinations, then combinations
    with variable multiples, a few levels deep.
    """
    pool = [c for c in candidates if not c.is_zero()]
    for _ in range(3):
        for g in pool:
            if all(not P.contains(g) for P in avoid):
                return g
        k = len(pool)
        if k > 1 and ring.p ** k <= 100000:
            for coeffs in itertools.product(range(ring.p), repeat=k):
                if sum(map(bool, coeffs)) < 2:
                    continue
                g = ring.zero()
                for c, cand in zip(coeffs, pool):
                    if c:
                        g = g + cand * c
                if all(not P.contains(g) for P in avoid):
                    return g
        pool = pool + [v * g for v in ring.gens() for g in pool][: 200]
    return None


def test_element(datum: FrobeniusDatum, center: Ideal = None) -> Polynomial:
    """A Jacobian element of the center avoiding its minimal primes."""
    if center is None:
        center = datum.surface.defining
    minors = jacobian_minors(center)
    avoid = minimal_primes(center)
    c = avoidance_element(datum.ring, minors, avoid)
    if c is None:
        raise NoTestElement(
            "no Jacobian minor combination avoids the minimal primes")
    return c


def test_ideal(datum: FrobeniusDatum, center: Ideal = None) -> Ideal:
    """tau = compatible closure of (c) + center for a test element c."""
    if center is None:
        center = datum.surface.defining
    c = test_element(datum, center)
    return compatible_closure(datum, Ideal(datum.ring, [c]) + center)


# -- splitting prime --------------------------------------------------------

def datum_is_fpure(datum: FrobeniusDatum) -> bool:
    bracket = Ideal(datum.ring,
                    [g.frobenius_shift(datum.q) for g in datum.ring.gens()])
    return not bracket.contains(datum.multiplier())


def splitting_prime(datum: FrobeniusDatum) -> Ideal:
    """Largest fixed proper ideal, by descending intersection iteration."""
    if not datum_is_fpure(datum):
        raise ValueError("datum is not F-pure; no splitting prime exists")
    cur = datum.surface.maximal_ideal()
    for _ in range(ITER_CAP):
        nxt = cur.intersect(datum.cartier(cur))
        nxt = Ideal(cur.ring, nxt.canonical())
        if nxt == Ideal(cur.ring, cur.canonical()):
            if not is_fixed(datum, nxt):
                raise RuntimeError("splitting prime iteration left a non-fixed "
                                   "stable ideal")
            return nxt
        cur = nxt
    raise RuntimeError("splitting prime iteration did not stabilize")


# -- enumeration -------------------------------------------------------------

def enumerate_compatible_primes(datum: FrobeniusDatum, hints=None, cap=None):
    """All compatible primes reached by the stratification recursion."""
    cap = cap or _cap()
    ring = datum.ring
    found = {}
    frontier = list(minimal_primes(datum.surface.defining, hints=hints))
    while True:
        while frontier:
            P = frontier.pop(0)
            if P.is_one():
                continue
            key = P._key()
            if key in found:
                continue
            if not is_compatible(datum, P):
                raise RuntimeError(f"enumeration produced an incompatible prime {P!r}")
            found[key] = P
            if len(found) > cap:
                raise EnumerationCap(
                    f"more than {cap} compatible primes; raise FSK_CAP")
            try:
                tau = test_ideal(datum, center=P)
            except (NoTestElement, DecompositionUnavailable):
                continue
            if tau.is_one():
                continue
            frontier.extend(minimal_primes(tau))
        fresh = []
        primes = list(found.values())
        for A, B in itertools.combinations(primes, 2):
            S = A + B
            if S.is_one():
                continue
            try:
                comps = minimal_primes(S)
            except DecompositionUnavailable:
                continue
            for Q in comps:
                if Q._key() not in found:
                    fresh.append(Q)
        if not fresh:
            break
        frontier = fresh
    return sorted(found.values(), key=lambda q: q._key())


@dataclass
class CompatibleLattice:
    datum: FrobeniusDatum
    primes: list
    ideals: list
    covers: list = field(default_factory=list)  # (i, j): ideals[i] < ideals[j]

    @classmethod
    def build(cls, datum: FrobeniusDatum, hints=None, cap=None):
        cap = cap or _cap()
        primes = enumerate_compatible_primes(datum, hints=hints, cap=cap)
        if 2 ** len(primes) - 1 > cap:
            raise EnumerationCap(
                f"lattice would need {2 ** len(primes) - 1} intersections; "
                "raise FSK_CAP")
        seen = {}
        for r in range(1, len(primes) + 1):
            for sub in itertools.combinations(primes, r):
                meet = sub[0]
                for Q in sub[1:]:
                    meet = meet.intersect(Q)
                meet = Ideal(datum.ring, meet.canonical())
                seen.setdefault(meet._key(), meet)
        ideals = sorted(seen.values(), key=lambda q: q._key())
        lat = cls(datum, primes, ideals)
        lat.covers = lat._hasse()
        return lat

    def _hasse(self):
        m = len(self.ideals)
        below = [[False] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                if i != j and self.ideals[j].contains_ideal(self.ideals[i]) \
                        and self.ideals[i] != self.ideals[j]:
                    below[i][j] = True
        covers = []
        for i in range(m):
            for j in range(m):
                if below[i][j] and not any(
                        below[i][k] and below[k][j] for k in range(m)):
                    covers.append((i, j))
        return covers
