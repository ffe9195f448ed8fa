"""Finite covers R -> S whose trace ideal traps a compatible ideal.

For each positive-height component P of the ideal the forge extracts the
socle class of top local cohomology along P, writes its Frobenius
eigen-equation as an explicit coboundary, clears the coboundary entries
into a tower of monic relations, and adjoins the corrected class itself
as the root of T^p - uT, pinned to its defining fraction.  Pinning kills
the class over S, which drops the trace ideal into P, while the adjusted
multipliers keep S etale along every compatible prime not containing the
ideal.  Height-zero components need no class surgery, only a quotient
that makes S vanish along them.
"""

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .cech import (CechContext, CechCochain, LocalizedFraction,
                   adjust_u, socle_datum, solve_coboundary)
from .compatible import (enumerate_compatible_primes, is_compatible,
                         jacobian_minors)
from .frobenius import FrobeniusDatum, is_fpure
from .ideals import Hypersurface, Ideal, divide_exact
from .groebner import syzygy_kernel
from .linalg import solve
from .primes import DecompositionUnavailable, is_prime_certified, minimal_primes
from .ring import PolyRing, Polynomial, box_exponents, monomials_of_degree


class ParameterSearchExhausted(RuntimeError):
    """The deterministic avoidance or parameter search ran out of forms."""


class ZeroDivisorParameter(ValueError):
    """The parameter product is a zerodivisor; the pinning would lie."""


class DomainSelectionFailure(RuntimeError):
    """No certified path to a domain extension was found."""


class CertificateFailure(RuntimeError):
    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


@dataclass(frozen=True)
class AdjoinedVariable:
    name: str
    weight: int
    relation: Polynomial      # monic in this variable, in the final ring
    derivative: Polynomial    # own-variable derivative, a base ring element
    free: bool                # False once the root is pinned to a fraction
    component: int
    tail: Optional[Polynomial] = None      # base ring F in V^p = E V + F
    pin_num: Optional[Polynomial] = None   # pinned value numerator
    pin_den: Optional[Polynomial] = None   # base ring denominator


@dataclass(frozen=True)
class EtaleCertificate:
    """Unit-derivative witnesses at one avoided prime.

    Every witness triple is (relation, derivative, token) where the token
    is the nonzero normal form of the derivative against the prime."""

    prime: Ideal
    witnesses: tuple


@dataclass(frozen=True)
class ComponentWitness:
    """Everything needed to re-verify one component after the build."""

    prime: Ideal
    params: tuple
    u: Polynomial
    alpha_num: Polynomial    # base ring; alpha = alpha_num / prod z_t^s_t
    alpha_s: tuple           # per-parameter denominator exponents
    w_num: Polynomial        # final ring; root w = w_num / prod z_t^s_t
    w_s: tuple
    root: Optional[str]


@dataclass(frozen=True)
class LiftedCochain:
    """Level-(d-1) cochain whose entries may live in an extension ring.

    Entry for the subset missing parameter i is nums[i] over the
    parameter monomial with exponents ss[i], one exponent per shared
    parameter."""

    nums: tuple
    ss: tuple


@dataclass
class ExtensionPresentation:
    base: Hypersurface
    ring: PolyRing
    relations: Ideal
    adjoined: tuple = ()
    witnesses: tuple = ()
    avoid: tuple = ()
    killed: Optional[Ideal] = None
    domain_mode: bool = False
    injective_certified: Optional[bool] = None
    certificates: tuple = ()

    @property
    def adjoined_names(self):
        return tuple(v.name for v in self.adjoined)

    @property
    def free_over_base(self) -> bool:
        return self.killed is None and all(v.free for v in self.adjoined)

    @property
    def fraction_presented(self) -> bool:
        """True when every non-free variable carries its pinned value as
        a fraction over the free part of the tower."""
        return self.killed is None and all(
            v.free or v.pin_num is not None for v in self.adjoined)

    def is_identity(self) -> bool:
        return not self.adjoined and self.killed is None

    def lift(self, g: Polynomial) -> Polynomial:
        return _lift(g, self.ring)

    def variable(self, name: str) -> Polynomial:
        return self.ring.variable(self.ring.names.index(name))

    def __repr__(self):
        extra = ",".join(self.adjoined_names)
        return f"{self.base!r}[{extra}]" if extra else f"{self.base!r}"


def _lift(g: Polynomial, target: PolyRing) -> Polynomial:
    # variables are only ever appended, so index images are stable
    if g.ring is target or g.ring == target:
        return g
    images = [target.variable(i) for i in range(g.ring.nvars)]
    return g.map(target, images)


# -- prime avoidance ----------------------------------------------------------

def _search_outside(ring: PolyRing, gens, avoid):
    """Deterministic element built from gens lying outside every prime."""
    pool = [g for _, g in sorted({str(g): g for g in gens
                                  if not g.is_zero()}.items())]
    for _ in range(2):
        for g in pool:
            if all(not P.contains(g) for P in avoid):
                return g
        k = len(pool)
        if k > 1 and ring.p ** k <= 200000:
            for coeffs in itertools.product(range(ring.p), repeat=k):
                nz = [i for i, c in enumerate(coeffs) if c]
                if len(nz) < 2 or coeffs[nz[0]] != 1:
                    continue
                g = ring.zero()
                for c, cand in zip(coeffs, pool):
                    if c:
                        g = g + cand * c
                if all(not P.contains(g) for P in avoid):
                    return g
        elif k > 1:
            for a, b in itertools.combinations(pool, 2):
                for c in range(1, ring.p):
                    g = a + b * c
                    if all(not P.contains(g) for P in avoid):
                        return g
        quad = [a * b for a, b in
                itertools.combinations_with_replacement(pool, 2)]
        pool = [g for _, g in sorted({str(g): g for g in quad}.items())][:64]
    return None


def avoidance_element(K: Ideal, inside, avoid) -> Polynomial:
    """Element of K and of every ideal in inside, outside every avoid prime.

    The search is deterministic: generators of the intersection in string
    order, then F_p-linear combinations, then a quadratic escalation."""
    M = K
    for J in inside:
        M = M.intersect(J)
    ring = M.ring
    gens = [g.monic() for g in M.canonical() if not g.is_zero()]
    if not gens:
        raise ParameterSearchExhausted("the intersection ideal is zero")
    for P in avoid:
        if P.contains_ideal(Ideal(ring, gens)):
            raise ParameterSearchExhausted(
                "an avoided prime contains the whole intersection")
    out = _search_outside(ring, gens, avoid)
    if out is None:
        raise ParameterSearchExhausted("avoidance search exhausted")
    return out


# -- parameter choice ---------------------------------------------------------

def component_height(surface: Hypersurface, prime: Ideal) -> int:
    return surface.dimension() - prime.dimension()


def _parameter_candidates(ring: PolyRing):
    gens = list(ring.gens())
    for v in gens:
        yield v
    by_weight = {}
    for v, w in zip(gens, ring.weights):
        by_weight.setdefault(w, []).append(v)
    for w in sorted(by_weight):
        vs = by_weight[w]
        k = len(vs)
        if k < 2 or ring.p ** k > 200000:
            continue
        for coeffs in itertools.product(range(ring.p), repeat=k):
            nz = [i for i, c in enumerate(coeffs) if c]
            if len(nz) < 2 or coeffs[nz[0]] != 1:
                continue
            g = ring.zero()
            for c, v in zip(coeffs, vs):
                if c:
                    g = g + v * c
            yield g
    for w in sorted(set(ring.weights)):
        monos = monomials_of_degree(ring, 2 * w)
        if len(monos) > 12 or ring.p ** len(monos) > 200000:
            continue
        for coeffs in itertools.product(range(ring.p), repeat=len(monos)):
            nz = [i for i, c in enumerate(coeffs) if c]
            if not nz or coeffs[nz[0]] != 1:
                continue
            g = ring.zero()
            for c, row in zip(coeffs, monos):
                if c:
                    g = g + ring.from_terms(np.asarray([row]), np.asarray([c]))
            yield g


def _partial_sop_ok(surface: Hypersurface, prime: Ideal, params) -> bool:
    """First len(params) elements cut prime down by exactly that much."""
    k = len(params)
    J = surface.ideal(list(params))
    try:
        comps = minimal_primes(J)
    except DecompositionUnavailable:
        return False
    through = [W for W in comps if prime.contains_ideal(W)]
    if not through:
        return False
    want = surface.dimension() - k
    return all(W.dimension() == want for W in through)


def choose_parameters(surface: Hypersurface, components, avoid):
    """Shared homogeneous parameter sequence for all components.

    The first height(P) entries form a system of parameters at each
    component P, and every entry stays outside every avoided prime and
    every height-zero component, so their product is a nonzerodivisor."""
    heights = [component_height(surface, P) for P in components]
    positive = [(P, h) for P, h in zip(components, heights) if h > 0]
    dodge = list(avoid) + [P for P, h in zip(components, heights) if h == 0]
    N = max((h for _, h in positive), default=0)
    chosen = []
    seen = set()
    for k in range(1, N + 1):
        found = None
        for cand in _parameter_candidates(surface.ring):
            key = str(cand)
            if key in seen:
                continue
            if not cand.is_homogeneous():
                continue
            if any(P.contains(cand) for P in dodge):
                continue
            trial = chosen + [cand]
            if all(_partial_sop_ok(surface, P, trial)
                   for P, h in positive if h >= k):
                found = cand
                break
        if found is None:
            raise ParameterSearchExhausted(
                f"no homogeneous parameter found at position {k}")
        chosen.append(found)
        seen.add(str(found))
    return tuple(chosen)


# -- monicization -------------------------------------------------------------

def _own_variable(g: Polynomial) -> int:
    """Index of the unique variable dividing every term of g."""
    if g.is_zero():
        raise ValueError("zero polynomial has no principal variable")
    common = np.min(g.exps, axis=0)
    cands = [i for i in range(g.ring.nvars) if common[i] > 0]
    if len(cands) != 1:
        raise ValueError("no unique variable divides every term")
    return cands[0]


def monicize(g: Polynomial, beta_entry: LocalizedFraction, ctx: CechContext):
    """Clear a coboundary entry r/z against g = T^p - uT.

    Returns (T^p - u z^{p-1} T - r z^{p-1}, -u z^{p-1}); the second
    component is the T-derivative, whose unit obligations at the avoided
    primes certify the stage etale there."""
    ext = g.ring
    p = ext.p
    t_idx = _own_variable(g)
    T = ext.variable(t_idx)
    u = divide_exact(-(g - T ** p), T)
    z = _lift(ctx.denominator(beta_entry.denom), ext)
    r = _lift(beta_entry.numerator, ext)
    zq = z ** (p - 1)
    ftilde = T ** p - u * zq * T - r * zq
    return ftilde, -(u * zq)


# -- domain-mode stage collapse -----------------------------------------------

BOX_LIMIT = 6_000_000


class _Tower:
    """Arithmetic in a stage tower as a free base module.

    Every free variable V satisfies a monic V^p = E V + F with E, F in
    the base ring, so the subring they generate is a free module over
    base/(f) on the exponent patterns below p.  Expansion over that
    basis replaces Groebner reduction in the tower with base ring
    arithmetic.  Pinned variables are excluded: polynomials passed to
    expand must not mention them."""

    def __init__(self, pres: ExtensionPresentation, ring: PolyRing = None):
        self.pres = pres
        self.base = pres.base.ring
        self.nb = self.base.nvars
        self.p = self.base.p
        self.ambient = ring if ring is not None else pres.ring
        self.free_pos = []
        self.EF = []
        for i, v in enumerate(pres.adjoined):
            if v.free:
                self.free_pos.append(self.nb + i)
                self.EF.append((-v.derivative, v.tail))
        self.nadj = len(self.EF)
        self._pos_index = {pos: i for i, pos in enumerate(self.free_pos)}
        self._vp = {}

    def times_v(self, i, vec):
        E, F = self.EF[i]
        carry = vec[self.p - 1]
        out = [self.base.zero()] + list(vec[:self.p - 1])
        if not carry.is_zero():
            out[1] = out[1] + carry * E
            out[0] = out[0] + carry * F
        return out

    def v_power(self, i, e):
        key = (i, e)
        hit = self._vp.get(key)
        if hit is not None:
            return hit
        if e == 0:
            vec = [self.base.zero()] * self.p
            vec[0] = self.base.one()
        else:
            vec = self.times_v(i, self.v_power(i, e - 1))
        self._vp[key] = vec
        return vec

    def lin_power(self, i, e):
        # (E V + F)^e, the expansion of V^{pe}
        E, F = self.EF[i]
        vec = [self.base.zero()] * self.p
        vec[0] = self.base.one()
        for _ in range(e):
            shifted = self.times_v(i, vec)
            vec = [F * a + E * b for a, b in zip(vec, shifted)]
        return vec

    def tensor(self, vecs, scale):
        out = {(): scale}
        for vec in vecs:
            nxt = {}
            for patt, coeff in out.items():
                for t, vc in enumerate(vec):
                    if vc.is_zero():
                        continue
                    c2 = coeff * vc
                    if not c2.is_zero():
                        key = patt + (t,)
                        nxt[key] = nxt.get(key, self.base.zero()) + c2
            out = nxt
        return out

    def expand(self, poly):
        """Coordinates over the free basis: {pattern: base NF mod f}."""
        acc = {}
        for row, cf in zip(poly.exps, poly.coeffs):
            eb = np.asarray(row[:self.nb], np.int64)
            vecs = []
            for pos in range(self.nb, len(row)):
                e = int(row[pos])
                if pos in self._pos_index:
                    vecs.append(self.v_power(self._pos_index[pos], e))
                elif e:
                    raise ArithmeticError(
                        "expansion hit a pinned variable")
            parts = self.tensor(vecs, self.base.monomial(eb, int(cf)))
            for patt, cpoly in parts.items():
                acc[patt] = acc.get(patt, self.base.zero()) + cpoly
        out = {}
        for patt, cpoly in acc.items():
            r = self.pres.base.reduce(cpoly)
            if not r.is_zero():
                out[patt] = r
        return out

    def is_zero(self, poly) -> bool:
        return not self.expand(poly)

    def module_monomials(self, degree: int):
        """Weighted-degree slice of the free module basis: standard
        monomials of the base hypersurface times patterns below p."""
        ring = self.ambient
        leads = self.pres.base.defining.lead_exponents()
        bounds = []
        for i in range(ring.nvars):
            w = ring.weights[i]
            cap = degree // w + 1 if w > 0 else 0
            if i < self.nb:
                if len(leads):
                    others = np.delete(leads, i, axis=1)
                    pure = leads[np.all(others == 0, axis=1), i]
                    pure = pure[pure > 0]
                    if pure.size:
                        cap = int(pure.min()) if cap == 0 \
                            else min(cap, int(pure.min()))
            elif i in self._pos_index:
                cap = min(cap, self.p) if cap > 0 else self.p
            else:
                cap = 1     # pinned or root variable: exponent zero only
            if cap <= 0:
                raise ArithmeticError(
                    "stage search cannot bound a weightless variable")
            bounds.append(cap)
        total = 1
        for b in bounds:
            total *= b
        if total > BOX_LIMIT:
            raise ArithmeticError("stage search space too large")
        box = box_exponents(bounds)
        wv = np.asarray(ring.weights, np.int64)
        box = box[box @ wv == degree]
        if len(leads) and len(box):
            padded = np.zeros((len(leads), ring.nvars), np.int64)
            padded[:, :self.nb] = leads
            hit = np.any(np.all(box[:, None, :] >= padded[None, :, :],
                                axis=2), axis=1)
            box = box[~hit]
        return [ring.from_terms(np.asarray([row]), np.asarray([1]))
                for row in box]


def _tower_root(pres: ExtensionPresentation, c_st: Polynomial,
                a_st: Polynomial, degree: int):
    """Complete root search through an unsaturated stage tower.

    Candidate p-th powers expand binomially over the free module basis
    and the whole system assembles from base ring normal forms; c_st
    and a_st are base ring elements.  A miss therefore proves no
    element of the tower satisfies the equation."""
    tw = _Tower(pres)
    ring = pres.ring
    base = tw.base
    p = tw.p
    if degree < 0:
        return None
    monos = tw.module_monomials(degree)
    if not monos:
        return None
    zeros = tuple(0 for _ in range(tw.nadj))
    flats = []
    for m in monos:
        eb = np.asarray(m.exps[0][:tw.nb], np.int64)
        ea = [int(m.exps[0][pos]) for pos in tw.free_pos]
        head = tw.tensor([tw.lin_power(i, e) for i, e in enumerate(ea)],
                         base.monomial(eb * p, 1))
        col = dict(head)
        low = base.monomial(eb, 1) * c_st
        col[tuple(ea)] = col.get(tuple(ea), base.zero()) - low
        flat = {}
        for patt, poly in col.items():
            poly = pres.base.reduce(poly)
            for row, c in zip(poly.exps, poly.coeffs):
                flat[(patt,) + tuple(int(x) for x in row)] = int(c)
        flats.append(flat)
    tgt = {}
    tpoly = pres.base.reduce(a_st)
    for row, c in zip(tpoly.exps, tpoly.coeffs):
        tgt[(zeros,) + tuple(int(x) for x in row)] = int(c)
    flats.append(tgt)
    index = {}
    for flat in flats:
        for key in flat:
            index.setdefault(key, len(index))
    A = np.zeros((len(index), len(flats)), np.int64)
    for jcol, flat in enumerate(flats):
        for key, c in flat.items():
            A[index[key], jcol] = c % p
    sol = solve(A[:, :-1], A[:, -1], p)
    if sol is None:
        return None
    h = ring.zero()
    for c, m in zip(sol, monos):
        if c:
            h = h + m * int(c)
    check = h ** p - _lift(c_st, ring) * h - _lift(a_st, ring)
    if not tw.is_zero(check):
        raise ArithmeticError("tower root candidate fails its equation")
    return h


def _normal_certified(pres: ExtensionPresentation) -> bool:
    """Complete intersection plus a codimension-2 singular locus.

    Over the prime field the Jacobian criterion detects the regular
    locus, so this certifies Serre's conditions and hence normality."""
    rel = pres.relations
    gens = rel.canonical()
    dim = rel.dimension()
    if len(gens) != rel.ring.nvars - dim:
        return False
    minors = jacobian_minors(rel)
    sing = Ideal(rel.ring, list(gens) + minors)
    if sing.is_one():
        return True
    return sing.dimension() <= dim - 2


# -- adjunction ---------------------------------------------------------------

def _colon_stable(rel: Ideal, h: Polynomial) -> bool:
    return rel.colon_poly(h) == Ideal(rel.ring, rel.canonical())


def _reduce_fraction(num: Polynomial, den: Polynomial):
    """Cancel the common monomial content of a fraction num/den.

    den lives in the base ring; num may live in an extension.  Only the
    shared base positions cancel, which keeps den a base element."""
    if num.is_zero() or den.is_zero():
        return num, den
    nb = den.ring.nvars
    m = np.minimum(num.exps[:, :nb].min(axis=0), den.exps.min(axis=0))
    if not m.any():
        return num, den
    nexps = num.exps.copy()
    nexps[:, :nb] -= m
    dexps = den.exps - m
    return (num.ring.from_terms(nexps, num.coeffs),
            den.ring.from_terms(dexps, den.coeffs))


def _defraction(pres: ExtensionPresentation, poly: Polynomial):
    """Clear pinned variables out of poly.

    Returns (num, den) with num free of pinned variables and den a base
    ring product of pin denominators, so that poly = num/den in the
    fraction field.  Each pin contributes its denominator to the power
    actually reached in poly; exponents must stay below p."""
    ring = poly.ring
    p = pres.base.p
    specs = {}
    for i, v in enumerate(pres.adjoined):
        if not v.free:
            specs[pres.base.ring.nvars + i] = (_lift(v.pin_num, ring),
                                               v.pin_den)
    hit = {pos: 0 for pos in specs if poly.exps.size
           and int(poly.exps[:, pos].max()) > 0}
    if not hit:
        return poly, pres.base.ring.one()
    for pos in hit:
        b = int(poly.exps[:, pos].max())
        if b >= p:
            raise ArithmeticError("pinned exponent out of range")
        hit[pos] = b
    den = pres.base.ring.one()
    for pos, b in hit.items():
        den = den * specs[pos][1] ** b
    num = ring.zero()
    for row, cf in zip(poly.exps, poly.coeffs):
        bare = row.copy()
        piece = ring.one()
        for pos, bmax in hit.items():
            hnum, dpart = specs[pos]
            b = int(row[pos])
            bare[pos] = 0
            piece = piece * hnum ** b * _lift(dpart ** (bmax - b), ring)
        term = ring.from_terms(np.asarray([bare]), np.asarray([int(cf)]))
        num = num + term * piece
    return num, den


def _clearing_columns(pres: ExtensionPresentation, tw: _Tower, specs,
                      ring1: PolyRing):
    """Cleared product columns of the tower monomials below the monic
    degrees, as vectors over the free tower basis.

    specs lists (position, numerator, denominator) for every non-free
    variable of ring1, numerators free of pinned variables.  Returns
    (labels, cols, dead, mono) where labels marks each product column
    with its (free pattern, pin powers), cols carries those columns
    followed by f times the basis vectors, dead lists the minimal pin
    monomials that vanish outright, and mono rebuilds a ring1 monomial
    from a label.  The syzygies of cols, restricted to the label block,
    are exactly the coefficient vectors (a_i) with sum a_i x_i = 0 in
    the presented ring, because the clearing factor is a uniform
    nonzerodivisor."""
    base = tw.base
    p = tw.p
    k = tw.nadj
    patterns = [tuple(int(x) for x in row)
                for row in box_exponents([p] * k)] if k else [()]
    qindex = {q: i for i, q in enumerate(patterns)}
    nq = len(patterns)
    zero = base.zero()
    pinpows, pindead = [], []
    for pos, num, den in specs:
        # a numerator that dies in the tower kills every product it
        # touches, so those monomials are relations outright and their
        # columns and power tables never need to be built; the b = 0
        # clearing factor den^(p-1) would then multiply every live
        # column uniformly, and uniform scaling by an element prime to
        # f never changes the syzygies, so it is dropped as well
        if tw.is_zero(num):
            pindead.append(True)
            pinpows.append([ring1.one()])
            continue
        pindead.append(False)
        row = [_lift(den ** (p - 1), ring1)]
        for b in range(1, p):
            row.append(num ** b * _lift(den ** (p - 1 - b), ring1))
        pinpows.append(row)
    pinpatts = [tuple(int(x) for x in row)
                for row in box_exponents([p] * len(specs))] \
        if specs else [()]

    def mono(patt, bp):
        exps = [0] * ring1.nvars
        for i, pos in enumerate(tw.free_pos):
            exps[pos] = patt[i]
        for j, b in enumerate(bp):
            exps[specs[j][0]] = b
        return ring1.monomial(np.asarray(exps, np.int64), 1)

    cols, labels, dead = [], [], []
    dead_emitted = set()
    for bp in pinpatts:
        deadpos = tuple(j for j, b in enumerate(bp) if b and pindead[j])
        if deadpos:
            key = tuple(b if j in deadpos else 0 for j, b in enumerate(bp))
            if key == bp and not any(
                    all(a <= b for a, b in zip(prev, key)) and prev != key
                    for prev in dead_emitted):
                dead_emitted.add(key)
                dead.append(mono((0,) * k, bp))
            continue
        prodp = None
        for j, b in enumerate(bp):
            prodp = pinpows[j][b] if prodp is None \
                else prodp * pinpows[j][b]
        for patt in patterns:
            exps = np.zeros(ring1.nvars, np.int64)
            for i, pos in enumerate(tw.free_pos):
                exps[pos] = patt[i]
            vm = ring1.monomial(exps, 1)
            coords = tw.expand(vm if prodp is None else vm * prodp)
            vec = [zero] * nq
            for q0, coeff in coords.items():
                vec[qindex[q0]] = coeff
            cols.append(vec)
            labels.append((patt, bp))
    # strip any monomial content shared by every product column; f is
    # squarefree with no monomial factor, so uniform scaling keeps the
    # same syzygies while the degrees seen by the module Groebner drop
    mins = [e.exps.min(axis=0) for vec in cols for e in vec
            if not e.is_zero()]
    if mins:
        m = np.vstack(mins).min(axis=0)
        m[pres.base.f.exps.min(axis=0) > 0] = 0
        if m.any():
            cols = [[e if e.is_zero()
                     else base.from_terms(e.exps - m, e.coeffs)
                     for e in vec] for vec in cols]
    for q in patterns:
        vec = [zero] * nq
        vec[qindex[q]] = pres.base.f
        cols.append(vec)
    return labels, cols, dead, mono


def _fraction_relations(pres: ExtensionPresentation, tw: _Tower,
                        specs, ring1: PolyRing, seed) -> Ideal:
    """Exact relations of a tower with pinned fraction generators.

    Reduction by the monic relations truncates every exponent below p,
    so kernel elements of the evaluation into the localized tower
    biject with base module syzygies among the cleared product columns,
    with f times the basis vectors absorbing the hypersurface.  The
    result presents the image subring exactly; no saturation pass."""
    labels, cols, dead, mono = _clearing_columns(pres, tw, specs, ring1)
    nmain = len(labels)
    gens = list(seed)
    seen = {g._key() for g in gens}
    for g in dead:
        if g._key() not in seen:
            seen.add(g._key())
            gens.append(g)
    syz = syzygy_kernel(cols, ring=tw.base)
    for s in syz:
        g = ring1.zero()
        for (patt, bp), cf in zip(labels, s[:nmain]):
            if cf.is_zero():
                continue
            g = g + _lift(cf, ring1) * mono(patt, bp)
        if g.is_zero():
            continue
        # syzygies that only restate the hypersurface are already carried
        try:
            divide_exact(g, _lift(pres.base.f, ring1))
            continue
        except (ValueError, ArithmeticError):
            pass
        if g._key() not in seen:
            seen.add(g._key())
            gens.append(g)
    return Ideal(ring1, gens)


def adjoin_root(pres: ExtensionPresentation, datum, beta_bar: LiftedCochain,
                name: str):
    """Adjoin w = alpha - d(beta_bar) as the pinned root of T^p - uT.

    The pinning relation z T - c presents the subring generated by the
    fraction c/z inside the localization, which kills the class of
    alpha.  Over a free stage tower the presentation and its guards run
    through the module expansion; otherwise they fall back to generic
    saturation."""
    base = pres.base
    ctx = datum.context
    d = ctx.d
    p = base.p
    ring0 = pres.ring
    top = datum.alpha.entries[0]
    svec = list(top.denom)
    for dd, n in zip(beta_bar.ss, beta_bar.nums):
        if n.is_zero():
            continue
        for t in range(d):
            svec[t] = max(svec[t], dd[t])
    svec = tuple(svec)
    zs = [_lift(z, ring0) for z in ctx.params]
    c = _lift(top.numerator, ring0)
    for t in range(d):
        c = c * zs[t] ** (svec[t] - top.denom[t])
    for i in range(d):
        n_i = beta_bar.nums[i]
        if n_i.is_zero():
            continue
        term = _lift(n_i, ring0)
        for t in range(d):
            term = term * zs[t] ** (svec[t] - beta_bar.ss[i][t])
        c = c - term if i % 2 == 0 else c + term
    prod_b = base.ring.one()
    Zb = base.ring.one()
    for t, z in enumerate(ctx.params):
        prod_b = prod_b * z
        Zb = Zb * z ** svec[t]
    wdeg = datum.degree()
    ring1 = ring0.extend((name,), (wdeg,))
    T = ring1.variable(ring1.nvars - 1)
    g_rel = T ** p - _lift(datum.u, ring1) * T
    var = AdjoinedVariable(name=name, weight=wdeg, relation=g_rel,
                           derivative=-datum.u, free=False,
                           component=-1, tail=base.ring.zero())
    if pres.fraction_presented:
        tw = _Tower(pres)
        guard = prod_b
        for v in pres.adjoined:
            if not v.free:
                guard = guard * v.pin_den
        if not _colon_stable(base.defining, guard):
            raise ZeroDivisorParameter(
                "parameter or pin denominator is a zerodivisor in the base")
        # substitute the pinned fractions so the corrected class becomes
        # a single fraction e0/W over the free part of the tower
        e0, den0 = _defraction(pres, c)
        e0, Wb = _reduce_fraction(e0, Zb * den0)
        gw = e0 ** p - _lift(datum.u, ring0) * e0 * \
            _lift(Wb ** (p - 1), ring0)
        if not tw.is_zero(gw):
            raise ArithmeticError("corrected class fails its monic equation")
        pin = _lift(Zb, ring1) * T - _lift(c, ring1)
        seed = [_lift(g, ring1) for g in pres.relations.gens] + [g_rel, pin]
        pin2 = _lift(Wb, ring1) * T - _lift(e0, ring1)
        if pin2._key() != pin._key():
            seed.append(pin2)
        specs = []
        for i, v in enumerate(pres.adjoined):
            if not v.free:
                specs.append((base.ring.nvars + i,
                              _lift(v.pin_num, ring1), v.pin_den))
        specs.append((ring1.nvars - 1, _lift(e0, ring1), Wb))
        relations = _fraction_relations(pres, tw, specs, ring1, seed)
        var = replace(var, pin_num=e0, pin_den=Wb)
        return ring1, relations, var, c, svec
    rel0 = Ideal(ring0, pres.relations.canonical())
    prod = _lift(prod_b, ring0)
    if not _colon_stable(rel0, prod):
        raise ZeroDivisorParameter(
            "parameter product is a zerodivisor in the stage ring")
    u0 = _lift(datum.u, ring0)
    Z = _lift(Zb, ring0)
    # the corrected class must satisfy its monic equation in the localization
    gw = c ** p - u0 * c * Z ** (p - 1)
    if not rel0.saturate(prod).contains(gw):
        raise ArithmeticError("corrected class fails its monic equation")
    pin = _lift(Z, ring1) * T - _lift(c, ring1)
    gens1 = [_lift(g, ring1) for g in rel0.gens] + [g_rel, pin]
    sat = Ideal(ring1, gens1).saturate(_lift(prod, ring1))
    relations = Ideal(ring1, sat.canonical())
    var = replace(var, pin_num=c, pin_den=Zb)
    return ring1, relations, var, c, svec


# -- certificates -------------------------------------------------------------

def etale_certificate(pres: ExtensionPresentation, Q: Ideal) -> EtaleCertificate:
    """Per-variable unit-derivative witnesses at the prime Q.

    Each adjoined variable carries one monic relation; its own-variable
    derivative is a base ring element and must reduce to a nonzero
    normal form against Q."""
    wit = []
    for v in pres.adjoined:
        token = Q.nf(v.derivative)
        if token.is_zero():
            raise CertificateFailure(
                f"derivative for {v.name} vanishes at the avoided prime",
                relation=v.relation)
        wit.append((v.relation, v.derivative, token))
    return EtaleCertificate(prime=Q, witnesses=tuple(wit))


def _injectivity_certificate(pres: ExtensionPresentation) -> bool:
    """Eliminating the adjoined block must recover exactly (f)."""
    base = pres.base.ring
    nbase = base.nvars
    drop = list(range(nbase, pres.ring.nvars))
    if not drop:
        return True
    kept = pres.relations.eliminate(drop)
    back = [base.variable(i) for i in range(nbase)]
    back += [base.zero()] * (pres.ring.nvars - nbase)
    K = Ideal(base, [g.map(base, back) for g in kept])
    return K == pres.base.defining


# -- orchestration ------------------------------------------------------------

def _pinned_adjunction(pres, datum, entry, name, j, vdeg, h, Db):
    """Adjoin the stage variable pinned to its fraction field root.

    The monic stage relation has the root h/Db over the fraction field
    of the tower, so the stage ring splits and the linear branch is cut
    out by the pin Db V - h.  Quotienting onto that branch keeps the
    presented ring inside the fraction field of the (domain) tower,
    hence a domain, and keeps the base injective; the pin data rides on
    the variable so the final kernel can clear it."""
    ctx = datum.context
    p = pres.base.p
    ring1 = pres.ring.extend((name,), (vdeg,))
    T = ring1.variable(ring1.nvars - 1)
    g = T ** p - _lift(datum.u, ring1) * T
    fr = LocalizedFraction(entry.numerator, entry.denom)
    ftilde, _ = monicize(g, fr, ctx)
    ztilde = ctx.denominator(entry.denom)
    deriv_base = -(datum.u * ztilde ** (p - 1))
    h, Db = _reduce_fraction(h, Db)
    pin = _lift(Db, ring1) * T - _lift(h, ring1)
    gens1 = [_lift(r, ring1) for r in pres.relations.gens] + [ftilde, pin]
    var = AdjoinedVariable(name=name, weight=vdeg, relation=ftilde,
                           derivative=deriv_base, free=False, component=j,
                           tail=None, pin_num=h, pin_den=Db)
    pres2 = ExtensionPresentation(
        base=pres.base, ring=ring1, relations=Ideal(ring1, gens1),
        adjoined=pres.adjoined + (var,), witnesses=pres.witnesses,
        avoid=pres.avoid, killed=pres.killed, domain_mode=pres.domain_mode)
    return pres2, T, tuple(entry.denom), var


def _stage(pres, datum, entry, name, j, domain, state):
    """One coboundary entry: collapse to a ring element or adjoin a
    variable carrying the monicized relation.  Returns the beta-bar
    numerator, its denominator exponents, and the updated presentation.

    In domain mode the ladder is: an integral root collapses the entry
    in place; a missing root over the bare normal base proves the monic
    relation irreducible, so plain adjunction stays a domain; over a
    tower with exactly one free stage variable, that variable's
    constant-in-V derivative bounds the denominator of every fraction
    field root, so one complete search either pins the root as a new
    branch-cut variable or certifies the relation irreducible.  Pinned
    variables live inside the fraction field of the free part, so they
    never disturb either certificate."""
    ctx = datum.context
    d = ctx.d
    p = pres.base.p
    if entry.is_zero_literal():
        return pres, pres.ring.zero(), (0,) * d, None
    ztilde = ctx.denominator(entry.denom)
    zdeg = ztilde.degree()
    vdeg = datum.degree() + zdeg
    if domain:
        freevars = [v for v in pres.adjoined if v.free]
        c1b = datum.u * ztilde ** (p - 1)
        a1b = entry.numerator * ztilde ** (p - 1)
        # the tower search runs over the free part only; with pinned
        # variables present that misses some integral roots, which only
        # costs a collapse opportunity, never soundness
        h = _tower_root(pres, c1b, a1b, vdeg)
        if h is not None:
            state["collapsed"] += 1
            return pres, h, tuple(entry.denom), None
        if state["kind"] == "normal":
            # tower is still the base: a monic root in the fraction
            # field of a normal ring is integral hence inside the base,
            # and the search is complete there, so the miss certifies
            # the relation irreducible.  Its derivative now bounds the
            # denominators of fraction field roots at later stages.
            state["kind"] = "monogenic"
            state["D"] = -(datum.u * ztilde ** (p - 1))
        elif state["kind"] == "monogenic" and len(freevars) == 1:
            Db = state["D"]
            h = _tower_root(pres, c1b * Db ** (p - 1), a1b * Db ** p,
                            vdeg + Db.degree())
            if h is not None:
                state["deep"] += 1
                return _pinned_adjunction(pres, datum, entry, name, j,
                                          vdeg, h, Db)
            # complete miss over the fraction field: irreducible, so
            # the plain adjunction below stays a domain
        else:
            raise DomainSelectionFailure(
                "stage needs a new variable but the tower carries no "
                "domain certificate for a further adjunction")
    ring1 = pres.ring.extend((name,), (vdeg,))
    T = ring1.variable(ring1.nvars - 1)
    g = T ** p - _lift(datum.u, ring1) * T
    fr = LocalizedFraction(entry.numerator, entry.denom)
    ftilde, deriv = monicize(g, fr, ctx)
    deriv_base = -(datum.u * ztilde ** (p - 1))
    gens1 = [_lift(r, ring1) for r in pres.relations.gens] + [ftilde]
    var = AdjoinedVariable(name=name, weight=vdeg, relation=ftilde,
                           derivative=deriv_base, free=True, component=j,
                           tail=entry.numerator * ztilde ** (p - 1))
    pres2 = ExtensionPresentation(
        base=pres.base, ring=ring1, relations=Ideal(ring1, gens1),
        adjoined=pres.adjoined + (var,), witnesses=pres.witnesses,
        avoid=pres.avoid, killed=pres.killed, domain_mode=pres.domain_mode)
    return pres2, T, tuple(entry.denom), var


def build_extension(surface: Hypersurface, ideal: Ideal, domain: bool = False,
                    s_bound: Optional[int] = None, cap: Optional[int] = None,
                    hints=None) -> ExtensionPresentation:
    """Finite extension whose trace ideal equals the compatible ideal.

    Pipeline: enumerate the compatible primes not containing the ideal,
    choose shared parameters, and per positive-height component extract
    the socle datum, adjust its multiplier, solve the coboundary, clear
    the entries into monic stage relations, and pin the corrected class.
    Height-zero components contribute a quotient killing the branches
    away from the ideal.  With domain=True every stage must either
    collapse to a ring element or be certified irreducible, and the
    adjoined block is eliminated at the end to certify injectivity."""
    R = surface.ring
    if not is_fpure(surface):
        raise ValueError("the hypersurface is not F-pure")
    datum0 = FrobeniusDatum.fedder(surface)
    I = surface.ideal(list(ideal.gens))
    if not is_compatible(datum0, I):
        raise ValueError("the ideal is not compatible")
    if I.is_one():
        return ExtensionPresentation(base=surface, ring=R,
                                     relations=Ideal(R, [surface.f]))
    comps = sorted(minimal_primes(I, hints=hints), key=lambda q: q._key())
    Qs = [Q for Q in enumerate_compatible_primes(datum0, cap=cap)
          if not Q.contains_ideal(I)]
    heights = [component_height(surface, P) for P in comps]
    positive = [(P, h) for P, h in zip(comps, heights) if h > 0]
    zero = [P for P, h in zip(comps, heights) if h == 0]
    if domain:
        if not is_prime_certified(surface.defining):
            raise DomainSelectionFailure(
                "domain mode needs the base to be a certified domain")
        if zero:
            raise DomainSelectionFailure(
                "a domain extension cannot have zero trace along a "
                "minimal prime")
    params_all = choose_parameters(surface, comps, Qs)
    pres = ExtensionPresentation(base=surface, ring=R,
                                 relations=Ideal(R, [surface.f]),
                                 avoid=tuple(Qs), domain_mode=domain)
    state = {"kind": "plain", "D": None, "collapsed": 0, "deep": 0}
    if domain:
        state["kind"] = "normal" if _normal_certified(pres) else "opaque"
    records = []
    for j, (P, h) in enumerate(positive):
        params = params_all[:h]
        sd = socle_datum(surface, P, params, s_bound=s_bound)
        sd = adjust_u(sd, comps, Qs)
        p = surface.p
        beta = solve_coboundary([(p, R.one()), (1, -sd.u)], sd.alpha,
                                s_bound=s_bound)
        d = sd.context.d
        nums, ss = [], []
        for i in range(d):
            sub = tuple(t for t in range(d) if t != i)
            entry = beta.entry(sub)
            tag = f"T_{j + 1}_{i + 1}"
            pres, num, s_i, _ = _stage(pres, sd, entry, tag, j, domain,
                                       state)
            nums.append(num)
            ss.append(s_i)
        nums = [_lift(n, pres.ring) for n in nums]
        root = "T" if len(positive) == 1 else f"T_{j + 1}"
        bbar = LiftedCochain(nums=tuple(nums), ss=tuple(ss))
        ring1, relations, var, c, s_star = adjoin_root(pres, sd, bbar, root)
        var = replace(var, component=j)
        pres = ExtensionPresentation(
            base=surface, ring=ring1, relations=relations,
            adjoined=pres.adjoined + (var,), witnesses=pres.witnesses,
            avoid=pres.avoid, killed=pres.killed, domain_mode=domain)
        top = sd.alpha.entries[0]
        records.append((P, params, sd.u, top.numerator,
                        tuple(top.denom), c, s_star, root))
    if zero:
        branches = minimal_primes(surface.defining)
        keep = [b for b in branches if not any(b == P for P in comps)]
        if keep:
            C = keep[0]
            for b in keep[1:]:
                C = C.intersect(b)
        else:
            C = Ideal(R, [R.one()])
        gens = list(pres.relations.gens) + [_lift(g, pres.ring)
                                            for g in C.gens]
        pres = ExtensionPresentation(
            base=surface, ring=pres.ring,
            relations=Ideal(pres.ring, gens), adjoined=pres.adjoined,
            witnesses=pres.witnesses, avoid=pres.avoid, killed=C,
            domain_mode=domain)
    # refresh every stored polynomial into the final ring
    final = pres.ring
    adjoined = tuple(
        replace(v, relation=_lift(v.relation, final),
                pin_num=None if v.pin_num is None
                else _lift(v.pin_num, final))
        for v in pres.adjoined)
    witnesses = tuple(ComponentWitness(prime=P, params=params, u=u,
                                       alpha_num=anum, alpha_s=asd,
                                       w_num=_lift(c, final), w_s=sstar,
                                       root=root)
                      for P, params, u, anum, asd, c, sstar, root in records)
    pres = ExtensionPresentation(
        base=surface, ring=final, relations=pres.relations,
        adjoined=adjoined, witnesses=witnesses, avoid=pres.avoid,
        killed=pres.killed, domain_mode=domain)
    pres.certificates = tuple(etale_certificate(pres, Q) for Q in Qs)
    if domain:
        # the construction keeps S inside the fraction field of the
        # free tower, but the certificate of record is the elimination:
        # the contraction of the relations to the base must be (f)
        if _injectivity_certificate(pres):
            pres.injective_certified = True
        else:
            raise DomainSelectionFailure(
                "eliminating the adjoined block does not recover the "
                "defining equation; the extension is not injective")
    return pres
