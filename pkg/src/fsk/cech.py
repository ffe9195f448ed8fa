"""Cech complexes on a system of parameters and graded local cohomology.

Classes of the top local cohomology module H^d_P(R) are represented as
fractions a / (z_1 ... z_d)^s over a hypersurface R.  The module computes
graded strands of H^d by stabilizing the quotients R / ((z_i^s) + J) as s
grows, extracts the socle generator and the Frobenius multiplier u with
class(alpha^p) = u * class(alpha), and solves coboundary equations
g(alpha) = d(beta) one level down.  Everything is certified by exact
ideal membership; no floating point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .compatible import avoidance_element
from .ideals import Hypersurface, Ideal
from .ring import Polynomial, monomials_of_degree


class SocleNotOneDimensional(Exception):
    pass


class NoUSolution(Exception):
    """The socle class has no Frobenius eigen-equation; F-injectivity
    fails along this component and no splitting section can exist."""


class SBoundExceeded(Exception):
    pass


ITER_DOUBLINGS = 16


@dataclass(frozen=True)
class CechContext:
    """A hypersurface together with an ordered system of parameters.

    The parameters must be homogeneous and cut the dimension down by one
    each (checked in sop_certified); over the Cohen-Macaulay hypersurface
    that makes them a regular sequence, which is what turns ideal
    membership into an exact zero test for cohomology classes.
    """

    surface: Hypersurface
    params: tuple

    def __post_init__(self):
        for z in self.params:
            if z.is_zero() or not z.is_homogeneous():
                raise ValueError("parameters must be nonzero homogeneous forms")

    @property
    def ring(self):
        return self.surface.ring

    @property
    def d(self) -> int:
        return len(self.params)

    def denominator(self, exps) -> Polynomial:
        out = self.ring.one()
        for z, e in zip(self.params, exps):
            if e:
                out = out * z ** int(e)
        return out

    def param_degrees(self):
        return [z.degree() for z in self.params]

    def sop_certified(self) -> bool:
        big = self.surface.ideal([z for z in self.params])
        return big.dimension() == self.surface.dimension() - self.d

    def membership_ideal(self, s: int, sat_by: Optional[Polynomial] = None) -> Ideal:
        """(z_1^s, ..., z_d^s) + J, optionally saturated by sat_by for
        membership localized away from the other components."""
        out = Ideal(self.ring, [z ** s for z in self.params] + [self.surface.f])
        if sat_by is not None:
            out = out.saturate(sat_by)
        return out


@dataclass(frozen=True)
class LocalizedFraction:
    """numerator / prod(params_i ^ denom[i]); denom is per-parameter."""

    numerator: Polynomial
    denom: tuple

    def support(self):
        return tuple(i for i, e in enumerate(self.denom) if e)

    def is_zero_literal(self) -> bool:
        return self.numerator.is_zero()

    def shift(self, extra) -> "LocalizedFraction":
        """Rewrite with denominator exponents raised by extra >= 0."""
        num = self.numerator
        ring = num.ring
        return LocalizedFraction(num, tuple(int(a + b) for a, b in zip(self.denom, extra)))


def _frac_scale(ctx: CechContext, fr: LocalizedFraction, target) -> Polynomial:
    """Numerator of fr rewritten over denominator exponents target."""
    extra = [int(t - e) for t, e in zip(target, fr.denom)]
    if any(e < 0 for e in extra):
        raise ValueError("target denominator too small")
    return fr.numerator * ctx.denominator(extra)


def frac_add(ctx: CechContext, a: LocalizedFraction, b: LocalizedFraction) -> LocalizedFraction:
    tgt = tuple(max(x, y) for x, y in zip(a.denom, b.denom))
    return LocalizedFraction(_frac_scale(ctx, a, tgt) + _frac_scale(ctx, b, tgt), tgt)


def frac_neg(fr: LocalizedFraction) -> LocalizedFraction:
    return LocalizedFraction(-fr.numerator, fr.denom)


def frac_mul_poly(fr: LocalizedFraction, g: Polynomial) -> LocalizedFraction:
    return LocalizedFraction(fr.numerator * g, fr.denom)


def frac_equal(ctx: CechContext, a: LocalizedFraction, b: LocalizedFraction) -> bool:
    """Equality in the localization R_W, W generated by the parameters.

    a/za = b/zb iff the cross difference lands in J : (prod params)^inf.
    """
    tgt = tuple(max(x, y) for x, y in zip(a.denom, b.denom))
    diff = _frac_scale(ctx, a, tgt) - _frac_scale(ctx, b, tgt)
    if diff.is_zero():
        return True
    sat = ctx.surface.defining
    for z in ctx.params:
        sat = sat.saturate(z)
    return sat.contains(diff)


class CechCochain:
    """Degree-t cochain: one localized fraction per size-t subset of the
    parameters, subsets enumerated in lexicographic order."""

    def __init__(self, ctx: CechContext, level: int, entries):
        self.ctx = ctx
        self.level = int(level)
        self.subsets = list(itertools.combinations(range(ctx.d), self.level))
        entries = list(entries)
        if len(entries) != len(self.subsets):
            raise ValueError("cochain needs one entry per subset")
        fixed = []
        for S, fr in zip(self.subsets, entries):
            bad = [i for i in fr.support() if i not in S]
            if bad:
                raise ValueError("denominator uses parameters outside the subset")
            fixed.append(fr)
        self.entries = fixed

    @classmethod
    def zero(cls, ctx: CechContext, level: int) -> "CechCochain":
        z = LocalizedFraction(ctx.ring.zero(), (0,) * ctx.d)
        n = len(list(itertools.combinations(range(ctx.d), level)))
        return cls(ctx, level, [z] * n)

    @classmethod
    def top(cls, ctx: CechContext, numerator: Polynomial, s: int) -> "CechCochain":
        return cls(ctx, ctx.d, [LocalizedFraction(numerator, (int(s),) * ctx.d)])

    def entry(self, subset) -> LocalizedFraction:
        return self.entries[self.subsets.index(tuple(subset))]

    def __add__(self, other: "CechCochain") -> "CechCochain":
        if self.level != other.level:
            raise ValueError("level mismatch")
        return CechCochain(self.ctx, self.level,
                           [frac_add(self.ctx, a, b)
                            for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "CechCochain":
        return CechCochain(self.ctx, self.level, [frac_neg(e) for e in self.entries])

    def __sub__(self, other: "CechCochain") -> "CechCochain":
        return self + (-other)

    def scale(self, g: Polynomial) -> "CechCochain":
        return CechCochain(self.ctx, self.level,
                           [frac_mul_poly(e, g) for e in self.entries])

    def is_zero_literal(self) -> bool:
        return all(e.is_zero_literal() for e in self.entries)

    def __repr__(self):
        bits = []
        for S, fr in zip(self.subsets, self.entries):
            if fr.is_zero_literal():
                continue
            den = "*".join(f"({self.ctx.params[i]})^{fr.denom[i]}"
                           for i in S if fr.denom[i])
            bits.append(f"[{S}] ({fr.numerator})/{den or '1'}")
        return "CechCochain(level=%d, %s)" % (self.level, "; ".join(bits) or "0")


def cech_differential(c: CechCochain) -> CechCochain:
    """(dc)_S = sum over i in S of (-1)^{pos(i in S)} c_{S minus i}."""
    ctx = c.ctx
    if c.level >= ctx.d:
        raise ValueError("top cochains have no differential")
    out = []
    for S in itertools.combinations(range(ctx.d), c.level + 1):
        acc = LocalizedFraction(ctx.ring.zero(), (0,) * ctx.d)
        for pos, i in enumerate(S):
            sub = tuple(j for j in S if j != i)
            fr = c.entry(sub)
            if pos % 2:
                fr = frac_neg(fr)
            acc = frac_add(ctx, acc, fr)
        out.append(acc)
    return CechCochain(ctx, c.level + 1, out)


def class_is_zero(c: CechCochain, slack: int = 0,
                  sat_by: Optional[Polynomial] = None) -> bool:
    """Is the class of the top cochain c zero in H^d?

    Over the base hypersurface the parameters form a regular sequence, so
    the colimit maps are injective and membership of the numerator in
    (z_1^s, ..., z_d^s) + J at the matching exponent is exact.  A
    positive slack retries at larger exponents; membership at any
    exponent always implies the class is zero, so the slack direction is
    sound.  sat_by localizes the membership test away from components
    not containing the element (non-maximal supports).
    """
    ctx = c.ctx
    if c.level != ctx.d:
        raise ValueError("class test expects a top-level cochain")
    fr = c.entries[0]
    s = max([int(e) for e in fr.denom] + [0])
    num = _frac_scale(ctx, fr, (s,) * ctx.d)
    if num.is_zero():
        return True
    for k in range(slack + 1):
        if ctx.membership_ideal(s + k, sat_by=sat_by).contains(num):
            return True
        num = num * ctx.denominator((1,) * ctx.d)
    return False


@dataclass(frozen=True)
class GradedStrand:
    """One graded piece of H^d_P(R): classes m / (z_1...z_d)^s.

    basis holds printable labels, reps the numerator exponent rows, and
    boundary the matrix expressing every ambient monomial of the ambient
    degree in terms of the basis (columns aligned with ambient_rows).
    """

    degree: int
    s: int
    dim: int
    basis: tuple
    reps: np.ndarray
    ambient_rows: np.ndarray
    boundary: np.ndarray


class _StrandSpace:
    """Coordinates on [R / ((z_i^s) + J sat)]_D for numerators at
    denominator exponent s and cohomological degree D - s*sum(deg z)."""

    def __init__(self, ctx: CechContext, s: int, degree: int,
                 sat_by: Optional[Polynomial] = None):
        self.ctx = ctx
        self.s = int(s)
        self.degree = int(degree)
        self.ideal = ctx.membership_ideal(self.s, sat_by=sat_by)
        self.basisobj = self.ideal.basis()
        self.numdeg = self.degree + self.s * sum(ctx.param_degrees())
        ring = ctx.ring
        if self.numdeg < 0:
            self.rows = np.zeros((0, ring.nvars), np.int64)
        else:
            self.rows = monomials_of_degree(ring, self.numdeg)
        std = []
        for row in self.rows:
            m = ring.from_terms(row.reshape(1, -1), np.array([1], np.int64))
            if self.ideal.nf(m)._key() == m._key():
                std.append(row)
        self.std = (np.array(std, np.int64) if std
                    else np.zeros((0, ring.nvars), np.int64))
        self._index = {tuple(r): i for i, r in enumerate(self.std)}

    @property
    def dim(self) -> int:
        return len(self.std)

    def coords(self, g: Polynomial) -> np.ndarray:
        """Coordinates of the class of g in the standard-monomial basis."""
        v = np.zeros(self.dim, np.int64)
        if g.is_zero():
            return v
        r = self.ideal.nf(g)
        for row, c in zip(r.exps, r.coeffs):
            idx = self._index.get(tuple(row))
            if idx is None:
                raise ArithmeticError("normal form left the graded piece")
            v[idx] = int(c)
        return v

    def monomial(self, i: int) -> Polynomial:
        return self.ctx.ring.from_terms(self.std[i].reshape(1, -1),
                                        np.array([1], np.int64))

    def label(self, i: int) -> str:
        den = "*".join(str(z) for z in self.ctx.params)
        return f"({self.monomial(i)})/({den})^{self.s}"

    def strand(self) -> GradedStrand:
        bnd = np.zeros((self.dim, len(self.rows)), np.int64)
        ring = self.ctx.ring
        for j, row in enumerate(self.rows):
            m = ring.from_terms(row.reshape(1, -1), np.array([1], np.int64))
            bnd[:, j] = self.coords(m)
        return GradedStrand(
            degree=self.degree, s=self.s, dim=self.dim,
            basis=tuple(self.label(i) for i in range(self.dim)),
            reps=self.std.copy(), ambient_rows=self.rows.copy(), boundary=bnd)


def _stabilized_space(ctx: CechContext, degree: int, s_bound: Optional[int] = None,
                      sat_by: Optional[Polynomial] = None) -> _StrandSpace:
    """Double s until two consecutive quotient dimensions agree."""
    p = ctx.ring.p
    s = p
    cap = int(s_bound) if s_bound else p ** 3
    prev = _StrandSpace(ctx, s, degree, sat_by=sat_by)
    for _ in range(ITER_DOUBLINGS):
        if 2 * s > cap:
            raise SBoundExceeded(
                f"strand dimensions did not stabilize below s = {cap}; "
                "retry with a larger s_bound")
        nxt = _StrandSpace(ctx, 2 * s, degree, sat_by=sat_by)
        if nxt.dim == prev.dim:
            return prev
        s, prev = 2 * s, nxt
    raise SBoundExceeded("strand stabilization iteration cap hit")


def strand_cohomology(ctx: CechContext, degree: int,
                      s_bound: Optional[int] = None,
                      sat_by: Optional[Polynomial] = None) -> GradedStrand:
    """Stabilized graded strand of H^d_(params)(R) in one degree."""
    if not ctx.sop_certified():
        raise ValueError("parameters are not a certified system of parameters")
    return _stabilized_space(ctx, degree, s_bound, sat_by=sat_by).strand()


@dataclass(frozen=True)
class SocleDatum:
    """Socle generator of the top local cohomology along one component.

    Invariants certified at construction: class(alpha) != 0,
    prime * class(alpha) = 0, and class(alpha^p) = u * class(alpha) with
    u homogeneous of degree (p - 1) * deg(alpha).
    """

    prime: Ideal
    height: int
    params: tuple
    alpha: CechCochain
    u: Polynomial

    @property
    def context(self) -> CechContext:
        return self.alpha.ctx

    def degree(self) -> int:
        fr = self.alpha.entries[0]
        ctx = self.alpha.ctx
        return fr.numerator.degree() - sum(
            int(e) * z.degree() for z, e in zip(ctx.params, fr.denom))

    def frobenius_residue(self) -> CechCochain:
        """alpha^p - u*alpha as a top cochain (class must be zero)."""
        ctx = self.alpha.ctx
        fr = self.alpha.entries[0]
        s = max(int(e) for e in fr.denom)
        a = _frac_scale(ctx, fr, (s,) * ctx.d)
        p = ctx.ring.p
        numer = a ** p - self.u * a * ctx.denominator(((p - 1) * s,) * ctx.d)
        return CechCochain(ctx, ctx.d,
                           [LocalizedFraction(numer, (p * s,) * ctx.d)])

    def certify(self, sat_by: Optional[Polynomial] = None) -> bool:
        if class_is_zero(self.alpha, sat_by=sat_by):
            return False
        for g in self.prime.canonical():
            if not class_is_zero(self.alpha.scale(g), sat_by=sat_by):
                return False
        return class_is_zero(self.frobenius_residue(), sat_by=sat_by)


def _descending_rows(rows: np.ndarray) -> np.ndarray:
    from ._kernels import sort_perm
    if len(rows) <= 1:
        return rows
    return rows[sort_perm(rows, 0, np.zeros(1, np.int64), 0, descending=True)]


def _minimal_representative(ctx: CechContext, space: "_StrandSpace",
                            target: np.ndarray):
    """Fraction a'/(prod z)^{s'} with smallest s' in the class of target.

    Candidate numerators run over ambient monomials in descending term
    order; the linear solve zeroes free variables, so the representative
    supported on the largest monomials is picked deterministically.
    """
    ring = ctx.ring
    wsum = sum(ctx.param_degrees())
    for sp in range(1, space.s):
        numdeg = space.degree + sp * wsum
        if numdeg < 0:
            continue
        rows = _descending_rows(monomials_of_degree(ring, numdeg))
        if len(rows) == 0:
            continue
        scale = ctx.denominator((space.s - sp,) * ctx.d)
        cols = []
        for row in rows:
            m = ring.from_terms(row.reshape(1, -1), np.array([1], np.int64))
            cols.append(space.coords(m * scale))
        A = np.array(cols, np.int64).T
        sol = linalg.solve(A, target, ring.p)
        if sol is None:
            continue
        num = ring.zero()
        for c, row in zip(sol, rows):
            if c:
                num = num + ring.from_terms(row.reshape(1, -1),
                                            np.array([int(c)], np.int64))
        if not num.is_zero():
            return num, sp
    return None


def _localizing_element(ctx: CechContext, prime: Ideal) -> Optional[Polynomial]:
    """Element h outside P but inside every other minimal prime of
    (params) + J; saturating memberships by h localizes them at P."""
    from .primes import minimal_primes

    base = ctx.membership_ideal(1)
    comps = minimal_primes(base)
    others = [Q for Q in comps if not prime.contains_ideal(Q)]
    if not others:
        return None
    pool = []
    for Q in others:
        pool.extend(Q.gens)
    h = avoidance_element(ctx.ring, [g for g in pool if not g.is_zero()], [prime])
    if h is None:
        # product of one generator from each unwanted component
        h = ctx.ring.one()
        for Q in others:
            pick = next(g for g in Q.gens if not prime.contains(g))
            h = h * pick
    return h


def _sop_certified_at(ctx: CechContext, prime: Ideal) -> bool:
    """Params cut codimension d at the component P: every minimal prime
    of (params) + J lying inside P has dimension dim R - d."""
    from .primes import minimal_primes

    want = ctx.surface.dimension() - ctx.d
    through = [Q for Q in minimal_primes(ctx.membership_ideal(1))
               if prime.contains_ideal(Q)]
    if not through:
        return False
    return all(Q.dimension() == want for Q in through)


def socle_datum(surface: Hypersurface, prime: Ideal, params,
                s_bound: Optional[int] = None) -> SocleDatum:
    """Socle class and Frobenius multiplier of H^d_P(R) along P.

    P must be homogeneous; params a system of parameters for P of length
    height(P).  alpha spans the joint kernel of multiplication by the
    generators of P on the socle-degree strand; u is solved linearly from
    class(alpha^p) = u class(alpha).
    """
    ring = surface.ring
    p = ring.p
    if not prime.is_homogeneous():
        raise ValueError("component prime is not homogeneous; unsupported")
    ctx = CechContext(surface, tuple(params))
    height = ctx.d

    maximal = prime == surface.maximal_ideal()
    sat_by = None
    if maximal:
        if not ctx.sop_certified():
            raise ValueError("parameters are not a system of parameters")
        # graded dual of a quasi-Gorenstein hypersurface: socle sits in
        # degree a(R) = deg f - sum of the variable weights
        a_inv = surface.f.degree() - sum(ring.weights)
    else:
        if not _sop_certified_at(ctx, prime):
            raise ValueError(
                "parameters are not a system of parameters at the component")
        sat_by = _localizing_element(ctx, prime)
        a_inv = surface.f.degree() - sum(ctx.param_degrees())

    space = _stabilized_space(ctx, a_inv, s_bound, sat_by=sat_by)
    if space.dim == 0:
        raise SocleNotOneDimensional(
            "socle strand is empty; component carries no socle class")

    pgens = [g for g in prime.canonical() if not g.is_zero()]
    blocks = []
    for g in pgens:
        tgt = _StrandSpace(ctx, space.s, a_inv + g.degree(), sat_by=sat_by)
        M = np.zeros((tgt.dim, space.dim), np.int64)
        for j in range(space.dim):
            M[:, j] = tgt.coords(g * space.monomial(j))
        blocks.append(M)
    stacked = (np.vstack(blocks) if blocks
               else np.zeros((0, space.dim), np.int64))
    ker = linalg.nullspace(stacked, p)
    if ker.shape[0] != 1:
        raise SocleNotOneDimensional(
            f"joint kernel of the component generators has dimension "
            f"{ker.shape[0]}, expected 1")
    vec = ker[0]
    anum = ring.zero()
    for i, c in enumerate(vec):
        if c:
            anum = anum + space.monomial(i) * int(c)

    # class(alpha^p) = u class(alpha): u homogeneous of degree (p-1)*deg(alpha)
    udeg = (p - 1) * a_inv
    if udeg < 0:
        raise NoUSolution("socle lives in positive degree; no homogeneous u")
    big = _StrandSpace(ctx, p * space.s, p * a_inv, sat_by=sat_by)
    target = big.coords(anum ** p)
    umonos = monomials_of_degree(ring, udeg)
    cols = []
    scale = ctx.denominator(((p - 1) * space.s,) * ctx.d)
    for row in umonos:
        m = ring.from_terms(row.reshape(1, -1), np.array([1], np.int64))
        cols.append(big.coords(m * anum * scale))
    A = (np.array(cols, np.int64).T if cols
         else np.zeros((big.dim, 0), np.int64))
    sol = linalg.solve(A, target, p)
    if sol is None:
        raise NoUSolution(
            "no homogeneous u with class(alpha^p) = u class(alpha); "
            "F-injectivity fails along this component")
    u = ring.zero()
    for c, row in zip(sol, umonos):
        if c:
            u = u + ring.from_terms(row.reshape(1, -1), np.array([int(c)], np.int64))

    # prefer the smallest-denominator representative of the class; the
    # eigen-equation is a statement about the class, so it survives
    mini = _minimal_representative(ctx, space, vec)
    if mini is not None:
        anum, srep = mini
    else:
        srep = space.s
    alpha = CechCochain.top(ctx, anum, srep)

    datum = SocleDatum(prime=prime, height=height,
                       params=tuple(ctx.params), alpha=alpha, u=u)
    if not datum.certify(sat_by=sat_by):
        raise ArithmeticError("socle datum failed certification")
    return datum


def adjust_u(datum: SocleDatum, components, avoid) -> SocleDatum:
    """Replace u by u' = u + a with a in the intersection of all
    component primes (so a * alpha has zero class and the eigen-equation
    survives) chosen so that u' lies outside every prime in avoid."""
    ring = datum.prime.ring
    hit = [Q for Q in avoid if Q.contains(datum.u)]
    if not hit:
        return datum
    # Only the maximal members of the avoid family matter: staying out of
    # them stays out of everything below, and keeping a smaller avoided
    # prime in the intersection could trap it inside a hit prime.
    maximal = [Q for Q in avoid
               if not any(R is not Q and R != Q and R.contains_ideal(Q)
                          for R in avoid)]
    hit_max = [Q for Q in maximal if Q.contains(datum.u)]
    K = None
    for P in components:
        K = P if K is None else K.intersect(P)
    for Q in maximal:
        if not Q.contains(datum.u):
            K = K.intersect(Q) if K is not None else Q
    if K is None:
        raise ValueError("nothing to intersect; no components given")
    a = avoidance_element(ring, [g for g in K.gens if not g.is_zero()], hit_max)
    if a is None:
        raise ArithmeticError(
            "prime avoidance failed while adjusting u; "
            "the compatible decomposition is inconsistent")
    unew = datum.u + a
    for Q in avoid:
        if Q.contains(unew):
            raise ArithmeticError("adjusted u still lies in an avoided prime")
    out = SocleDatum(prime=datum.prime, height=datum.height,
                     params=datum.params, alpha=datum.alpha, u=unew)
    if not out.certify():
        raise ArithmeticError("adjusted socle datum failed certification")
    return out


def solve_coboundary(g_terms, alpha: CechCochain,
                     s_bound: Optional[int] = None) -> CechCochain:
    """Find beta one level down with d(beta) = g(alpha).

    g is a one-variable additive polynomial over R given as a list of
    (exponent, coefficient) pairs; for splitting work it is
    T^p - u T.  The solve runs denominator exponents s' upward, writing
    N = sum_i (-1)^i b_i z_i^{s'} + C f as an F_p-linear system on the
    monomial coefficients of the b_i and C, and checks the result
    symbolically before returning.
    """
    ctx = alpha.ctx
    ring = ctx.ring
    d = ctx.d
    fr = alpha.entries[0]
    s = max([int(e) for e in fr.denom] + [1])
    a = _frac_scale(ctx, fr, (s,) * ctx.d)

    # g(alpha) as a single fraction N / (prod z)^t
    t = max(int(k) * s for k, _ in g_terms)
    N = ring.zero()
    for k, coef in g_terms:
        coef = coef if isinstance(coef, Polynomial) else ring.const(coef)
        N = N + coef * a ** int(k) * ctx.denominator(((t - int(k) * s),) * d)
    N = ctx.surface.reduce(N)
    if N.is_zero():
        return CechCochain.zero(ctx, d - 1)

    f = ctx.surface.f
    cap = int(s_bound) if s_bound else max(ring.p ** 3, 4 * t)
    wsum = sum(ctx.param_degrees())
    for sp in range(t, cap + 1):
        scaled = N * ctx.denominator((sp - t,) * d)
        DT = scaled.degree()
        if DT < 0:
            return CechCochain.zero(ctx, d - 1)
        # unknown blocks: b_i of degree DT - sp*deg(z_i), C of degree DT - deg f
        blocks = []
        cols = []
        for i in range(d):
            bd = DT - sp * ctx.params[i].degree()
            rows = (monomials_of_degree(ring, bd) if bd >= 0
                    else np.zeros((0, ring.nvars), np.int64))
            blocks.append(("b", i, rows))
        cd = DT - f.degree()
        crows = (monomials_of_degree(ring, cd) if cd >= 0
                 else np.zeros((0, ring.nvars), np.int64))
        blocks.append(("c", -1, crows))

        # coordinates on ambient monomials of degree DT
        amb = monomials_of_degree(ring, DT)
        index = {tuple(r): j for j, r in enumerate(amb)}

        def coordvec(poly):
            v = np.zeros(len(amb), np.int64)
            for row, c in zip(poly.exps, poly.coeffs):
                v[index[tuple(row)]] = int(c)
            return v

        for kind, i, rows in blocks:
            for row in rows:
                m = ring.from_terms(row.reshape(1, -1), np.array([1], np.int64))
                if kind == "b":
                    sign = 1 if i % 2 == 0 else ring.p - 1
                    gpoly = m * ctx.params[i] ** sp * int(sign)
                else:
                    gpoly = m * f
                cols.append(coordvec(gpoly))
        A = (np.array(cols, np.int64).T if cols
             else np.zeros((len(amb), 0), np.int64))
        sol = linalg.solve(A, coordvec(scaled), ring.p)
        if sol is None:
            continue
        # assemble beta: entry for subset missing parameter i
        entries = []
        off = 0
        parts = []
        for kind, i, rows in blocks:
            take = sol[off:off + len(rows)]
            off += len(rows)
            if kind == "c":
                continue
            b = ring.zero()
            for c, row in zip(take, rows):
                if c:
                    b = b + ring.from_terms(row.reshape(1, -1),
                                            np.array([int(c)], np.int64))
            parts.append((i, b))
        for sub in itertools.combinations(range(d), d - 1):
            miss = next(j for j in range(d) if j not in sub)
            b = dict(parts)[miss]
            den = tuple(sp if j in sub else 0 for j in range(d))
            entries.append(LocalizedFraction(b, den))
        beta = CechCochain(ctx, d - 1, entries)
        lhs = cech_differential(beta)
        target = CechCochain(ctx, d, [LocalizedFraction(N, (t,) * d)])
        if frac_equal(ctx, lhs.entries[0], target.entries[0]):
            return beta
        # linear solve passed but symbolic check failed: inflate and retry
    raise SBoundExceeded(
        f"no coboundary found below denominator exponent {cap}; "
        "retry with a larger s_bound")
