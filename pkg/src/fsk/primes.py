"""Minimal primes of an ideal, by certified special-case strategies.

Handled shapes: monomial ideals (minimal variable covers), ideals cut by
degree <= 1 polynomials, ideals with a generator solvable for one
variable (substitute and recurse in fewer variables), principal ideals
whose generator is univariate or homogeneous (exhaustive bounded divisor
search, so irreducibility comes with a certificate), and
zero-dimensional ideals (radical via squarefree eliminants, then a
primitive linear form and univariate factorization).  User-supplied
hint decompositions are accepted only
after verification: containment, equal radical, and certified primality
of every component.  Anything else raises DecompositionUnavailable
rather than guessing.
"""

import itertools

import numpy as np

from . import univar as uv
from .ideals import Ideal, divide_exact
from .linalg import solve
from .ring import PolyRing, Polynomial, monomials_of_degree

DIVISOR_BUDGET = 10 ** 6
PRIMITIVE_TRIES = 5000


class DecompositionUnavailable(Exception):
    """No certified strategy applies to the requested decomposition."""


def minimal_primes(ideal: Ideal, hints=None):
    """Minimal primes over ideal, each as a reduced-basis Ideal."""
    if ideal.is_one():
        return []
    gb = ideal.canonical()
    if not gb:
        return [ideal]
    if all(g.is_monomial() for g in gb):
        return _monomial_primes(ideal)
    if all(g.degree() <= 1 for g in gb):
        return [Ideal(ideal.ring, gb)]
    pick = _solvable_linear(gb)
    if pick is not None:
        return _substitution_primes(ideal, *pick)
    if len(gb) == 1:
        return _principal_primes(ideal.ring, gb[0])
    if ideal.dimension() == 0:
        return _zero_dim_primes(ideal)
    if hints:
        return _verified_hints(ideal, hints)
    raise DecompositionUnavailable(
        "no certified decomposition strategy applies; supply hints")


def is_prime_certified(ideal: Ideal) -> bool:
    """True/False when primality is certifiable, else raises."""
    if ideal.is_one():
        return False
    comps = minimal_primes(ideal)
    return len(comps) == 1 and comps[0] == Ideal(ideal.ring, ideal.canonical())


# -- linear substitution ---------------------------------------------------

def _solvable_linear(gb):
    """Generator of the form c*x_i + h with h free of x_i; the variety is
    then the graph of a function over the other variables."""
    for g in gb:
        for i in range(g.ring.nvars):
            col = g.exps[:, i]
            hits = np.nonzero(col)[0]
            if len(hits) != 1 or col[hits[0]] != 1:
                continue
            if g.exps[hits[0]].sum() != 1:
                continue
            return g, i, int(hits[0])
    return None


def _substitution_primes(ideal: Ideal, g: Polynomial, i: int, row: int):
    ring = ideal.ring
    c = int(g.coeffs[row])
    cinv = pow(c, ring.p - 2, ring.p)
    h = g - ring.monomial(g.exps[row], c)
    image = -(h * cinv)
    key = g._key()
    rest = [q.subs({i: image}) for q in ideal.canonical() if q._key() != key]
    rest = [q for q in rest if not q.is_zero()]
    if not rest:
        return [Ideal(ring, [g])]
    keep = [nm for j, nm in enumerate(ring.names) if j != i]
    small = ring.drop_to(keep)
    down_images = [small.variable(keep.index(nm)) if nm in keep
                   else small.zero() for nm in ring.names]
    down = [q.map(small, down_images) for q in rest]
    lift = [ring.variable(ring.var_index(nm)) for nm in keep]
    out = []
    for comp in minimal_primes(Ideal(small, down)):
        gens = [q.map(ring, lift) for q in comp.gens] + [g]
        out.append(Ideal(ring, gens))
    # the substitution is an isomorphism onto the graph, so components
    # stay distinct and incomparable
    return sorted(out, key=lambda q: q._key())


# -- monomial ideals -----------------------------------------------------

def _monomial_primes(ideal: Ideal):
    ring = ideal.ring
    supports = [frozenset(np.nonzero(g.exps[0])[0].tolist())
                for g in ideal.canonical()]
    n = ring.nvars
    covers = []
    for size in range(0, n + 1):
        for sub in itertools.combinations(range(n), size):
            s = set(sub)
            if any(c <= s for c in covers):
                continue
            if all(s & sup for sup in supports):
                covers.append(s)
    out = [Ideal(ring, [ring.variable(i) for i in sorted(c)]) for c in covers]
    return sorted(out, key=lambda q: q._key())


# -- principal ideals ----------------------------------------------------

def _univariate_in(g: Polynomial):
    used = [i for i in range(g.ring.nvars) if g.uses(i)]
    return used[0] if len(used) == 1 else None


def _principal_primes(ring: PolyRing, g: Polynomial):
    factors = factor_polynomial(g)
    out = []
    seen = set()
    for f, _ in factors:
        ideal = Ideal(ring, [f])
        if ideal._key() not in seen:
            seen.add(ideal._key())
            out.append(ideal)
    return sorted(out, key=lambda q: q._key())


def factor_polynomial(g: Polynomial):
    """Irreducible factorization [(factor, mult)] of univariate or
    homogeneous g, by certified search; raises otherwise."""
    ring = g.ring
    if g.is_zero():
        raise ValueError("cannot factor zero")
    i = _univariate_in(g)
    if i is not None:
        coeffs = np.zeros(g.degree_in(i) + 1, np.int64)
        coeffs[g.exps[:, i]] = g.coeffs
        out = []
        for f, m in uv.factor(coeffs, ring.p):
            e = np.zeros((len(f), ring.nvars), np.int64)
            e[:, i] = np.arange(len(f))
            out.append((ring.from_terms(e, f).monic(), m))
        return out
    if not g.is_homogeneous():
        raise DecompositionUnavailable(
            "factorization implemented only for univariate or homogeneous input")
    return _homogeneous_factor(g.monic())


def _homogeneous_factor(g: Polynomial):
    """Exhaustive divisor search up to half degree; certificate by
    exhaustion.  Weighted-homogeneous divisors of a weighted-homogeneous
    polynomial suffice because homogeneous polynomials only have
    homogeneous factors."""
    ring = g.ring
    d = g.degree()
    if d <= 0:
        raise ValueError("constant polynomial")
    budget = DIVISOR_BUDGET
    for k in range(1, d // 2 + 1):
        monos = monomials_of_degree(ring, k)
        m = len(monos)
        if m == 0:
            continue
        # candidates: unit-normalized = leading (grevlex-largest) coeff 1
        budget -= (ring.p ** m - 1) // (ring.p - 1)
        if budget < 0:
            raise DecompositionUnavailable(
                "homogeneous divisor search exceeds budget")
        for cand in _normalized_candidates(ring, monos):
            try:
                q = divide_exact(g, cand)
            except ValueError:
                continue
            left = _homogeneous_factor(cand)
            right = _homogeneous_factor(q.monic())
            merged = {}
            for f, mult in left + right:
                key = f._key()
                merged[key] = (f, merged.get(key, (f, 0))[1] + mult)
            return sorted(merged.values(), key=lambda t: t[0]._key())
    return [(g, 1)]


def _normalized_candidates(ring: PolyRing, monos: np.ndarray):
    # monos ascending under box order; grevlex-leading position gets coeff 1
    from .groebner import Context
    ctx = Context(ring)
    keys = [ctx.term_key(row) for row in monos]
    order = sorted(range(len(monos)), key=lambda i: keys[i], reverse=True)
    monos = monos[order]
    m = len(monos)
    for lead in range(m):
        rest = m - lead - 1
        for tail in itertools.product(range(ring.p), repeat=rest):
            coeffs = np.zeros(m, np.int64)
            coeffs[lead] = 1
            if rest:
                coeffs[lead + 1:] = tail
            keep = coeffs != 0
            yield ring.from_terms(monos[keep], coeffs[keep])


# -- zero-dimensional ideals ----------------------------------------------

class _QuotientBasis:
    """Multiplication structure of ring/I for zero-dimensional I."""

    def __init__(self, ideal: Ideal):
        self.ideal = ideal
        self.ring = ideal.ring
        self.monos = ideal.standard_monomials()
        self.index = {tuple(r): i for i, r in enumerate(self.monos)}
        self.dim = len(self.monos)

    def coords(self, f: Polynomial) -> np.ndarray:
        f = self.ideal.nf(f)
        v = np.zeros(self.dim, np.int64)
        for row, c in zip(f.exps, f.coeffs):
            v[self.index[tuple(row)]] = c
        return v

    def mult_matrix(self, u: Polynomial) -> np.ndarray:
        cols = []
        for row in self.monos:
            cols.append(self.coords(u * self.ring.monomial(row)))
        return np.stack(cols, axis=1)


def _min_poly(M: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Monic minimal polynomial of M on the cyclic space of v."""
    vecs = [v % p]
    while True:
        A = np.stack(vecs, axis=1)
        w = M @ vecs[-1] % p
        x = solve(A, w, p)
        if x is not None:
            out = np.zeros(len(vecs) + 1, np.int64)
            out[: len(vecs)] = (-x) % p
            out[len(vecs)] = 1
            return out
        vecs.append(w)


def _zero_dim_radical(ideal: Ideal, qb: _QuotientBasis) -> Ideal:
    ring = ideal.ring
    extra = []
    for i in range(ring.nvars):
        m = _min_poly(qb.mult_matrix(ring.variable(i)), qb.coords(ring.one()),
                      ring.p)
        fac = uv.factor(m, ring.p)
        sq = np.array([1], np.int64)
        for f, _ in fac:
            sq = uv.mul(sq, f, ring.p)
        e = np.zeros((len(sq), ring.nvars), np.int64)
        e[:, i] = np.arange(len(sq))
        extra.append(ring.from_terms(e, sq))
    return Ideal(ring, ideal.gens + extra)


def _primitive_forms(ring: PolyRing):
    # deterministic: single variables, then small combinations
    for i in range(ring.nvars):
        yield ring.variable(i)
    count = 0
    for coeffs in itertools.product(range(ring.p), repeat=ring.nvars):
        if sum(c != 0 for c in coeffs) < 2:
            continue
        u = ring.zero()
        for i, c in enumerate(coeffs):
            if c:
                u = u + ring.variable(i) * c
        yield u
        count += 1
        if count > PRIMITIVE_TRIES:
            return


def _zero_dim_primes(ideal: Ideal):
    qb = _QuotientBasis(ideal)
    rad = _zero_dim_radical(ideal, qb)
    qb = _QuotientBasis(rad)
    ring = ideal.ring
    one = qb.coords(ring.one())
    for u in _primitive_forms(ring):
        m = _min_poly(qb.mult_matrix(u), one, ring.p)
        if uv.deg(m) != qb.dim:
            continue
        out = []
        for f, _ in uv.factor(m, ring.p):
            fu = _eval_univar(f, u)
            out.append(Ideal(ring, rad.gens + [fu]))
        return sorted(out, key=lambda q: q._key())
    raise DecompositionUnavailable(
        "no primitive linear form found for zero-dimensional split")


def _eval_univar(coeffs: np.ndarray, u: Polynomial) -> Polynomial:
    out = u.ring.zero()
    for c in coeffs[::-1]:
        out = out * u + int(c)
    return out


# -- hint verification -----------------------------------------------------

def _verified_hints(ideal: Ideal, hints):
    ring = ideal.ring
    comps = [Ideal(ring, list(h)) for h in hints]
    for h in comps:
        if not h.contains_ideal(ideal):
            raise DecompositionUnavailable(
                f"hint {h!r} does not contain the ideal")
        if not is_prime_certified(h):
            raise DecompositionUnavailable(f"hint {h!r} is not certified prime")
    meet = comps[0]
    for h in comps[1:]:
        meet = meet.intersect(h)
    for g in meet.gens:
        if not ideal.radical_contains(g):
            raise DecompositionUnavailable(
                "hint intersection is larger than the radical")
    minimal = []
    for h in comps:
        if not any(other is not h and h.contains_ideal(other) and h != other
                   for other in comps):
            if h not in minimal:
                minimal.append(h)
    return sorted(minimal, key=lambda q: q._key())
