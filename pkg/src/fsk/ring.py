"""Sparse multivariate polynomials over a prime field F_p.

A PolyRing fixes the characteristic, the variable names and an integer
weight per variable (weights only matter for graded degrees, all
arithmetic is weight-blind).  A Polynomial stores its terms packed into
two int64 numpy arrays, always canonical: terms strictly descending in
grevlex, coefficients reduced to [1, p).  All operations return canonical
polynomials, so equality is array equality.
"""

from __future__ import annotations

import itertools

import numpy as np

from ._kernels import group_terms

# storage order constants (grevlex, no module column)
_KIND = 0
_MOD = 0


class PolyRing:
    """F_p[x_1, .., x_n] with a weight per variable."""

    def __init__(self, p: int, names, weights=None):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = int(p)
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.names)
        self.weights = tuple(int(w) for w in (weights or (1,) * self.nvars))
        if len(self.weights) != self.nvars:
            raise ValueError("weights length does not match variable count")
        self._blk = np.zeros(self.nvars, np.int64)
        self._wvec = np.asarray(self.weights, np.int64)

    def _key(self):
        return (self.p, self.names, self.weights)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"F_{self.p}[{', '.join(self.names)}]"

    # -- element constructors -------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, np.zeros((0, self.nvars), np.int64),
                          np.zeros(0, np.int64))

    def const(self, c: int) -> "Polynomial":
        c = int(c) % self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, np.zeros((1, self.nvars), np.int64),
                          np.array([c], np.int64))

    def one(self) -> "Polynomial":
        return self.const(1)

    def monomial(self, exps, c: int = 1) -> "Polynomial":
        c = int(c) % self.p
        if c == 0:
            return self.zero()
        e = np.asarray(exps, np.int64).reshape(1, self.nvars)
        if (e < 0).any():
            raise ValueError("negative exponent")
        return Polynomial(self, e, np.array([c], np.int64))

    def variable(self, i: int) -> "Polynomial":
        e = np.zeros(self.nvars, np.int64)
        e[i] = 1
        return self.monomial(e)

    def gens(self):
        return tuple(self.variable(i) for i in range(self.nvars))

    def var_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in {self}") from None

    def from_terms(self, exps, coeffs) -> "Polynomial":
        """Canonicalize an arbitrary packed term list."""
        exps = np.asarray(exps, np.int64).reshape(-1, self.nvars)
        coeffs = np.asarray(coeffs, np.int64)
        e, c = group_terms(exps, coeffs, self.p, _KIND, self._blk, _MOD)
        return Polynomial(self, e, c)

    def __call__(self, s):
        if isinstance(s, Polynomial):
            if s.ring != self:
                raise ValueError("polynomial from a different ring")
            return s
        if isinstance(s, int):
            return self.const(s)
        from .parser import parse_poly
        return parse_poly(self, s)

    # -- ring construction ----------------------------------------------

    def extend(self, names, weights=None) -> "PolyRing":
        """Append fresh variables (with optional weights)."""
        names = tuple(names)
        weights = tuple(weights or (1,) * len(names))
        return PolyRing(self.p, self.names + names, self.weights + weights)

    def drop_to(self, names) -> "PolyRing":
        """Subring on a subset of the variables, weights kept."""
        idx = [self.var_index(nm) for nm in names]
        return PolyRing(self.p, tuple(names), tuple(self.weights[i] for i in idx))


class Polynomial:
    __slots__ = ("ring", "exps", "coeffs")

    def __init__(self, ring: PolyRing, exps: np.ndarray, coeffs: np.ndarray):
        # trusted constructor: arrays must already be canonical
        self.ring = ring
        self.exps = exps
        self.coeffs = coeffs

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.exps.shape[0] == 0

    def nterms(self) -> int:
        return self.exps.shape[0]

    def lead_exp(self) -> np.ndarray:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        return self.exps[0]

    def lead_coeff(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        return int(self.coeffs[0])

    def degree(self) -> int:
        """Weighted total degree, -1 for zero."""
        if self.is_zero():
            return -1
        return int((self.exps @ self.ring._wvec).max())

    def is_homogeneous(self) -> bool:
        if self.is_zero():
            return True
        d = self.exps @ self.ring._wvec
        return bool((d == d[0]).all())

    def graded_piece(self, d: int) -> "Polynomial":
        keep = (self.exps @ self.ring._wvec) == d
        return Polynomial(self.ring, self.exps[keep], self.coeffs[keep])

    def constant_coeff(self) -> int:
        if self.nterms() and not self.exps[-1].any():
            return int(self.coeffs[-1])
        return 0

    def is_constant(self) -> bool:
        return self.nterms() == 0 or (self.nterms() == 1 and not self.exps[0].any())

    def is_monomial(self) -> bool:
        return self.nterms() == 1

    def degree_in(self, i: int) -> int:
        if self.is_zero():
            return -1
        return int(self.exps[:, i].max())

    def uses(self, i: int) -> bool:
        return bool(self.nterms() and self.exps[:, i].any())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self.ring(other)
        return self.ring.from_terms(
            np.concatenate([self.exps, other.exps]),
            np.concatenate([self.coeffs, other.coeffs]))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, self.exps, (-self.coeffs) % self.ring.p)

    def __sub__(self, other):
        return self + (-self.ring(other))

    def __rsub__(self, other):
        return self.ring(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero()
            return Polynomial(self.ring, self.exps, self.coeffs * c % self.ring.p)
        other = self.ring(other)
        if self.is_zero() or other.is_zero():
            return self.ring.zero()
        e = (self.exps[:, None, :] + other.exps[None, :, :]).reshape(-1, self.ring.nvars)
        c = (self.coeffs[:, None] * other.coeffs[None, :]).reshape(-1)
        return self.ring.from_terms(e, c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        if e == 0:
            return self.ring.one()
        p = self.ring.p
        # base-p digits: f^e = prod_i frob^i(f^(d_i)), F_p coefficients are
        # Frobenius-fixed
        digits = []
        m = e
        while m:
            digits.append(m % p)
            m //= p
        out = self.ring.one()
        for i, d in enumerate(digits):
            if d == 0:
                continue
            out = out * self._small_pow(d).frobenius_shift(p ** i)
        return out

    def _small_pow(self, d: int) -> "Polynomial":
        out = self.ring.one()
        base = self
        while d:
            if d & 1:
                out = out * base
            base = base * base if d > 1 else base
            d >>= 1
        return out

    def frobenius_shift(self, q: int) -> "Polynomial":
        """Raise every exponent by the factor q (q a power of p)."""
        if self.is_zero() or q == 1:
            return self
        if self.exps.max() * q >= 2 ** 62:
            raise OverflowError("exponent overflow in Frobenius power")
        return Polynomial(self.ring, self.exps * q, self.coeffs)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = pow(self.lead_coeff(), self.ring.p - 2, self.ring.p)
        return self * inv

    def derivative(self, i: int) -> "Polynomial":
        if self.is_zero():
            return self
        c = self.coeffs * (self.exps[:, i] % self.ring.p) % self.ring.p
        keep = c != 0
        e = self.exps[keep].copy()
        e[:, i] -= 1
        return Polynomial(self.ring, e, c[keep])

    # -- maps ---------------------------------------------------------------

    def map(self, target: PolyRing, images) -> "Polynomial":
        """Image under x_i -> images[i]; images live in target."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        if target.p != self.ring.p:
            raise ValueError("characteristic mismatch")
        cols = _variable_columns(target, images)
        if cols is not None:
            e = np.zeros((self.nterms(), target.nvars), np.int64)
            for i, j in enumerate(cols):
                e[:, j] = self.exps[:, i]
            return target.from_terms(e, self.coeffs)
        out = target.zero()
        for row, c in zip(self.exps, self.coeffs):
            term = target.const(int(c))
            for i, e in enumerate(row):
                if e:
                    term = term * images[i] ** int(e)
            out = out + term
        return out

    def subs(self, repl: dict) -> "Polynomial":
        """Substitute {var index: polynomial} within the same ring."""
        images = [repl.get(i, self.ring.variable(i)) for i in range(self.ring.nvars)]
        return self.map(self.ring, images)

    # -- identity -------------------------------------------------------------

    def _key(self):
        return (self.ring._key(), self.exps.tobytes(), self.coeffs.tobytes())

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return isinstance(other, Polynomial) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for row, c in zip(self.exps, self.coeffs):
            factors = []
            for i, e in enumerate(row):
                if e == 1:
                    factors.append(self.ring.names[i])
                elif e > 1:
                    factors.append(f"{self.ring.names[i]}^{e}")
            if not factors:
                parts.append(str(int(c)))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(int(c))] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return self.__str__()


def _variable_columns(target, images):
    # column permutation when every image is a plain variable
    cols = []
    for g in images:
        if not isinstance(g, Polynomial) or g.ring != target:
            return None
        if g.nterms() != 1 or g.coeffs[0] != 1 or g.exps[0].sum() != 1:
            return None
        cols.append(int(np.nonzero(g.exps[0])[0][0]))
    return cols


def box_exponents(bounds) -> np.ndarray:
    """All exponent rows a with 0 <= a_i < bounds_i, lexicographic."""
    bounds = [int(b) for b in bounds]
    if any(b <= 0 for b in bounds):
        return np.zeros((0, len(bounds)), np.int64)
    rows = np.array(list(itertools.product(*(range(b) for b in bounds))), np.int64)
    return rows.reshape(-1, len(bounds))


def monomials_of_degree(ring: PolyRing, d: int) -> np.ndarray:
    """Exponent rows of every monomial of weighted degree exactly d."""
    w = np.asarray(ring.weights, np.int64)
    box = box_exponents([d // int(wi) + 1 for wi in w])
    return box[box @ w == d]
