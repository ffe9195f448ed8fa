"""Univariate polynomial arithmetic and factorization over F_p.

Polynomials are int64 numpy arrays of coefficients in ascending degree,
trailing zeros trimmed.  Factorization is squarefree decomposition,
then distinct-degree, then Cantor-Zassenhaus equal-degree splitting with
a fixed-seed generator so runs are reproducible.
"""

import numpy as np

_SEED = 0x5EED


def trim(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, np.int64)
    nz = np.nonzero(a)[0]
    if nz.size == 0:
        return np.zeros(0, np.int64)
    return a[: nz[-1] + 1]


def deg(a) -> int:
    return len(a) - 1


def is_zero(a) -> bool:
    return len(a) == 0


def add(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, np.int64)
    out[: len(a)] += a
    out[: len(b)] += b
    return trim(out % p)


def sub(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, np.int64)
    out[: len(a)] += a
    out[: len(b)] -= b
    return trim(out % p)


def mul(a, b, p):
    if is_zero(a) or is_zero(b):
        return np.zeros(0, np.int64)
    return trim(np.convolve(a, b) % p)


def scale(a, c, p):
    return trim(a * (c % p) % p)


def monic(a, p):
    if is_zero(a):
        return a
    return scale(a, pow(int(a[-1]), p - 2, p), p)


def divmod_poly(a, b, p):
    if is_zero(b):
        raise ZeroDivisionError
    a = a.copy()
    if deg(a) < deg(b):
        return np.zeros(0, np.int64), trim(a)
    binv = pow(int(b[-1]), p - 2, p)
    q = np.zeros(deg(a) - deg(b) + 1, np.int64)
    for i in range(deg(a) - deg(b), -1, -1):
        c = a[i + deg(b)] % p * binv % p
        if c:
            q[i] = c
            a[i : i + len(b)] = (a[i : i + len(b)] - c * b) % p
    return trim(q), trim(a % p)


def mod(a, b, p):
    return divmod_poly(a, b, p)[1]


def gcd(a, b, p):
    while not is_zero(b):
        a, b = b, mod(a, b, p)
    return monic(a, p)


def pow_mod(a, e: int, f, p):
    out = np.array([1], np.int64)
    a = mod(a, f, p)
    while e:
        if e & 1:
            out = mod(mul(out, a, p), f, p)
        a = mod(mul(a, a, p), f, p)
        e >>= 1
    return out


def derivative(a, p):
    if len(a) <= 1:
        return np.zeros(0, np.int64)
    return trim(a[1:] * (np.arange(1, len(a)) % p) % p)


def p_th_root(a, p):
    # a must be of the form h(x^p); over F_p the root has the same coeffs
    return trim(a[::p])


def _x():
    return np.array([0, 1], np.int64)


def distinct_degree(f, p):
    """[(product of irreducible factors of degree d, d)] for squarefree monic f."""
    out = []
    h = _x()
    d = 0
    while deg(f) > 0:
        d += 1
        if 2 * d > deg(f):
            out.append((f, deg(f)))
            break
        h = pow_mod(h, p, f, p)
        g = gcd(sub(h, _x(), p), f, p)
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_poly(f, g, p)[0]
            h = mod(h, f, p)
    return out


def _random_poly(rng, n, p):
    c = rng.integers(0, p, size=n).astype(np.int64)
    return trim(c)


def equal_degree_split(f, d, p, rng):
    """One proper monic factor of f, all of whose factors have degree d."""
    n = deg(f)
    while True:
        r = _random_poly(rng, n, p)
        if deg(r) < 1:
            continue
        g = gcd(r, f, p)
        if 0 < deg(g) < n:
            return g
        if p == 2:
            # trace map over F_2
            t = np.zeros(0, np.int64)
            s = mod(r, f, p)
            for _ in range(d):
                t = add(t, s, p)
                s = mod(mul(s, s, p), f, p)
            g = gcd(t, f, p)
        else:
            s = pow_mod(r, (p ** d - 1) // 2, f, p)
            g = gcd(sub(s, np.array([1], np.int64), p), f, p)
        if 0 < deg(g) < n:
            return g


def equal_degree_factor(f, d, p, rng):
    if deg(f) == d:
        return [monic(f, p)]
    g = equal_degree_split(f, d, p, rng)
    h = divmod_poly(f, g, p)[0]
    return equal_degree_factor(g, d, p, rng) + equal_degree_factor(h, d, p, rng)


def factor(f, p):
    """Monic irreducible factors with multiplicity: [(factor, mult)]."""
    f = monic(trim(np.asarray(f, np.int64) % p), p)
    if deg(f) < 1:
        return []
    rng = np.random.Generator(np.random.PCG64(_SEED))
    counts = {}

    def record(irr, m):
        key = irr.tobytes()
        prev = counts.get(key, (irr, 0))[1]
        counts[key] = (irr, prev + m)

    def rec(g, mult):
        if deg(g) < 1:
            return
        d = derivative(g, p)
        if is_zero(d):
            rec(p_th_root(g, p), mult * p)
            return
        sqfree = monic(divmod_poly(g, gcd(g, d, p), p)[0], p)
        rest = g
        for part, dd in distinct_degree(sqfree, p):
            for irr in equal_degree_factor(part, dd, p, rng):
                m = 0
                while True:
                    q, r = divmod_poly(rest, irr, p)
                    if not is_zero(r):
                        break
                    m += 1
                    rest = q
                record(irr, mult * m)
        # what survives is a p-th power (its factors hid in gcd(g, g'))
        rec(monic(rest, p), mult)

    rec(f, 1)
    return sorted(counts.values(), key=lambda t: (deg(t[0]), tuple(t[0])))


def is_irreducible(f, p) -> bool:
    f = monic(trim(np.asarray(f, np.int64) % p), p)
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    if is_zero(derivative(f, p)):
        return False
    h = pow_mod(_x(), p ** n, f, p)
    if not np.array_equal(h, mod(_x(), f, p)):
        return False
    # x^(p^(n/q)) must not fix for any prime q | n
    for q in range(2, n + 1):
        if n % q == 0 and all(q % d for d in range(2, q)):
            h = pow_mod(_x(), p ** (n // q), f, p)
            if deg(gcd(sub(h, _x(), p), f, p)) > 0:
                return False
    return True


def roots(f, p):
    """Roots of f in F_p, sorted."""
    f = trim(np.asarray(f, np.int64) % p)
    if deg(f) < 1:
        return []
    g = gcd(sub(pow_mod(_x(), p, f, p), mod(_x(), f, p), p), f, p)
    out = []
    for irr, _ in factor(g, p):
        if deg(irr) == 1:
            out.append(int((-irr[0]) % p))
    return sorted(out)
