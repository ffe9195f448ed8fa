"""Hot kernels: sparse-term merges for polynomial reduction and dense row
reduction mod p.

Every kernel exists twice with identical semantics: a loop build compiled
with numba (@njit via backend.jit) and a vectorized numpy build.  The
active pair is chosen once at import time by FSK_BACKEND.

Packed term convention: a polynomial (or free-module element) is a pair
(exps, coeffs) with exps an int64 array of shape (nterms, k) and coeffs an
int64 array of shape (nterms,), coefficients reduced to [1, p), terms
sorted strictly descending under the active order.  In module mode
(mod=1) column 0 of exps holds the component index and position dominates
the term order (smaller component index wins).  Order kinds: 0 = grevlex,
1 = lex, 2 = two-block elimination (blk marks each exponent column with
its block, block 0 is eliminated first; grevlex inside each block).
"""

import numpy as np

from .backend import USE_NUMBA, jit


# ---------------------------------------------------------------------------
# shared helpers (python level, used by both builds)

def sort_keys(exps, kind, blk, mod):
    """Key arrays for np.lexsort giving ascending active order."""
    s = 1 if mod else 0
    X = exps[:, s:]
    n = X.shape[1]
    if kind == 0:
        keys = [-X[:, i] for i in range(n)] + [X.sum(axis=1)]
    elif kind == 1:
        keys = [X[:, i] for i in range(n - 1, -1, -1)]
    elif kind == 2:
        b0 = [i for i in range(n) if blk[i] == 0]
        b1 = [i for i in range(n) if blk[i] != 0]
        keys = [-X[:, i] for i in b1]
        keys.append(X[:, b1].sum(axis=1) if b1 else np.zeros(len(X), np.int64))
        keys += [-X[:, i] for i in b0]
        keys.append(X[:, b0].sum(axis=1) if b0 else np.zeros(len(X), np.int64))
    else:
        raise ValueError(f"unknown order kind {kind}")
    if mod:
        keys.append(-exps[:, 0])
    return keys


def sort_perm(exps, kind, blk, mod, descending=True):
    """Permutation sorting packed terms under the active order."""
    if exps.shape[0] <= 1:
        return np.arange(exps.shape[0])
    perm = np.lexsort(sort_keys(exps, kind, blk, mod))
    return perm[::-1] if descending else perm


def group_terms(exps, coeffs, p, kind, blk, mod):
    """Sort terms descending, merge duplicate monomials, drop zeros."""
    coeffs = coeffs % p
    if exps.shape[0] == 0:
        return exps, coeffs
    perm = sort_perm(exps, kind, blk, mod, descending=False)
    exps = exps[perm]
    coeffs = coeffs[perm]
    if exps.shape[0] > 1:
        change = np.any(exps[1:] != exps[:-1], axis=1)
        starts = np.concatenate(([0], np.nonzero(change)[0] + 1))
    else:
        starts = np.array([0])
    sums = np.add.reduceat(coeffs, starts) % p
    keep = sums != 0
    return exps[starts[keep]][::-1], sums[keep][::-1]


# ---------------------------------------------------------------------------
# loop build (numba target)

def _minv_loop(a, p):
    # extended euclid, a nonzero mod p
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


def _cmp2_loop(E1, i1, s1, E2, i2, s2, kind, blk, mod):
    # sign of (E1[i1]+s1) - (E2[i2]+s2) in the active order
    k = E1.shape[1]
    lo = 0
    if mod == 1:
        c1 = E1[i1, 0] + s1[0]
        c2 = E2[i2, 0] + s2[0]
        if c1 != c2:
            return 1 if c1 < c2 else -1
        lo = 1
    if kind == 0:
        d1 = 0
        d2 = 0
        for c in range(lo, k):
            d1 += E1[i1, c] + s1[c]
            d2 += E2[i2, c] + s2[c]
        if d1 != d2:
            return 1 if d1 > d2 else -1
        for c in range(k - 1, lo - 1, -1):
            a = E1[i1, c] + s1[c]
            b = E2[i2, c] + s2[c]
            if a != b:
                return 1 if a < b else -1
        return 0
    if kind == 1:
        for c in range(lo, k):
            a = E1[i1, c] + s1[c]
            b = E2[i2, c] + s2[c]
            if a != b:
                return 1 if a > b else -1
        return 0
    for blockid in range(2):
        d1 = 0
        d2 = 0
        for c in range(lo, k):
            if blk[c - lo] == blockid:
                d1 += E1[i1, c] + s1[c]
                d2 += E2[i2, c] + s2[c]
        if d1 != d2:
            return 1 if d1 > d2 else -1
        for c in range(k - 1, lo - 1, -1):
            if blk[c - lo] == blockid:
                a = E1[i1, c] + s1[c]
                b = E2[i2, c] + s2[c]
                if a != b:
                    return 1 if a < b else -1
    return 0


def _combine_loop(ae, ac, ia, ca, sa, be, bc, b0, b1, cb, sb, p, kind, blk, mod):
    # ca * x^sa * A[ia:] + cb * x^sb * B[b0:b1], coefficients already in [0,p)
    k = ae.shape[1]
    na = ae.shape[0]
    cap = (na - ia) + (b1 - b0)
    oe = np.empty((cap, k), np.int64)
    oc = np.empty(cap, np.int64)
    i = ia
    j = b0
    t = 0
    while i < na or j < b1:
        if i < na and j < b1:
            c = _cmp2_loop(ae, i, sa, be, j, sb, kind, blk, mod)
        elif i < na:
            c = 1
        else:
            c = -1
        if c > 0:
            v = (ca * ac[i]) % p
            if v != 0:
                for col in range(k):
                    oe[t, col] = ae[i, col] + sa[col]
                oc[t] = v
                t += 1
            i += 1
        elif c < 0:
            v = (cb * bc[j]) % p
            if v != 0:
                for col in range(k):
                    oe[t, col] = be[j, col] + sb[col]
                oc[t] = v
                t += 1
            j += 1
        else:
            v = (ca * ac[i] + cb * bc[j]) % p
            if v != 0:
                for col in range(k):
                    oe[t, col] = ae[i, col] + sa[col]
                oc[t] = v
                t += 1
            i += 1
            j += 1
    return oe[:t].copy(), oc[:t].copy()


def _nf_loop(fe, fc, gexp, gcoef, goff, p, kind, blk, mod):
    # full normal form of (fe, fc) against the monic packed basis
    k = fe.shape[1]
    nb = goff.shape[0] - 1
    we = fe.copy()
    wc = fc.copy()
    zero = np.zeros(k, np.int64)
    idx = 0
    while idx < we.shape[0]:
        red = -1
        for j in range(nb):
            lt = goff[j]
            if mod == 1 and gexp[lt, 0] != we[idx, 0]:
                continue
            ok = True
            for c in range(1 if mod == 1 else 0, k):
                if gexp[lt, c] > we[idx, c]:
                    ok = False
                    break
            if ok:
                red = j
                break
        if red < 0:
            idx += 1
            continue
        lt = goff[red]
        shift = np.empty(k, np.int64)
        for c in range(k):
            shift[c] = we[idx, c] - gexp[lt, c]
        ne, nc = _combine_loop(we, wc, idx, 1, zero,
                               gexp, gcoef, goff[red], goff[red + 1],
                               (p - wc[idx]) % p, shift, p, kind, blk, mod)
        out_e = np.empty((idx + ne.shape[0], k), np.int64)
        out_c = np.empty(idx + ne.shape[0], np.int64)
        out_e[:idx] = we[:idx]
        out_c[:idx] = wc[:idx]
        out_e[idx:] = ne
        out_c[idx:] = nc
        we = out_e
        wc = out_c
    return we, wc


def _rref_loop(A, p):
    # in-place reduced row echelon form mod p; returns pivot column array
    m, n = A.shape
    piv = np.empty(min(m, n), np.int64)
    r = 0
    for col in range(n):
        pr = -1
        for i in range(r, m):
            if A[i, col] % p != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for c in range(n):
                tmp = A[r, c]
                A[r, c] = A[pr, c]
                A[pr, c] = tmp
        inv = _minv_loop(A[r, col] % p, p)
        for c in range(n):
            A[r, c] = (A[r, c] % p) * inv % p
        for i in range(m):
            if i != r and A[i, col] % p != 0:
                f = A[i, col] % p
                for c in range(n):
                    A[i, c] = (A[i, c] - f * A[r, c]) % p
        piv[r] = col
        r += 1
        if r == m:
            break
    return piv[:r].copy()


if USE_NUMBA:
    _minv_loop = jit(_minv_loop)
    _cmp2_loop = jit(_cmp2_loop)
    _combine_loop = jit(_combine_loop)
    _nf_loop = jit(_nf_loop)
    _rref_loop = jit(_rref_loop)


# ---------------------------------------------------------------------------
# numpy build

def _combine_numpy(ae, ac, ia, ca, sa, be, bc, b0, b1, cb, sb, p, kind, blk, mod):
    e = np.concatenate([ae[ia:] + sa, be[b0:b1] + sb])
    c = np.concatenate([ac[ia:] * (ca % p), bc[b0:b1] * (cb % p)]) % p
    return group_terms(e, c, p, kind, blk, mod)


def _nf_numpy(fe, fc, gexp, gcoef, goff, p, kind, blk, mod):
    glt = gexp[goff[:-1]]
    we, wc = fe, fc
    idx = 0
    while idx < we.shape[0]:
        lead = we[idx]
        if mod:
            mask = (glt[:, 0] == lead[0]) & np.all(glt[:, 1:] <= lead[1:], axis=1)
        else:
            mask = np.all(glt <= lead, axis=1)
        hits = np.nonzero(mask)[0]
        if hits.size == 0:
            idx += 1
            continue
        j = hits[0]
        shift = lead - glt[j]
        ne, nc = _combine_numpy(we, wc, idx, 1, np.zeros_like(shift),
                                gexp, gcoef, goff[j], goff[j + 1],
                                (p - wc[idx]) % p, shift, p, kind, blk, mod)
        we = np.concatenate([we[:idx], ne])
        wc = np.concatenate([wc[:idx], nc])
    return we, wc


def _rref_numpy(A, p):
    m, n = A.shape
    piv = []
    r = 0
    for col in range(n):
        rows = np.nonzero(A[r:, col] % p)[0]
        if rows.size == 0:
            continue
        pr = r + rows[0]
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = A[r] % p * pow(int(A[r, col] % p), p - 2, p) % p
        other = np.nonzero(A[:, col] % p)[0]
        other = other[other != r]
        if other.size:
            A[other] = (A[other] - np.outer(A[other, col] % p, A[r])) % p
        piv.append(col)
        r += 1
        if r == m:
            break
    return np.asarray(piv, np.int64)


# ---------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    combine_packed = _combine_loop
    nf_packed = _nf_loop
    rref_packed = _rref_loop
else:
    combine_packed = _combine_numpy
    nf_packed = _nf_numpy
    rref_packed = _rref_numpy
