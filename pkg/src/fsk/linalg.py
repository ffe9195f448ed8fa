"""Dense linear algebra mod p on int64 arrays, thin wrapper over the
row-reduction kernel."""

import numpy as np

from ._kernels import rref_packed


def rref(A, p):
    """Reduced row echelon form (copy) and pivot column indices."""
    A = np.array(A, np.int64, copy=True) % p
    if A.size == 0:
        return A, np.zeros(0, np.int64)
    piv = rref_packed(A, p)
    return A, piv


def rank(A, p) -> int:
    return len(rref(A, p)[1])


def nullspace(A, p):
    """Rows spanning the right kernel {v : A v = 0 mod p}."""
    A = np.asarray(A, np.int64)
    n = A.shape[1] if A.ndim == 2 else 0
    if A.size == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    piv = list(piv)
    free = [j for j in range(n) if j not in piv]
    out = np.zeros((len(free), n), np.int64)
    for k, j in enumerate(free):
        out[k, j] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-R[i, j]) % p
    return out


def solve(A, b, p):
    """One solution of A x = b mod p, or None."""
    A = np.asarray(A, np.int64)
    b = np.asarray(b, np.int64).reshape(-1, 1)
    aug = np.concatenate([A, b], axis=1)
    R, piv = rref(aug, p)
    n = A.shape[1]
    x = np.zeros(n, np.int64)
    for i, pc in enumerate(piv):
        if pc == n:
            return None
        x[pc] = R[i, n]
    return x
