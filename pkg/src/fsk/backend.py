"""Kernel backend selection.

The two hot numeric paths (sparse-term reduction merges and dense row
reduction mod p) exist in two builds: a loop form compiled with numba's
@njit and a vectorized pure-numpy form.  FSK_BACKEND=numpy forces the
numpy path; FSK_BACKEND=numba requires numba and fails loudly if it is
missing.  Unset, numba is used when importable.
"""

import os

_ENV = "FSK_BACKEND"


def _resolve():
    choice = os.environ.get(_ENV, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise RuntimeError(f"{_ENV} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy", None
    try:
        import numba
    except ImportError:
        if choice == "numba":
            raise
        return "numpy", None
    return "numba", numba


BACKEND, _numba = _resolve()
USE_NUMBA = BACKEND == "numba"


def jit(fn):
    """Compile fn with numba when the numba backend is active, else return it unchanged."""
    if USE_NUMBA:
        return _numba.njit(cache=True)(fn)
    return fn
