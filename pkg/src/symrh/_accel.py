"""Switch between numba-compiled kernels and the pure-numpy fallbacks.

Set ``SYMRH_DISABLE_NUMBA=1`` in the environment to force the numpy path
(useful for debugging and for the kernel benchmark).  The flag is read once
at import time.
"""

import os

_disabled = os.environ.get("SYMRH_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _disabled:
        raise ImportError("numba disabled by SYMRH_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

NUMBA_OPTIONS = {"nogil": True, "cache": True, "fastmath": False}


def njit(func):
    """``numba.njit`` with the package defaults, or the identity when numba is off."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(**NUMBA_OPTIONS)(func)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
