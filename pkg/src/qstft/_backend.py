"""Kernel backend selection.

The direct-summation kernels in :mod:`qstft._kernels` exist in two flavours:
numba ``@njit`` loops and vectorised numpy. Numba is used when it imports and
``QSTFT_DISABLE_NUMBA`` is unset (or ``0``); otherwise numpy is used.
The flag is read once, at import time.
"""

import os

_flag = os.environ.get("QSTFT_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True)(func)
