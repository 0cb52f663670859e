"""Backend selection for the numeric kernels.

The hot loops in :mod:`fraccalc.kernels` exist twice: as plain-``math`` scalar
loops compiled with numba, and as vectorised numpy code.  Which one the public
API dispatches to is decided once, at import time, from the environment:

``FRACCALC_BACKEND=numba``  (default when numba imports)
``FRACCALC_BACKEND=numpy``  (pure numpy, no compilation)

Both implementations stay importable regardless of the flag so the benchmark
and the test-suite can compare them side by side.
"""

from __future__ import annotations

import os

try:  # numba is optional at runtime
    import numba as _numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None
    HAVE_NUMBA = False

_requested = os.environ.get("FRACCALC_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(
        f"FRACCALC_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def njit(func=None, **kwargs):
    """``numba.njit`` when numba is installed, identity decorator otherwise."""
    kwargs.setdefault("cache", True)
    if not HAVE_NUMBA:
        if func is not None:
            return func
        return lambda f: f
    if func is not None:
        return _numba.njit(**kwargs)(func)
    return _numba.njit(**kwargs)
