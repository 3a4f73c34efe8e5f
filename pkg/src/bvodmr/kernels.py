"""Numerical backend selection, resolved once at import.

The compiled extension is preferred when present; the pure-Python twin
is the fallback.  Override with the environment variable
``BVODMR_KERNELS``:

* ``auto``   (default) compiled if importable, else pure Python
* ``cython`` require the compiled extension, raise if missing
* ``python`` force the pure-Python fallback
"""

from __future__ import annotations

import os

_requested = os.environ.get("BVODMR_KERNELS", "auto").lower()

if _requested == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
elif _requested in ("auto", "cython"):
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _kernels_py as _impl

        BACKEND = "python"
else:
    raise ValueError(
        f"BVODMR_KERNELS must be auto, cython or python, got {_requested!r}"
    )

build_matrix = _impl.build_matrix
eigh3 = _impl.eigh3
resonance_pair = _impl.resonance_pair
resonance_sweep = _impl.resonance_sweep


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
