"""Kernel backend selection.

The hot loops (grid quadrature, banded LU) exist twice: a numba-jitted
version and a pure-numpy fallback.  PATHAMP_BACKEND chooses at import:

    auto   use numba when importable, else numpy (default)
    numba  require numba, fail loudly if missing
    numpy  force the fallback

Both backends are deterministic; they agree to rounding but not bit for
bit, so any byte-level reproducibility claim holds per backend.
"""

import os

BACKEND_ENV = "PATHAMP_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"{BACKEND_ENV} must be one of auto|numba|numpy, got {_requested!r}")

if _requested == "numpy":
    from . import _kernels_numpy as _impl
    USING_NUMBA = False
else:
    try:
        from . import _kernels_numba as _impl
        USING_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        from . import _kernels_numpy as _impl
        USING_NUMBA = False

BACKEND_NAME = "numba" if USING_NUMBA else "numpy"

grid_amplitude = _impl.grid_amplitude
banded_lu_factor = _impl.banded_lu_factor
banded_lu_solve = _impl.banded_lu_solve
