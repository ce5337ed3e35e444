"""Kernel backend selection.

The compiled Cython kernels are used when importable; otherwise the
NumPy implementations take over.  Set PARAMSEP_PURE_PYTHON=1 to force
the fallback (the benchmark uses this to compare the two).
"""

import os

if os.environ.get("PARAMSEP_PURE_PYTHON"):
    from . import pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import pykernels as _impl

BACKEND = _impl.BACKEND_NAME
StreamExhausted = _impl.StreamExhausted
gf_mul_vec = _impl.gf_mul_vec
poly_eval = _impl.poly_eval
gauss_solve = _impl.gauss_solve
gauss_nullvec = _impl.gauss_nullvec
fisher_yates_subset = _impl.fisher_yates_subset
