"""Kernel backend selection: compiled extension if built, else pure python.

Set SUPER2VEC_BACKEND=python to force the fallback (used by the benchmark
and the test suite to exercise both paths).
"""

import os

if os.environ.get("SUPER2VEC_BACKEND", "").lower() == "python":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
rref = _impl.rref
rref_with_transform = _impl.rref_with_transform
mat_mul = _impl.mat_mul
