"""Select the compiled search kernels, falling back to pure Python.

Set ``FLATTILE_PURE_PYTHON=1`` to force the fallback (used by the parity tests
and the benchmark).
"""

import os

from . import _pykernels as python_kernels

compiled_kernels = None
if not os.environ.get("FLATTILE_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

active = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "cython" if compiled_kernels is not None else "python"

bfs_code = active.bfs_code
canonical_code = active.canonical_code
automorphism_count = active.automorphism_count
orderly_maps = active.orderly_maps
naive_maps = active.naive_maps
orderly_origamis = active.orderly_origamis
