"""Selects the compiled case-search kernel when it is importable.

Set ``GOZINTA_PURE_PYTHON=1`` to force the fallback. The compiled kernel
packs reachability into 64-bit words, so systems with more than 64
variables always use the fallback.
"""

from __future__ import annotations

import os

from . import _pysearch

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

NATIVE_AVAILABLE = _ckernel is not None
MAX_NATIVE_VARS = 64


def _use_native() -> bool:
    return NATIVE_AVAILABLE and os.environ.get("GOZINTA_PURE_PYTHON", "") in ("", "0")


def backend_name() -> str:
    return "cython" if _use_native() else "python"


def search_subtree(n, k, orders, sides, normalize, backend=None):
    """Dispatch one side vector's subtree to a kernel.

    ``backend`` is ``"cython"``, ``"python"`` or ``None`` for the default.
    """
    nvars = k * n + len(orders) * k
    if backend is None:
        backend = "cython" if _use_native() else "python"
    if backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        if nvars <= MAX_NATIVE_VARS:
            return _ckernel.search_subtree(n, k, orders, sides, normalize)
    return _pysearch.search_subtree(n, k, orders, sides, normalize)
