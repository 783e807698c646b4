"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when it
is missing or when SUMNETS_PURE_PYTHON is set (handy for benchmarking
and for testing both code paths).
"""

from __future__ import annotations

import os

if os.environ.get("SUMNETS_PURE_PYTHON"):
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

matmul_mod = _impl.matmul_mod
rref_mod = _impl.rref_mod


def backend_name() -> str:
    return _impl.BACKEND
