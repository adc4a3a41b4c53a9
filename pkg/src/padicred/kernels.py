"""Kernel selection: the compiled extension when available, else the Python fallback.

Set ``PADICRED_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("PADICRED_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

tp_add = _impl.tp_add
tp_sub = _impl.tp_sub
tp_mul = _impl.tp_mul
tp_pow = _impl.tp_pow
ok_mul = _impl.ok_mul
bf_divp = _impl.bf_divp

__all__ = ["BACKEND", "tp_add", "tp_sub", "tp_mul", "tp_pow", "ok_mul", "bf_divp"]
