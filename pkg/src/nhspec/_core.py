"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``NHSPEC_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("NHSPEC_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:  # extension not built
        kernels = _kernels_py
        COMPILED = False

__all__ = ["kernels", "COMPILED"]
