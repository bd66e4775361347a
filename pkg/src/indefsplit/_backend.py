"""Kernel backend selection.

The compiled Cython extension is used when it is importable; otherwise the
pure-Python module is used. Setting ``INDEFSPLIT_PURE=1`` in the
environment forces the fallback.
"""
import os

from . import _pykernels

try:
    if os.environ.get("INDEFSPLIT_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

kernels = _ckernels if _ckernels is not None else _pykernels
COMPILED = _ckernels is not None


def get_kernels(name=None):
    """Return a kernel module by name (``"cython"`` or ``"python"``).

    ``None`` returns the active backend.
    """
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not available")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
