"""Selects the compiled LCS kernels when built, else the pure-Python ones.

Set ``BIMAP_BACKEND=python`` to force the fallback.
"""
import os

from bimap import _kernels_py

if os.environ.get("BIMAP_BACKEND", "").lower() == "python":
    _impl = _kernels_py
else:
    try:
        from bimap import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

lcs_length = _impl.lcs_length
lcsr_exceeds = _impl.lcsr_exceeds
cognate_matrix = _impl.cognate_matrix

__all__ = ["BACKEND", "lcs_length", "lcsr_exceeds", "cognate_matrix"]
