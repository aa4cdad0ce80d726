"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting ``EKR_KIT_PURE=1``
forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("EKR_KIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

PSD = _pykernels.PSD
NEGATIVE_DIAGONAL = _pykernels.NEGATIVE_DIAGONAL
ZERO_DIAGONAL_OFFDIAG = _pykernels.ZERO_DIAGONAL_OFFDIAG
PIVOT_LARGEST = _pykernels.PIVOT_LARGEST
PIVOT_FIRST = _pykernels.PIVOT_FIRST

intersection_sizes = _impl.intersection_sizes
sym_bareiss = _impl.sym_bareiss
bareiss_rank = _impl.bareiss_rank
max_clique = _impl.max_clique

__all__ = [
    "BACKEND",
    "PSD",
    "NEGATIVE_DIAGONAL",
    "ZERO_DIAGONAL_OFFDIAG",
    "PIVOT_LARGEST",
    "PIVOT_FIRST",
    "intersection_sizes",
    "sym_bareiss",
    "bareiss_rank",
    "max_clique",
]
