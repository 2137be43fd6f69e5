"""Kernel backend selection: compiled extension if present, else fallback."""

from __future__ import annotations

try:
    from qhashlab import _native as _impl

    BACKEND = "native"
except ImportError:
    from qhashlab._kernels import fallback as _impl

    BACKEND = "fallback"

gf2_mul_batch = _impl.gf2_mul_batch
walk_path = _impl.walk_path
block_overlap_stats = _impl.block_overlap_stats


def backend() -> str:
    """Name of the active kernel backend ('native' or 'fallback')."""
    return BACKEND
