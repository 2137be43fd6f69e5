"""Pure-Python/numpy versions of the native kernels.

Same contracts as qhashlab._native; used when the compiled extension is
unavailable and as the reference side of the backend equivalence tests.
"""

from __future__ import annotations

import numpy as np


def gf2_mul_batch(a, b, poly: int, nbits: int) -> np.ndarray:
    """Elementwise carry-less multiply mod `poly` over uint64 arrays."""
    aa = np.ascontiguousarray(a, dtype=np.uint64)
    bb = np.ascontiguousarray(b, dtype=np.uint64)
    if aa.shape != bb.shape or aa.ndim != 1:
        raise ValueError("operand arrays must be 1-d and of equal length")
    if not 1 <= nbits <= 31:
        raise ValueError("nbits must be in [1, 31]")
    res = np.zeros_like(aa)
    for i in range(nbits):
        take = ((bb >> np.uint64(i)) & np.uint64(1)).astype(bool)
        res[take] ^= aa[take] << np.uint64(i)
    for i in range(2 * nbits - 2, nbits - 1, -1):
        take = ((res >> np.uint64(i)) & np.uint64(1)).astype(bool)
        res[take] ^= np.uint64(poly << (i - nbits))
    return res


def walk_path(neighbors, start: int, labels) -> np.ndarray:
    """Chain of visited vertices: v_{k+1} = neighbors[v_k, labels[k]]."""
    nbr = np.asarray(neighbors, dtype=np.int64)
    lab = np.asarray(labels, dtype=np.int64)
    out = np.empty(lab.shape[0], dtype=np.int64)
    v = int(start)
    for k in range(lab.shape[0]):
        v = int(nbr[v, lab[k]])
        out[k] = v
    return out


def block_overlap_stats(block, upper_only: bool, hist, inv_bin_width: float):
    """Fused |.| max/sum/histogram over a Gram block; see native docstring."""
    blk = np.asarray(block, dtype=np.complex128)
    mags = np.sqrt(blk.real**2 + blk.imag**2)
    if upper_only:
        iu = np.triu_indices(mags.shape[0], k=1, m=mags.shape[1])
        vals = mags[iu]
    else:
        vals = mags.ravel()
    if vals.size == 0:
        return 0.0, 0.0, 0
    idx = np.minimum((vals * inv_bin_width).astype(np.int64), len(hist) - 1)
    hist += np.bincount(idx, minlength=len(hist))
    return float(vals.max()), float(vals.sum()), int(vals.size)
