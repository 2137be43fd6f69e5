# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: batched GF(2^n) multiply, walk stepping, overlap stats.

Semantics must match qhashlab._kernels.fallback exactly; the test suite
cross-checks both backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def gf2_mul_batch(a, b, unsigned long long poly, int nbits):
    """Elementwise carry-less multiply mod `poly` over uint64 arrays."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] aa = np.ascontiguousarray(a, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] bb = np.ascontiguousarray(b, dtype=np.uint64)
    if aa.shape[0] != bb.shape[0]:
        raise ValueError("operand arrays must have equal length")
    if not 1 <= nbits <= 31:
        raise ValueError("nbits must be in [1, 31]")
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] out = np.empty(aa.shape[0], dtype=np.uint64)
    cdef Py_ssize_t k, n = aa.shape[0]
    cdef int i
    cdef unsigned long long x, y, r
    for k in range(n):
        x = aa[k]
        y = bb[k]
        r = 0
        while y:
            if y & 1:
                r ^= x
            x <<= 1
            y >>= 1
        for i in range(2 * nbits - 2, nbits - 1, -1):
            if (r >> i) & 1:
                r ^= poly << (i - nbits)
        out[k] = r
    return out


def walk_path(neighbors, long long start, labels):
    """Chain of visited vertices: v_{k+1} = neighbors[v_k, labels[k]]."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] nbr = np.ascontiguousarray(neighbors, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(lab.shape[0], dtype=np.int64)
    cdef Py_ssize_t k, t = lab.shape[0]
    cdef long long v = start
    for k in range(t):
        v = nbr[v, lab[k]]
        out[k] = v
    return out


def block_overlap_stats(block, bint upper_only, hist, double inv_bin_width):
    """Fused |.| max/sum/histogram over a Gram block.

    With upper_only, only entries strictly above the diagonal are counted
    (the block is a diagonal block of the full Gram matrix).
    Returns (max, sum, count); `hist` is accumulated in place.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] blk = np.ascontiguousarray(block, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] h = hist
    cdef Py_ssize_t i, j, j0, idx
    cdef Py_ssize_t nr = blk.shape[0], nc = blk.shape[1], nbins = h.shape[0]
    cdef double re, im, v, vmax = 0.0, vsum = 0.0
    cdef long long cnt = 0
    for i in range(nr):
        j0 = i + 1 if upper_only else 0
        for j in range(j0, nc):
            re = blk[i, j].real
            im = blk[i, j].imag
            v = sqrt(re * re + im * im)
            if v > vmax:
                vmax = v
            vsum += v
            idx = <Py_ssize_t>(v * inv_bin_width)
            if idx >= nbins:
                idx = nbins - 1
            h[idx] += 1
            cnt += 1
    return vmax, vsum, cnt
