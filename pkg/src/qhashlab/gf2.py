"""Carry-less GF(2^n) arithmetic for n <= 16.

Field elements are ints whose bits are polynomial coefficients. Reduction
polynomials are the lexicographically smallest irreducible of each degree
(the table is re-derived by trial division in the test suite).
"""

from __future__ import annotations

import numpy as np

from qhashlab import _kernels

# degree -> reduction polynomial, bit i = coefficient of x^i
IRREDUCIBLE_POLY = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}

MAX_FIELD_BITS = max(IRREDUCIBLE_POLY)


def field_poly(nbits: int) -> int:
    """Reduction polynomial for GF(2^nbits)."""
    try:
        return IRREDUCIBLE_POLY[nbits]
    except KeyError:
        raise ValueError(f"no reduction polynomial for n={nbits} (1..{MAX_FIELD_BITS})") from None


def gf2_mul(a: int, b: int, nbits: int, poly: int | None = None) -> int:
    """Product of two GF(2^nbits) elements."""
    if poly is None:
        poly = field_poly(nbits)
    _check_range(a, nbits)
    _check_range(b, nbits)
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    for i in range(2 * nbits - 2, nbits - 1, -1):
        if (r >> i) & 1:
            r ^= poly << (i - nbits)
    return r


def gf2_mul_batch(a, b, nbits: int, poly: int | None = None) -> np.ndarray:
    """Elementwise GF(2^nbits) product of two equal-length integer arrays."""
    if poly is None:
        poly = field_poly(nbits)
    return _kernels.gf2_mul_batch(
        np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64), poly, nbits
    )


def _check_range(x: int, nbits: int) -> None:
    if not 0 <= x < (1 << nbits):
        raise ValueError(f"{x} is not a {nbits}-bit field element")
