"""Deterministic seed derivation for independent random streams.

Every stochastic component takes an explicit integer seed. Sub-streams are
derived by hashing (master seed, component label, index), so adding
parallelism or reordering work never changes what any component draws.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive_seed(master: int, label: str, index: int = 0) -> int:
    """Derive a 64-bit child seed from a master seed, a label and an index."""
    data = f"{int(master)}:{label}:{int(index)}".encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "little") & MASK64


def make_rng(master: int, label: str, index: int = 0) -> np.random.Generator:
    """Generator seeded by :func:`derive_seed` of the given coordinates."""
    return np.random.default_rng(derive_seed(master, label, index))
