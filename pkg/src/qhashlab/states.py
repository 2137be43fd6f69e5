"""Quantum hash states as unit complex amplitude vectors.

No gate-level simulation: the SWAP test is realized through its closed-form
acceptance probability (1 + |<psi|phi>|^2)/2 plus Bernoulli sampling, which
is bit-exact and dimension-independent.
"""

from __future__ import annotations

import numpy as np

UNIT_NORM_TOL = 1e-9


class DimensionMismatchError(ValueError):
    """Raised when two states of different dimension are combined."""


class HashState:
    """Unit-norm complex amplitude vector; immutable after construction.

    The constructor normalizes its input and rejects vectors that cannot be
    normalized (all-zero or non-finite).
    """

    __slots__ = ("amplitudes", "label")

    def __init__(self, amplitudes, label: str | None = None):
        arr = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if arr.size == 0:
            raise ValueError("state needs at least one amplitude")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(arr)
        if norm == 0.0:
            raise ValueError("cannot normalize the all-zero vector")
        arr = arr / norm
        arr.setflags(write=False)
        self.amplitudes = arr
        self.label = label

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __repr__(self) -> str:
        tag = f" label={self.label!r}" if self.label else ""
        return f"HashState(dim={self.dim}{tag})"


def inner_product(psi: HashState, phi: HashState) -> complex:
    """<psi|phi>, conjugate-linear in the first argument."""
    if psi.dim != phi.dim:
        raise DimensionMismatchError(f"dimensions differ: {psi.dim} vs {phi.dim}")
    return complex(np.vdot(psi.amplitudes, phi.amplitudes))


def swap_test_prob(psi: HashState, phi: HashState) -> float:
    """Acceptance probability (1 + |<psi|phi>|^2) / 2, in [1/2, 1]."""
    return (1.0 + abs(inner_product(psi, phi)) ** 2) / 2.0


def swap_test_sample(psi: HashState, phi: HashState, reps: int, seed: int) -> int:
    """Number of accepting repetitions out of `reps`; deterministic per seed."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    p = swap_test_prob(psi, phi)
    rng = np.random.default_rng(seed)
    return int(rng.binomial(reps, p))


def qubit_count(state_dim: int) -> int:
    """Smallest s with 2^s >= state_dim: register size, and by the
    Holevo-Nayak bound the ceiling on classical bits the state can leak."""
    if state_dim < 1:
        raise ValueError(f"dimension must be >= 1, got {state_dim}")
    return (int(state_dim) - 1).bit_length()


def overlap_matrix(states: list[HashState]) -> np.ndarray:
    """Matrix of |<psi_i|psi_j>| over a list of equal-dimension states."""
    if not states:
        return np.zeros((0, 0))
    dims = {s.dim for s in states}
    if len(dims) > 1:
        raise DimensionMismatchError(f"mixed dimensions: {sorted(dims)}")
    a = np.stack([s.amplitudes for s in states])
    return np.abs(a @ a.conj().T)
