"""Empirical collision-resistance measurement and verification experiments.

Pairwise overlaps |<psi(w)|psi(w')>| are streamed through blocked Gram
products; max, mean and a fixed-width histogram are reduced on the fly, so
the full |G| x |G| matrix is never materialized.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from qhashlab import _kernels
from qhashlab.hashing import QHFInstance, all_states_matrix, randomness_budget
from qhashlab.seeding import derive_seed
from qhashlab.states import qubit_count, swap_test_prob, swap_test_sample
from qhashlab.groups import GroupElement

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"

EXHAUSTIVE_MAX_ORDER = 4096
HISTOGRAM_BIN_WIDTH = 0.01
HISTOGRAM_BINS = 101  # [0, 0.01), ..., [1.00, 1.01); top bin catches 1 + eps
GRAM_BLOCK = 512


@dataclass(frozen=True)
class ResistanceReport:
    """Overlap statistics of one instance against a target bound."""

    instance: dict
    strategy: str
    sample_count: int | None
    target_delta: float
    seed: int
    max_overlap: float
    mean_overlap: float
    histogram: tuple[int, ...]
    bin_width: float
    pairs: int
    satisfied: bool
    wall_time_s: float

    def to_payload(self) -> dict:
        """Deterministic part of the report (wall time excluded)."""
        return {
            "instance": self.instance,
            "strategy": self.strategy,
            "sample_count": self.sample_count,
            "target_delta": self.target_delta,
            "seed": self.seed,
            "max_overlap": self.max_overlap,
            "mean_overlap": self.mean_overlap,
            "histogram": list(self.histogram),
            "bin_width": self.bin_width,
            "pairs": self.pairs,
            "satisfied": self.satisfied,
        }


def instance_descriptor(inst: QHFInstance) -> dict:
    return {
        "variant": inst.variant,
        "group": str(inst.group),
        "t": inst.t,
        "dimension": inst.dimension,
        "build_seed": inst.build_seed,
    }


def measure_resistance(
    inst: QHFInstance,
    target_delta: float,
    strategy: str = EXHAUSTIVE,
    sample_count: int | None = None,
    seed: int = 0,
) -> ResistanceReport:
    """Overlap statistics over message pairs; satisfied = (max <= target).

    Exhaustive mode covers all |G|(|G|-1)/2 unordered pairs and requires
    |G| <= 4096; sampled mode draws `sample_count` uniform distinct pairs.
    """
    started = time.perf_counter()
    if strategy == EXHAUSTIVE:
        if inst.group.order > EXHAUSTIVE_MAX_ORDER:
            raise ValueError(
                f"group order {inst.group.order} exceeds exhaustive limit {EXHAUSTIVE_MAX_ORDER}"
            )
        vmax, vmean, hist, pairs = _exhaustive_stats(all_states_matrix(inst))
    elif strategy == SAMPLED:
        if sample_count is None or sample_count < 1:
            raise ValueError("sampled mode needs a positive sample_count")
        vmax, vmean, hist, pairs = _sampled_stats(inst, sample_count, seed)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return ResistanceReport(
        instance=instance_descriptor(inst),
        strategy=strategy,
        sample_count=sample_count if strategy == SAMPLED else None,
        target_delta=float(target_delta),
        seed=seed,
        max_overlap=vmax,
        mean_overlap=vmean,
        histogram=hist,
        bin_width=HISTOGRAM_BIN_WIDTH,
        pairs=pairs,
        satisfied=bool(vmax <= target_delta),
        wall_time_s=time.perf_counter() - started,
    )


def _exhaustive_stats(states: np.ndarray) -> tuple[float, float, tuple[int, ...], int]:
    n = states.shape[0]
    hist = np.zeros(HISTOGRAM_BINS, dtype=np.int64)
    vmax, vsum, count = 0.0, 0.0, 0
    conj = states.conj()
    for r0 in range(0, n, GRAM_BLOCK):
        r1 = min(r0 + GRAM_BLOCK, n)
        for c0 in range(r0, n, GRAM_BLOCK):
            c1 = min(c0 + GRAM_BLOCK, n)
            gram = np.ascontiguousarray(states[r0:r1] @ conj[c0:c1].T)
            bmax, bsum, bcnt = _kernels.block_overlap_stats(
                gram, c0 == r0, hist, 1.0 / HISTOGRAM_BIN_WIDTH
            )
            vmax = max(vmax, bmax)
            vsum += bsum
            count += bcnt
    return float(vmax), float(vsum / count), tuple(int(c) for c in hist), count


def _sampled_stats(
    inst: QHFInstance, sample_count: int, seed: int
) -> tuple[float, float, tuple[int, ...], int]:
    order = inst.group.order
    rng = np.random.default_rng(seed)
    a = rng.integers(0, order, size=sample_count)
    b = rng.integers(0, order - 1, size=sample_count)
    b += b >= a  # uniform over pairs with b != a
    states = all_states_matrix(inst)
    overlaps_c = np.einsum("ij,ij->i", states[a], states[b].conj())
    vals = np.sqrt(overlaps_c.real**2 + overlaps_c.imag**2)
    idx = np.minimum((vals / HISTOGRAM_BIN_WIDTH).astype(np.int64), HISTOGRAM_BINS - 1)
    hist = np.bincount(idx, minlength=HISTOGRAM_BINS)
    return (
        float(vals.max()),
        float(vals.mean()),
        tuple(int(c) for c in hist),
        sample_count,
    )


def compare_constructions(
    instances: Sequence[QHFInstance], target_delta: float, seed: int = 0
) -> list[dict]:
    """One measured row per instance, sorted by randomness bits ascending.

    All instances must live on the same group; each row reports the budget,
    the qubit count and the exhaustively measured max overlap.
    """
    if not instances:
        raise ValueError("need at least one instance")
    groups = {str(inst.group) for inst in instances}
    if len(groups) > 1:
        raise ValueError(f"instances live on different groups: {sorted(groups)}")
    rows = []
    for inst in instances:
        report = measure_resistance(inst, target_delta, EXHAUSTIVE, seed=seed)
        rows.append(
            {
                "variant": inst.variant,
                "t": inst.t,
                "randomness_bits": randomness_budget(inst),
                "qubit_count": qubit_count(inst.dimension),
                "max_overlap": report.max_overlap,
                "satisfied": report.satisfied,
            }
        )
    rows.sort(key=lambda r: (r["randomness_bits"], r["variant"]))
    return rows


def swap_verify_experiment(
    inst: QHFInstance,
    w: GroupElement,
    w_prime: GroupElement,
    reps: int,
    seed: int,
) -> dict:
    """SWAP-test check of one message pair: exact probability, Monte Carlo
    frequency over `reps` repetitions and the binomial z-score."""
    if reps < 100:
        raise ValueError("need reps >= 100 for a meaningful frequency")
    psi = inst.hash(w)
    phi = inst.hash(w_prime)
    exact = swap_test_prob(psi, phi)
    accepts = swap_test_sample(psi, phi, reps, seed)
    freq = accepts / reps
    sigma = (exact * (1.0 - exact) / reps) ** 0.5
    z = 0.0 if sigma == 0.0 else (freq - exact) / sigma
    return {
        "exact_prob": exact,
        "accept_count": accepts,
        "frequency": freq,
        "z_score": z,
        "reps": reps,
        "seed": seed,
    }


def seeds_sweep(
    builder: Callable[[int], QHFInstance],
    n_seeds: int,
    target_delta: float,
    master_seed: int,
    threshold: float = 0.95,
) -> dict:
    """Fraction of construction seeds whose instance meets the target bound.

    Operationalizes 'with high probability over construction randomness':
    builds n_seeds instances from derived seeds, measures each exhaustively
    and reports the satisfied fraction against the pass threshold.
    """
    if n_seeds < 1:
        raise ValueError("need at least one seed")
    max_overlaps = []
    failures = []
    for i in range(n_seeds):
        inst = builder(derive_seed(master_seed, "sweep", i))
        report = measure_resistance(inst, target_delta, EXHAUSTIVE)
        max_overlaps.append(report.max_overlap)
        if not report.satisfied:
            failures.append(i)
    satisfied = n_seeds - len(failures)
    return {
        "n_seeds": n_seeds,
        "target_delta": target_delta,
        "master_seed": master_seed,
        "satisfied": satisfied,
        "fraction": satisfied / n_seeds,
        "threshold": threshold,
        "passed": satisfied / n_seeds >= threshold,
        "failing_indices": failures,
        "max_overlaps": max_overlaps,
    }
