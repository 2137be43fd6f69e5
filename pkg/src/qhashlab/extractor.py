"""Seeded bit-string extractors and brute-force quality measurement.

Two desk-scale families:

* ``hadamard``: one output bit, the parity of the bitwise AND of input and
  seed (the inner-product family).
* ``lhl``: multiply input by seed in GF(2^n) and keep the low m bits; the
  seed length equals the input length and the leftover-hash lemma bounds the
  output distance from uniform by 2^((m - k)/2 - 1) on any min-entropy-k
  source.

Quality is measured exactly: for explicit source distributions the output
distribution of Ext(X, U_d) is enumerated, no sampling error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qhashlab import gf2
from qhashlab.seeding import make_rng

HADAMARD = "hadamard"
LHL = "lhl"

ENUMERATION_LIMIT_BITS = 16
PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ExtractorSpec:
    """A function {0,1}^input_bits x {0,1}^seed_bits -> {0,1}^output_bits."""

    family: str
    input_bits: int
    seed_bits: int
    output_bits: int

    def __post_init__(self):
        if self.family not in (HADAMARD, LHL):
            raise ValueError(f"unknown extractor family {self.family!r}")
        if min(self.input_bits, self.seed_bits, self.output_bits) < 1:
            raise ValueError("bit widths must be positive")
        if self.output_bits > self.input_bits:
            raise ValueError("output cannot be longer than the input")
        if self.family == HADAMARD and self.output_bits != 1:
            raise ValueError("hadamard family emits exactly one bit")
        if self.family == LHL:
            if self.seed_bits != self.input_bits:
                raise ValueError("lhl family needs seed_bits == input_bits")
            gf2.field_poly(self.input_bits)  # raises if out of table range

    @property
    def poly(self) -> int | None:
        return gf2.field_poly(self.input_bits) if self.family == LHL else None

    def eval(self, x: int, y: int) -> int:
        return ext_eval(self, x, y)

    def eval_batch(self, xs, ys) -> np.ndarray:
        """Vectorized evaluation over paired integer arrays."""
        xs = np.asarray(xs, dtype=np.uint64)
        ys = np.asarray(ys, dtype=np.uint64)
        if self.family == LHL:
            prod = gf2.gf2_mul_batch(ys, xs, self.input_bits)
            return prod & np.uint64((1 << self.output_bits) - 1)
        return _parity(xs & ys)


def ext_eval(spec: ExtractorSpec, x: int, y: int) -> int:
    """Ext(x, y) for integers encoding bitstrings of the declared widths."""
    if not 0 <= x < (1 << spec.input_bits):
        raise ValueError(f"input {x} is not a {spec.input_bits}-bit string")
    if not 0 <= y < (1 << spec.seed_bits):
        raise ValueError(f"seed {y} is not a {spec.seed_bits}-bit string")
    if spec.family == LHL:
        return gf2.gf2_mul(y, x, spec.input_bits) & ((1 << spec.output_bits) - 1)
    return (x & y).bit_count() & 1


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return v & np.uint64(1)


@dataclass(frozen=True, eq=False)
class SourceDistribution:
    """Explicit distribution over {0,1}^bits as a length-2^bits table."""

    bits: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(self.probs, dtype=np.float64)
        if p.shape != (1 << self.bits,):
            raise ValueError(f"need 2^{self.bits} probabilities, got shape {p.shape}")
        if p.min() < 0.0:
            raise ValueError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @staticmethod
    def uniform(bits: int) -> "SourceDistribution":
        size = 1 << bits
        return SourceDistribution(bits, np.full(size, 1.0 / size))

    @staticmethod
    def point_mass(bits: int, x: int) -> "SourceDistribution":
        p = np.zeros(1 << bits)
        p[x] = 1.0
        return SourceDistribution(bits, p)

    @staticmethod
    def flat(bits: int, support) -> "SourceDistribution":
        """Uniform over a listed subset of {0,1}^bits."""
        supp = np.unique(np.asarray(support, dtype=np.int64))
        if supp.size == 0:
            raise ValueError("support must be non-empty")
        if supp.min() < 0 or supp.max() >= (1 << bits):
            raise ValueError("support points outside the universe")
        p = np.zeros(1 << bits)
        p[supp] = 1.0 / supp.size
        return SourceDistribution(bits, p)

    def support(self) -> np.ndarray:
        return np.nonzero(self.probs)[0]


def random_flat_source(bits: int, k: float, rng: np.random.Generator,
                       limit: int | None = None) -> SourceDistribution:
    """Flat source with 2^ceil(k) support points drawn without replacement.

    `limit` restricts the universe to [0, limit); non-integer k is rounded
    up, so the achieved min-entropy is ceil(k).
    """
    size = 1 << math.ceil(k)
    universe = (1 << bits) if limit is None else limit
    if size > universe:
        raise ValueError(f"flat source needs {size} support points, universe has {universe}")
    support = rng.choice(universe, size=size, replace=False)
    return SourceDistribution.flat(bits, support)


def min_entropy(dist: SourceDistribution) -> float:
    """-log2 of the most probable outcome."""
    return float(-np.log2(dist.probs.max()))


def stat_distance(p: SourceDistribution, q: SourceDistribution) -> float:
    """Half the L1 distance: the largest event-probability gap."""
    if p.bits != q.bits:
        raise ValueError(f"support universes differ: 2^{p.bits} vs 2^{q.bits}")
    return float(0.5 * np.abs(p.probs - q.probs).sum())


def output_distribution(spec: ExtractorSpec, source: SourceDistribution) -> SourceDistribution:
    """Exact distribution of Ext(X, U_d) by enumeration over supp(X) x seeds."""
    if source.bits != spec.input_bits:
        raise ValueError("source universe does not match the extractor input")
    _check_enumerable(spec)
    supp = source.support()
    n_seeds = 1 << spec.seed_bits
    seeds = np.arange(n_seeds, dtype=np.uint64)
    xs = np.repeat(supp.astype(np.uint64), n_seeds)
    ys = np.tile(seeds, supp.size)
    outs = spec.eval_batch(xs, ys).reshape(supp.size, n_seeds)
    probs = np.zeros(1 << spec.output_bits)
    weights = source.probs[supp] / n_seeds
    for row, w in zip(outs, weights):
        probs += w * np.bincount(row.astype(np.int64), minlength=probs.size)
    return SourceDistribution(spec.output_bits, probs / probs.sum())


def extractor_quality(spec: ExtractorSpec, k: float, sources: int, seed: int) -> float:
    """Max statistical distance from uniform over random flat k-sources.

    Each source gets its own derived seed, so the result is independent of
    evaluation order (and of any parallel split).
    """
    return quality_report(spec, k, sources, seed).max_distance


@dataclass(frozen=True)
class QualityReport:
    """Summary of an extractor quality measurement."""

    spec: ExtractorSpec
    k: float
    sources: int
    seed: int
    max_distance: float
    mean_distance: float
    lhl_bound: float


def quality_report(spec: ExtractorSpec, k: float, sources: int, seed: int) -> QualityReport:
    """Like :func:`extractor_quality` but with mean and the LHL reference bound."""
    if sources < 1:
        raise ValueError("need at least one source")
    _check_enumerable(spec)
    uniform_out = SourceDistribution.uniform(spec.output_bits)
    dists = np.empty(sources)
    for i in range(sources):
        rng = make_rng(seed, "flat-source", i)
        src = random_flat_source(spec.input_bits, k, rng)
        dists[i] = stat_distance(output_distribution(spec, src), uniform_out)
    return QualityReport(
        spec=spec,
        k=k,
        sources=sources,
        seed=seed,
        max_distance=float(dists.max()),
        mean_distance=float(dists.mean()),
        lhl_bound=lhl_distance_bound(spec.output_bits, k),
    )


def lhl_distance_bound(m: int, k: float) -> float:
    """Leftover-hash bound 2^((m - k)/2 - 1) for universal families."""
    return float(2.0 ** ((m - k) / 2.0 - 1.0))


def _check_enumerable(spec: ExtractorSpec) -> None:
    if spec.input_bits > ENUMERATION_LIMIT_BITS or spec.seed_bits > ENUMERATION_LIMIT_BITS:
        raise ValueError(
            f"instance too large for enumeration (n, d <= {ENUMERATION_LIMIT_BITS})"
        )
