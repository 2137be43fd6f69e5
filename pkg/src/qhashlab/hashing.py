"""The hash constructions: i.i.d., expander-walk, extractor-seeded, keyed.

Every instance freezes a variant, a message group G, a length t and a seed
set S = (s_1..s_t) of group elements; evaluation is then deterministic.

For the single-register variants the state of message g is

    (1/sqrt(t)) * sum_k chi_{s_k}(g) |k>,

i.e. the k-th seed selects the character chi_{s_k}(g) = exp(2*pi*i*<s_k, g>/m).
Under the alternative reading (one fixed character applied to g composed with
s_k) every term of the overlap sum collapses to the same unit-modulus constant
in an abelian group, forcing overlap 1 for all message pairs, so the
character-family form is the one implemented.

The extractor-seeded variant is the two-register state

    (1/sqrt(t*2^d)) * sum_i sum_j chi(Ext(embed(g o s_i), j)) |j>|i>,

with chi the exp(2*pi*i*z/2^m) character on m-bit outputs and `embed` the
index bijection from G into bitstrings. The keyed form shifts the message by
the key before hashing, so an identity key reproduces the unkeyed hash.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qhashlab.expander import (
    WalkRecord,
    margulis_graph,
    random_walk,
    walk_randomness_bits,
)
from qhashlab.extractor import ExtractorSpec
from qhashlab.groups import GroupElement, GroupMismatchError, GroupSpec, op_apply
from qhashlab.states import HashState, qubit_count

IID = "iid"
EXPANDER = "expander"
EXTRACTOR_SEEDED = "extractor_seeded"
VARIANTS = (IID, EXPANDER, EXTRACTOR_SEEDED)

# coefficient the 8-regular affine family's corollary states for t, versus
# the one its own tail bound yields; both are reported, neither is silently
# preferred
MARGULIS_LAMBDA_RATIO = 5.0 * math.sqrt(2.0) / 8.0
MARGULIS_COROLLARY_COEFF = 160.0 * math.sqrt(2.0) / 3.0


@dataclass(frozen=True, eq=False)
class QHFInstance:
    """A frozen hash construction; hash evaluation is pure and deterministic."""

    variant: str
    group: GroupSpec
    t: int
    seed_coords: np.ndarray  # (t, arity) int64, the set S
    extractor: ExtractorSpec | None = None
    source_k: float | None = None
    walk: WalkRecord | None = None
    walk_graph_n: int | None = None
    build_seed: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        coords = np.ascontiguousarray(self.seed_coords, dtype=np.int64)
        if coords.shape != (self.t, self.group.arity):
            raise ValueError(f"seed set shape {coords.shape} does not match t={self.t}")
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if coords.min() < 0 or coords.max() >= self.group.modulus:
            raise ValueError("seed coordinates must be reduced mod the group modulus")
        if self.variant == EXTRACTOR_SEEDED:
            if self.extractor is None:
                raise ValueError("extractor_seeded instance needs an ExtractorSpec")
            if (1 << self.extractor.input_bits) < self.group.order:
                raise ValueError("group does not embed into the extractor input bits")
        coords.setflags(write=False)
        object.__setattr__(self, "seed_coords", coords)

    @property
    def dimension(self) -> int:
        if self.variant == EXTRACTOR_SEEDED:
            return self.t * (1 << self.extractor.seed_bits)
        return self.t

    @property
    def seed_elements(self) -> tuple[GroupElement, ...]:
        return tuple(
            GroupElement(tuple(int(c) for c in row), self.group) for row in self.seed_coords
        )

    def hash(self, g: GroupElement) -> HashState:
        return hash_eval(self, g)


def build_iid(group: GroupSpec, t: int, seed: int) -> QHFInstance:
    """Instance with S drawn i.i.d. uniform from the group."""
    if t < 1:
        raise ValueError("t must be >= 1")
    rng = np.random.default_rng(seed)
    coords = group.sample_coords(rng, t)
    return QHFInstance(IID, group, t, coords, build_seed=seed)


def build_full_dual(group: GroupSpec) -> QHFInstance:
    """Deterministic instance with S = the whole group: t = |G| and every
    character used once, so distinct messages are exactly orthogonal."""
    return QHFInstance(IID, group, group.order, group.coords_matrix())


def build_expander(n: int, t: int, seed: int) -> QHFInstance:
    """Instance on Z_n x Z_n seeded by a random walk on the affine expander.

    Vertices are identified with messages through the index bijection; the t
    visited vertices become S and the walk is kept as provenance.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    graph = margulis_graph(n)
    walk = random_walk(graph, t, seed)
    group = GroupSpec.product(n)
    coords = np.stack(np.divmod(np.asarray(walk.visited, dtype=np.int64), n), axis=1)
    return QHFInstance(
        EXPANDER, group, t, coords, walk=walk, walk_graph_n=n, build_seed=seed
    )


def build_extractor_qhf(
    spec: ExtractorSpec,
    t: int,
    k: float,
    seed: int,
    group: GroupSpec | None = None,
) -> QHFInstance:
    """Extractor-seeded instance; S comes from a random flat k-source.

    The source support is drawn from the group's index range (2^ceil(k)
    points without replacement), then the t seeds are drawn from it with
    replacement. Defaults to the full-width group Z_{2^n}.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if group is None:
        group = GroupSpec.cyclic(1 << spec.input_bits)
    if group.order > (1 << spec.input_bits):
        raise ValueError("group does not embed into the extractor input bits")
    size = 1 << math.ceil(k)
    if size > group.order:
        raise ValueError(f"flat source needs {size} support points, group has {group.order}")
    rng = np.random.default_rng(seed)
    support = rng.choice(group.order, size=size, replace=False)
    draws = rng.choice(support, size=t, replace=True).astype(np.int64)
    if group.arity == 1:
        coords = draws[:, None]
    else:
        coords = np.stack(np.divmod(draws, group.modulus), axis=1)
    return QHFInstance(
        EXTRACTOR_SEEDED, group, t, coords,
        extractor=spec, source_k=float(k), build_seed=seed,
    )


def hash_eval(inst: QHFInstance, g: GroupElement) -> HashState:
    """The hash state of message g under a frozen instance."""
    if g.spec != inst.group:
        raise GroupMismatchError(f"message from {g.spec}, instance over {inst.group}")
    coords = np.asarray(g.coords, dtype=np.int64)
    if inst.variant == EXTRACTOR_SEEDED:
        amps = _extractor_amplitudes(inst, coords[None, :])[0]
    else:
        amps = _character_amplitudes(inst, coords[None, :])[0]
    return HashState(amps, label=f"{inst.variant}:g=({g})")


def keyed_hash(inst: QHFInstance, key: GroupElement, g: GroupElement) -> HashState:
    """Hash of g shifted by a secret key: extractor inputs become
    embed(g o key o s_i). The identity key reproduces :func:`hash_eval`."""
    if inst.variant != EXTRACTOR_SEEDED:
        raise ValueError(f"keyed hashing needs an extractor_seeded instance, not {inst.variant}")
    return hash_eval(inst, op_apply(g, key))


def all_states_matrix(inst: QHFInstance) -> np.ndarray:
    """Amplitude matrix over the whole group, one row per message in
    enumeration order; rows equal hash_eval amplitudes bit for bit."""
    coords = inst.group.coords_matrix()
    if inst.variant == EXTRACTOR_SEEDED:
        return _extractor_amplitudes(inst, coords)
    return _character_amplitudes(inst, coords)


def _character_amplitudes(inst: QHFInstance, msg_coords: np.ndarray) -> np.ndarray:
    m = inst.group.modulus
    phases = (msg_coords @ inst.seed_coords.T) % m
    return np.exp(2j * np.pi * phases / m) / math.sqrt(inst.t)


def _extractor_amplitudes(inst: QHFInstance, msg_coords: np.ndarray) -> np.ndarray:
    spec = inst.extractor
    group = inst.group
    n_msgs = msg_coords.shape[0]
    n_seeds = 1 << spec.seed_bits
    dim = inst.t * n_seeds
    # embed(g o s_i): shift every seed by the message, then index-encode
    shifted = (msg_coords[:, None, :] + inst.seed_coords[None, :, :]) % group.modulus
    if group.arity == 1:
        inputs = shifted[:, :, 0]
    else:
        inputs = shifted[:, :, 0] * group.modulus + shifted[:, :, 1]
    ys = np.tile(np.arange(n_seeds, dtype=np.uint64), inst.t)
    out = np.empty((n_msgs, dim), dtype=np.complex128)
    scale = 2j * np.pi / (1 << spec.output_bits)
    for row in range(n_msgs):
        xs = np.repeat(inputs[row].astype(np.uint64), n_seeds)
        ext = spec.eval_batch(xs, ys).astype(np.int64).reshape(inst.t, n_seeds)
        # state layout |j>|i>: flat index j*t + i
        out[row] = np.exp(scale * ext.T.ravel())
    return out / math.sqrt(dim)


@dataclass(frozen=True)
class PlannerReport:
    """Walk/seed length planning: both published formulas side by side.

    For expander mode t_paper uses the 1/delta scaling printed in the source
    theorem and t_rederived the 1/delta^2 scaling that substituting
    deviation = delta*t into the tail bound actually yields; extractor mode
    has a single formula, reported in both fields.
    """

    mode: str
    requested: float
    group_order: int | None
    target_order: int | None
    lambda_ratio: float | None
    t_paper: int
    t_rederived: int
    randomness_bits: int | None
    qubit_count: int | None
    bound_coefficient: float | None = None
    corollary_coefficient: float | None = None


def plan_t_expander(delta: float, group_order: int, lambda_ratio: float) -> PlannerReport:
    """Walk length for target resistance delta on a graph with normalized
    second eigenvalue lambda_ratio, messages = vertices = group_order."""
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    if not 0.0 <= lambda_ratio < 1.0:
        raise ValueError(f"lambda_ratio must lie in [0, 1), got {lambda_ratio}")
    if group_order < 2:
        raise ValueError("group order must be >= 2")
    gap = 1.0 - lambda_ratio
    log_term = math.log(4.0 * group_order)
    t_paper = math.ceil(20.0 / (gap * delta) * log_term)
    t_rederived = math.ceil(20.0 / (gap * delta**2) * log_term)
    return PlannerReport(
        mode=EXPANDER,
        requested=delta,
        group_order=group_order,
        target_order=None,
        lambda_ratio=lambda_ratio,
        t_paper=t_paper,
        t_rederived=t_rederived,
        randomness_bits=walk_randomness_bits(t_paper, 8, group_order),
        qubit_count=qubit_count(t_paper),
        bound_coefficient=20.0 / gap,
        corollary_coefficient=MARGULIS_COROLLARY_COEFF,
    )


def plan_t_extractor(
    eps: float, target_order: int, group_order: int | None = None,
    seed_bits: int | None = None,
) -> PlannerReport:
    """Seed-set size t = ceil((log2|H| + 1) / (2*eps^2)) for target set H."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if target_order < 2:
        raise ValueError("target order must be >= 2")
    t = math.ceil((math.log2(target_order) + 1.0) / (2.0 * eps**2))
    bits = None
    if group_order is not None:
        bits = t * math.ceil(math.log2(group_order))
    qubits = None
    if seed_bits is not None:
        qubits = qubit_count(t * (1 << seed_bits))
    return PlannerReport(
        mode=EXTRACTOR_SEEDED,
        requested=eps,
        group_order=group_order,
        target_order=target_order,
        lambda_ratio=None,
        t_paper=t,
        t_rederived=t,
        randomness_bits=bits,
        qubit_count=qubits,
    )


def randomness_budget(inst: QHFInstance) -> int:
    """Classical random bits consumed to instantiate the seed set."""
    if inst.variant == IID:
        return inst.t * _ceil_log2(inst.group.order)
    if inst.variant == EXPANDER:
        return walk_randomness_bits(inst.t, 8, inst.group.order)
    return inst.t * math.ceil(inst.source_k if inst.source_k is not None else 0)


def _ceil_log2(x: int) -> int:
    return (int(x) - 1).bit_length()
