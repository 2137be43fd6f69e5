"""Message authentication on keyed hash states: tagging, verification,
and forgery experiments against a limited attacker.

The verifier is realized two ways. Exact mode recomputes the tag and
thresholds the squared overlap at tau^2, so honest tags are always accepted.
Sampled mode models a physical verifier: R SWAP-test repetitions, accept
when the accept frequency reaches (1 + tau^2)/2 - margin.

The forgery game is the residual classical one: the attacker never learns
anything useful about an unqueried key, so it must output a tag state cold.
Quantum-storage adversaries are out of scope; the published bound
eps + eps^(2^s + 1) is computed for side-by-side display only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qhashlab.groups import GroupElement, GroupSpec
from qhashlab.hashing import EXTRACTOR_SEEDED, QHFInstance, keyed_hash
from qhashlab.seeding import make_rng
from qhashlab.states import HashState, inner_product, qubit_count, swap_test_prob

RANDOM_STATE = "random_state"
REPLAY = "replay"
ORACLE_QUERY = "oracle_query"
ATTACKER_KINDS = (RANDOM_STATE, REPLAY, ORACLE_QUERY)

ACCEPT = "Acc"
REJECT = "Rej"


@dataclass(frozen=True, eq=False)
class MacScheme:
    """Key generation, tagging and verification around one keyed instance.

    epsilon is the declared resistance of the underlying instance; the
    acceptance threshold tau must exceed it so honest overlap 1 and
    adversarial overlap <= epsilon stay separated. Default tau splits the
    difference: (1 + epsilon)/2.
    """

    instance: QHFInstance
    epsilon: float
    tau: float | None = None
    verify_mode: str = "exact"
    swap_reps: int = 10_000
    margin: float | None = None

    def __post_init__(self):
        if self.instance.variant != EXTRACTOR_SEEDED:
            raise ValueError("MAC schemes need an extractor_seeded instance")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.tau is None:
            object.__setattr__(self, "tau", (1.0 + self.epsilon) / 2.0)
        if not self.epsilon < self.tau <= 1.0:
            raise ValueError(f"tau must lie in (epsilon, 1], got {self.tau}")
        if self.verify_mode not in ("exact", "sampled"):
            raise ValueError(f"unknown verify mode {self.verify_mode!r}")
        if self.swap_reps < 1:
            raise ValueError("swap_reps must be >= 1")
        if self.margin is None:
            # 3 sigma of the worst-case binomial frequency noise
            object.__setattr__(self, "margin", 3.0 * (0.25 / self.swap_reps) ** 0.5)

    @property
    def key_group(self) -> GroupSpec:
        return self.instance.group


@dataclass(frozen=True)
class AttackerModel:
    """Forgery strategy and oracle budget; queried keys are recorded and the
    attacked key is never among them."""

    kind: str
    query_budget: int = 0

    def __post_init__(self):
        if self.kind not in ATTACKER_KINDS:
            raise ValueError(f"unknown attacker kind {self.kind!r}")
        if self.query_budget < 0:
            raise ValueError("query budget must be >= 0")


def keygen(scheme: MacScheme, seed: int) -> GroupElement:
    """Uniform key from the key group."""
    rng = np.random.default_rng(seed)
    coords = scheme.key_group.sample_coords(rng, 1)[0]
    return GroupElement(tuple(int(c) for c in coords), scheme.key_group)


def tag(scheme: MacScheme, key: GroupElement, x: GroupElement) -> HashState:
    """Tag of message x under `key`: the keyed hash state."""
    return keyed_hash(scheme.instance, key, x)


def verify(
    scheme: MacScheme,
    key: GroupElement,
    x: GroupElement,
    candidate: HashState,
    seed: int = 0,
) -> str:
    """Acc/Rej for a candidate tag; `seed` only matters in sampled mode."""
    expected = tag(scheme, key, x)
    if candidate.dim != expected.dim:
        raise ValueError(f"candidate dimension {candidate.dim} != tag dimension {expected.dim}")
    if scheme.verify_mode == "exact":
        ok = abs(inner_product(candidate, expected)) ** 2 >= scheme.tau**2
    else:
        p = swap_test_prob(candidate, expected)
        rng = np.random.default_rng(seed)
        freq = rng.binomial(scheme.swap_reps, p) / scheme.swap_reps
        ok = freq >= (1.0 + scheme.tau**2) / 2.0 - scheme.margin
    return ACCEPT if ok else REJECT


@dataclass(frozen=True)
class ForgeryReport:
    """Outcome of a batch of independent forgery games."""

    attacker: str
    query_budget: int
    trials: int
    seed: int
    accepted: int
    acceptance_rate: float
    mean_sq_overlap: float
    theorem_bound: float
    tau: float
    epsilon: float
    dimension: int


def theorem_forgery_bound(inst: QHFInstance, epsilon: float) -> float:
    """Published forgery bound eps + eps^(2^s + 1) with s the tag qubit count."""
    s = qubit_count(inst.dimension)
    return float(epsilon + epsilon ** (2**s + 1))


def forge_experiment(
    scheme: MacScheme,
    attacker: AttackerModel,
    trials: int,
    seed: int,
    transcripts: list | None = None,
) -> ForgeryReport:
    """Run independent forgery games and report the acceptance rate.

    Each game derives its own random stream: a fresh secret key, the
    attacker's moves, then verification of the forged (message, tag) pair.
    The secret key is asserted absent from the attacker's query transcript.
    Pass a list as `transcripts` to collect per-game audit records.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    inst = scheme.instance
    group = inst.group
    dim = inst.dimension
    accepted = 0
    sq_sum = 0.0
    for i in range(trials):
        rng = make_rng(seed, "trial", i)
        secret = _draw_element(group, rng)
        x, candidate, queried = _attack(scheme, attacker, secret, rng)
        assert secret not in queried, "attacker queried the attacked key"
        true_tag = tag(scheme, secret, x)
        sq = abs(inner_product(candidate, true_tag)) ** 2
        sq_sum += sq
        outcome = verify(scheme, secret, x, candidate, seed=rng.integers(2**63))
        if outcome == ACCEPT:
            accepted += 1
        if transcripts is not None:
            transcripts.append(
                {
                    "game": i,
                    "secret_key": list(secret.coords),
                    "message": list(x.coords),
                    "queried_keys": [list(k.coords) for k in queried],
                    "sq_overlap": sq,
                    "outcome": outcome,
                }
            )
    return ForgeryReport(
        attacker=attacker.kind,
        query_budget=attacker.query_budget,
        trials=trials,
        seed=seed,
        accepted=accepted,
        acceptance_rate=accepted / trials,
        mean_sq_overlap=sq_sum / trials,
        theorem_bound=theorem_forgery_bound(inst, scheme.epsilon),
        tau=scheme.tau,
        epsilon=scheme.epsilon,
        dimension=dim,
    )


def _attack(scheme, attacker, secret, rng):
    group = scheme.instance.group
    x = _draw_element(group, rng)
    if attacker.kind == RANDOM_STATE or attacker.query_budget == 0:
        return x, _haar_state(rng, scheme.instance.dimension), []
    queried = _query_keys(group, secret, attacker.query_budget, rng)
    if attacker.kind == REPLAY:
        # observe tags of random messages under the queried keys, then
        # replay the first transcript tag whose message matches the target
        candidate = None
        for key in queried:
            msg = _draw_element(group, rng)
            observed = tag(scheme, key, msg)
            if candidate is None and msg == x:
                candidate = observed
        if candidate is None:
            candidate = _haar_state(rng, scheme.instance.dimension)
        return x, candidate, queried
    # oracle_query: coherent averaging of the target message's tags under
    # the queried keys
    acc = np.zeros(scheme.instance.dimension, dtype=np.complex128)
    for key in queried:
        acc += tag(scheme, key, x).amplitudes
    if np.linalg.norm(acc) == 0.0:
        return x, _haar_state(rng, scheme.instance.dimension), queried
    return x, HashState(acc), queried


def _query_keys(group, secret, budget, rng):
    budget = min(budget, group.order - 1)
    # sample from the order-1 indices that skip the secret key
    secret_idx = group.to_index(secret)
    raw = rng.choice(group.order - 1, size=budget, replace=False)
    return [group.from_index(int(r) + (1 if r >= secret_idx else 0)) for r in raw]


def _draw_element(group, rng):
    coords = group.sample_coords(rng, 1)[0]
    return GroupElement(tuple(int(c) for c in coords), group)


def _haar_state(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return HashState(v)
