"""Desk-scale laboratory for quantum hash constructions.

Builds hash instances over finite abelian groups (i.i.d. seed sets,
expander random walks, extractor-seeded two-register states and their keyed
variant), evaluates them as unit complex amplitude vectors, and measures
collision resistance, randomness budgets and MAC forgery rates.
"""

from qhashlab.groups import Character, GroupElement, GroupMismatchError, GroupSpec
from qhashlab.states import (
    DimensionMismatchError,
    HashState,
    inner_product,
    qubit_count,
    swap_test_prob,
    swap_test_sample,
)
from qhashlab.expander import (
    GillmanParams,
    RotationGraph,
    WalkRecord,
    gillman_bound,
    margulis_graph,
    random_walk,
    spectral_lambda,
    walk_randomness_bits,
)
from qhashlab.extractor import (
    ExtractorSpec,
    SourceDistribution,
    extractor_quality,
    min_entropy,
    stat_distance,
)
from qhashlab.hashing import (
    PlannerReport,
    QHFInstance,
    build_expander,
    build_extractor_qhf,
    build_full_dual,
    build_iid,
    hash_eval,
    keyed_hash,
    plan_t_expander,
    plan_t_extractor,
    randomness_budget,
)
from qhashlab.resistance import (
    ResistanceReport,
    compare_constructions,
    measure_resistance,
    seeds_sweep,
    swap_verify_experiment,
)
from qhashlab.mac import (
    AttackerModel,
    ForgeryReport,
    MacScheme,
    forge_experiment,
    keygen,
    tag,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AttackerModel",
    "Character",
    "DimensionMismatchError",
    "ExtractorSpec",
    "ForgeryReport",
    "GillmanParams",
    "GroupElement",
    "GroupMismatchError",
    "GroupSpec",
    "HashState",
    "MacScheme",
    "PlannerReport",
    "QHFInstance",
    "ResistanceReport",
    "RotationGraph",
    "SourceDistribution",
    "WalkRecord",
    "build_expander",
    "build_extractor_qhf",
    "build_full_dual",
    "build_iid",
    "compare_constructions",
    "extractor_quality",
    "forge_experiment",
    "gillman_bound",
    "hash_eval",
    "inner_product",
    "keyed_hash",
    "keygen",
    "margulis_graph",
    "measure_resistance",
    "min_entropy",
    "plan_t_expander",
    "plan_t_extractor",
    "qubit_count",
    "random_walk",
    "randomness_budget",
    "seeds_sweep",
    "spectral_lambda",
    "stat_distance",
    "swap_test_prob",
    "swap_test_sample",
    "swap_verify_experiment",
    "tag",
    "verify",
    "walk_randomness_bits",
]
