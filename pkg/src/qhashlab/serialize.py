"""JSON/CSV persistence: canonical encoding, instances, schemes, states.

Canonical JSON is sorted-key, minimal-separator, ASCII; floats use Python's
shortest round-trip repr, so identical payloads are byte-identical and every
numeric survives a round trip at full precision.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from qhashlab.expander import margulis_graph, walk_from_labels
from qhashlab.extractor import ExtractorSpec
from qhashlab.groups import GroupSpec
from qhashlab.hashing import EXPANDER, EXTRACTOR_SEEDED, QHFInstance
from qhashlab.mac import MacScheme
from qhashlab.states import HashState


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays so json can encode them."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def canonical_dumps(payload) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, separators=(",", ":"))


def group_to_dict(spec: GroupSpec) -> dict:
    return {"kind": spec.kind, "modulus": spec.modulus}


def group_from_dict(d: dict) -> GroupSpec:
    return GroupSpec(d["kind"], int(d["modulus"]))


def extractor_to_dict(spec: ExtractorSpec) -> dict:
    return {
        "family": spec.family,
        "input_bits": spec.input_bits,
        "seed_bits": spec.seed_bits,
        "output_bits": spec.output_bits,
        "poly": spec.poly,
    }


def extractor_from_dict(d: dict) -> ExtractorSpec:
    return ExtractorSpec(d["family"], int(d["input_bits"]), int(d["seed_bits"]), int(d["output_bits"]))


def instance_to_dict(inst: QHFInstance) -> dict:
    out = {
        "kind": "qhf_instance",
        "variant": inst.variant,
        "group": group_to_dict(inst.group),
        "t": inst.t,
        "seed_set": [list(map(int, row)) for row in inst.seed_coords],
        "dimension": inst.dimension,
        "build_seed": inst.build_seed,
        "extractor": extractor_to_dict(inst.extractor) if inst.extractor else None,
        "source_k": inst.source_k,
        "walk": None,
    }
    if inst.walk is not None:
        out["walk"] = {
            "graph_n": inst.walk_graph_n,
            "start": inst.walk.start,
            "labels": list(inst.walk.labels),
        }
    return out


def instance_from_dict(d: dict) -> QHFInstance:
    if d.get("kind") != "qhf_instance":
        raise ValueError("not a serialized hash instance")
    group = group_from_dict(d["group"])
    coords = np.asarray(d["seed_set"], dtype=np.int64).reshape(int(d["t"]), group.arity)
    walk = None
    walk_n = None
    if d.get("walk"):
        walk_n = int(d["walk"]["graph_n"])
        start = int(d["walk"]["start"])
        labels = tuple(int(x) for x in d["walk"]["labels"])
        walk = walk_from_labels(margulis_graph(walk_n), start, labels)
        replayed = np.stack(
            np.divmod(np.asarray(walk.visited, dtype=np.int64), walk_n), axis=1
        )
        if not np.array_equal(replayed, coords):
            raise ValueError("walk provenance does not regenerate the stored seed set")
    ext = extractor_from_dict(d["extractor"]) if d.get("extractor") else None
    return QHFInstance(
        variant=d["variant"],
        group=group,
        t=int(d["t"]),
        seed_coords=coords,
        extractor=ext,
        source_k=d.get("source_k"),
        walk=walk,
        walk_graph_n=walk_n,
        build_seed=d.get("build_seed"),
    )


def save_instance(inst: QHFInstance, path: str | Path) -> None:
    Path(path).write_text(canonical_dumps(instance_to_dict(inst)) + "\n")


def load_instance(path: str | Path) -> QHFInstance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def scheme_to_dict(scheme: MacScheme) -> dict:
    return {
        "kind": "mac_scheme",
        "instance": instance_to_dict(scheme.instance),
        "epsilon": scheme.epsilon,
        "tau": scheme.tau,
        "verify_mode": scheme.verify_mode,
        "swap_reps": scheme.swap_reps,
        "margin": scheme.margin,
    }


def scheme_from_dict(d: dict) -> MacScheme:
    if d.get("kind") != "mac_scheme":
        raise ValueError("not a serialized MAC scheme")
    return MacScheme(
        instance=instance_from_dict(d["instance"]),
        epsilon=float(d["epsilon"]),
        tau=float(d["tau"]) if d.get("tau") is not None else None,
        verify_mode=d.get("verify_mode", "exact"),
        swap_reps=int(d.get("swap_reps", 10_000)),
        margin=float(d["margin"]) if d.get("margin") is not None else None,
    )


def save_scheme(scheme: MacScheme, path: str | Path) -> None:
    Path(path).write_text(canonical_dumps(scheme_to_dict(scheme)) + "\n")


def load_scheme(path: str | Path) -> MacScheme:
    return scheme_from_dict(json.loads(Path(path).read_text()))


def state_to_dict(state: HashState) -> dict:
    return {
        "dimension": state.dim,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
        "label": state.label,
    }


def histogram_rows(histogram, bin_width: float) -> list[list]:
    return [[round(i * bin_width, 10), int(c)] for i, c in enumerate(histogram)]


def write_csv(path: str | Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def overlap_matrix_rows(matrix: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in matrix]
