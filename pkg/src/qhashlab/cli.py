"""Command-line front door.

Subcommands: graph spectrum, walk, ext test, qhf build/eval/plan/resist/
compare, mac sim. JSON is the canonical output format (CSV for histogram
and table exports). Every run echoes its effective config and master seed;
timestamps and wall time live in a separate `meta` field so payloads are
byte-identical across reruns. Exit codes: 0 ok, 2 usage/validation,
3 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from qhashlab import __version__, _kernels
from qhashlab import serialize
from qhashlab.expander import (
    MARGULIS_LAMBDA_BOUND,
    margulis_graph,
    random_walk,
    spectral_lambda,
)
from qhashlab.extractor import ExtractorSpec, quality_report
from qhashlab.groups import GroupSpec
from qhashlab.hashing import (
    EXPANDER,
    EXTRACTOR_SEEDED,
    IID,
    MARGULIS_LAMBDA_RATIO,
    build_expander,
    build_extractor_qhf,
    build_iid,
    plan_t_expander,
    plan_t_extractor,
    randomness_budget,
)
from qhashlab.mac import AttackerModel, MacScheme, forge_experiment
from qhashlab.resistance import compare_constructions, measure_resistance
from qhashlab.seeding import derive_seed
from qhashlab.states import overlap_matrix, qubit_count

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class CliError(ValueError):
    """Validation failure; rendered as a machine-readable error object."""

    def __init__(self, message: str, parameter: str | None = None):
        super().__init__(message)
        self.parameter = parameter


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors already printed
        return EXIT_USAGE if exc.code else EXIT_OK
    started = time.perf_counter()
    try:
        _merge_config_file(args)
        payload, csv_rows = args.handler(args)
        _emit(args, payload, csv_rows, started)
    except (CliError, ValueError) as exc:
        _print_error("validation", exc)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - boundary of the tool
        _print_error("runtime", exc)
        return EXIT_RUNTIME
    return EXIT_OK


def _print_error(code: str, exc: Exception) -> None:
    obj = {"error": {"code": code, "message": str(exc)}}
    param = getattr(exc, "parameter", None)
    if param:
        obj["error"]["parameter"] = param
    print(json.dumps(obj, sort_keys=True))


def _emit(args, payload, csv_rows, started) -> None:
    fmt = getattr(args, "format", "json") or "json"
    if fmt == "csv":
        if csv_rows is None:
            raise CliError("this command has no CSV encoding; use --format json")
        header, rows = csv_rows
        if args.out:
            serialize.write_csv(args.out, header, rows)
        else:
            print(",".join(header))
            for row in rows:
                print(",".join(str(v) for v in row))
        return
    obj = {
        "payload": serialize.to_jsonable(payload),
        "meta": {
            "tool": "qhashlab",
            "version": __version__,
            "kernel_backend": _kernels.backend(),
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "wall_time_s": time.perf_counter() - started,
        },
    }
    text = json.dumps(obj, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _merge_config_file(args) -> None:
    """Fill unset flags from the --config JSON file; flags take precedence."""
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        values = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config file {path}: {exc}", "config") from exc
    if not isinstance(values, dict):
        raise CliError("config file must hold a JSON object", "config")
    for key, value in values.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise CliError(f"missing required flag --{name}", name)


def parse_group(text: str) -> GroupSpec:
    """'Z257' or '257' -> cyclic; '5x5' or 'Z5xZ5' -> product."""
    s = str(text).strip().lower().replace("z_", "").replace("z", "")
    if "x" in s:
        left, _, right = s.partition("x")
        if left != right:
            raise CliError(f"product group must be square, got {text!r}", "group")
        return GroupSpec.product(int(left))
    return GroupSpec.cyclic(int(s))


def _parse_message(inst_group: GroupSpec, text: str):
    coords = [int(c) for c in str(text).split(",")]
    return inst_group.element(*coords)


def _effective(args, *names) -> dict:
    return {n: getattr(args, n.replace("-", "_"), None) for n in names}


# ---------------------------------------------------------------- handlers


def cmd_graph_spectrum(args):
    _require(args, "n")
    n = int(args.n)
    graph = margulis_graph(n)
    lam = spectral_lambda(graph, dense_limit=int(args.dense_limit))
    payload = {
        "V": graph.vertex_count,
        "d": graph.degree,
        "lambda": lam,
        "bound": MARGULIS_LAMBDA_BOUND,
        "satisfied": bool(lam <= MARGULIS_LAMBDA_BOUND + 1e-6),
        "config": _effective(args, "n", "dense_limit"),
        "seed": args.seed,
    }
    csv_rows = (
        ["V", "d", "lambda", "bound", "satisfied"],
        [[payload["V"], payload["d"], lam, MARGULIS_LAMBDA_BOUND, payload["satisfied"]]],
    )
    return payload, csv_rows


def cmd_walk(args):
    _require(args, "n", "t")
    graph = margulis_graph(int(args.n))
    walk = random_walk(graph, int(args.t), args.seed)
    payload = {
        "graph": {"n": int(args.n), "V": graph.vertex_count, "d": graph.degree},
        "start": walk.start,
        "labels": list(walk.labels),
        "visited": list(walk.visited),
        "config": _effective(args, "n", "t"),
        "seed": args.seed,
    }
    return payload, None


def cmd_ext_test(args):
    _require(args, "family", "n", "d", "m", "k", "sources")
    spec = ExtractorSpec(args.family, int(args.n), int(args.d), int(args.m))
    report = quality_report(spec, float(args.k), int(args.sources), args.seed)
    payload = {
        "max_distance": report.max_distance,
        "mean_distance": report.mean_distance,
        "lhl_bound": report.lhl_bound,
        "extractor": serialize.extractor_to_dict(spec),
        "config": _effective(args, "family", "n", "d", "m", "k", "sources"),
        "seed": args.seed,
    }
    return payload, None


def _build_instance(args):
    variant = args.variant
    if variant == IID:
        _require(args, "group")
        group = parse_group(args.group)
        if args.t is not None:
            t = int(args.t)
        else:
            _require(args, "plan-delta")
            lam = float(args.lambda_ratio) if args.lambda_ratio is not None else 0.0
            t = plan_t_expander(float(args.plan_delta), group.order, lam).t_paper
        return build_iid(group, t, args.seed)
    if variant == EXPANDER:
        _require(args, "group")
        group = parse_group(args.group)
        if group.kind != "product":
            raise CliError("expander variant needs a product group like 5x5", "group")
        if args.t is not None:
            t = int(args.t)
        else:
            _require(args, "plan-delta")
            lam = (
                float(args.lambda_ratio)
                if args.lambda_ratio is not None
                else MARGULIS_LAMBDA_RATIO
            )
            t = plan_t_expander(float(args.plan_delta), group.order, lam).t_paper
        return build_expander(group.modulus, t, args.seed)
    if variant == EXTRACTOR_SEEDED:
        _require(args, "ext-family", "ext-n", "ext-d", "ext-m", "k")
        spec = ExtractorSpec(args.ext_family, int(args.ext_n), int(args.ext_d), int(args.ext_m))
        group = parse_group(args.group) if args.group else None
        if args.t is not None:
            t = int(args.t)
        else:
            _require(args, "plan-eps")
            t = plan_t_extractor(float(args.plan_eps), 1 << int(args.ext_m)).t_paper
        return build_extractor_qhf(spec, t, float(args.k), args.seed, group=group)
    raise CliError(f"unknown variant {variant!r}", "variant")


def cmd_qhf_build(args):
    _require(args, "variant", "out")
    inst = _build_instance(args)
    serialize.save_instance(inst, args.out)
    payload = {
        "instance": serialize.instance_to_dict(inst),
        "written_to": str(args.out),
        "randomness_bits": randomness_budget(inst),
        "qubit_count": qubit_count(inst.dimension),
        "config": _effective(
            args, "variant", "group", "t", "plan-delta", "plan-eps",
            "lambda-ratio", "ext-family", "ext-n", "ext-d", "ext-m", "k",
        ),
        "seed": args.seed,
    }
    # the instance file is the artifact; print the report instead of rewriting it
    args.out = None
    return payload, None


def cmd_qhf_eval(args):
    _require(args, "instance", "msg")
    inst = serialize.load_instance(args.instance)
    msg = _parse_message(inst.group, args.msg)
    state = inst.hash(msg)
    payload = {
        "message": list(msg.coords),
        "state": serialize.state_to_dict(state),
        "config": _effective(args, "instance", "msg"),
        "seed": args.seed,
    }
    return payload, None


def cmd_qhf_plan(args):
    _require(args, "variant")
    if args.variant == EXPANDER:
        _require(args, "delta", "group", "lambda-ratio")
        report = plan_t_expander(float(args.delta), int(args.group), float(args.lambda_ratio))
    elif args.variant == EXTRACTOR_SEEDED:
        _require(args, "eps", "target")
        report = plan_t_extractor(float(args.eps), int(args.target))
    else:
        raise CliError(f"planner supports expander or extractor_seeded, not {args.variant!r}", "variant")
    payload = dataclasses.asdict(report)
    payload["config"] = _effective(args, "variant", "delta", "eps", "group", "target", "lambda-ratio")
    payload["seed"] = args.seed
    return payload, None


def cmd_qhf_resist(args):
    _require(args, "instance", "delta", "mode")
    inst = serialize.load_instance(args.instance)
    report = measure_resistance(
        inst,
        float(args.delta),
        strategy=args.mode,
        sample_count=int(args.samples) if args.samples is not None else None,
        seed=args.seed,
    )
    payload = report.to_payload()
    payload["config"] = _effective(args, "instance", "delta", "mode", "samples")
    payload["seed"] = args.seed
    if args.csv:
        serialize.write_csv(
            args.csv, ["bin_lower", "count"],
            serialize.histogram_rows(report.histogram, report.bin_width),
        )
    if args.matrix_csv:
        states = [inst.hash(g) for g in inst.group.elements()]
        matrix = overlap_matrix(states)
        serialize.write_csv(
            args.matrix_csv,
            [str(i) for i in range(matrix.shape[0])],
            serialize.overlap_matrix_rows(matrix),
        )
    csv_rows = (
        ["bin_lower", "count"],
        serialize.histogram_rows(report.histogram, report.bin_width),
    )
    return payload, csv_rows


def cmd_qhf_compare(args):
    _require(args, "spec", "delta")
    try:
        conf = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read comparison spec {args.spec}: {exc}", "spec") from exc
    group = parse_group(conf["group"])
    instances = []
    for i, entry in enumerate(conf.get("instances", [])):
        instances.append(_instance_from_entry(entry, group, args.seed, i))
    rows = compare_constructions(instances, float(args.delta), seed=args.seed)
    payload = {
        "group": str(group),
        "target_delta": float(args.delta),
        "rows": rows,
        "config": {"spec": str(args.spec), "delta": args.delta},
        "seed": args.seed,
    }
    header = ["variant", "t", "randomness_bits", "qubit_count", "max_overlap", "satisfied"]
    csv_rows = (header, [[row[h] for h in header] for row in rows])
    return payload, csv_rows


def _instance_from_entry(entry: dict, group: GroupSpec, master_seed: int, index: int):
    variant = entry.get("variant")
    seed = entry.get("seed", derive_seed(master_seed, "compare", index))
    t = int(entry["t"])
    if variant == IID:
        return build_iid(group, t, seed)
    if variant == EXPANDER:
        if group.kind != "product":
            raise CliError("expander rows need a product group", "spec")
        return build_expander(group.modulus, t, seed)
    if variant == EXTRACTOR_SEEDED:
        ext = entry["extractor"]
        spec = ExtractorSpec(
            ext["family"], int(ext["input_bits"]), int(ext["seed_bits"]), int(ext["output_bits"])
        )
        return build_extractor_qhf(spec, t, float(entry.get("k", ext["input_bits"])), seed, group=group)
    raise CliError(f"unknown variant {variant!r} in comparison spec", "spec")


def cmd_mac_sim(args):
    _require(args, "attacker", "trials")
    if args.scheme:
        scheme = serialize.load_scheme(args.scheme)
    else:
        _require(args, "instance", "epsilon")
        scheme = MacScheme(
            instance=serialize.load_instance(args.instance),
            epsilon=float(args.epsilon),
            tau=float(args.tau) if args.tau is not None else None,
            verify_mode=args.mode or "exact",
        )
    if args.tau is not None and args.scheme:
        scheme = MacScheme(
            instance=scheme.instance,
            epsilon=scheme.epsilon,
            tau=float(args.tau),
            verify_mode=args.mode or scheme.verify_mode,
            swap_reps=scheme.swap_reps,
            margin=scheme.margin,
        )
    attacker = AttackerModel(args.attacker, int(args.queries or 0))
    transcripts = [] if args.transcript else None
    report = forge_experiment(scheme, attacker, int(args.trials), args.seed, transcripts)
    if args.transcript:
        Path(args.transcript).write_text(
            json.dumps(serialize.to_jsonable(transcripts), indent=2) + "\n"
        )
    payload = dataclasses.asdict(report)
    payload["config"] = _effective(args, "scheme", "instance", "epsilon", "attacker", "queries", "trials", "tau", "mode")
    return payload, None


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhashlab",
        description="Quantum hash construction laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="master seed (64-bit)")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--config", default=None, help="JSON file with default flag values")

    graph = sub.add_parser("graph", help="expander graph tools").add_subparsers(
        dest="subcommand", required=True
    )
    spectrum = graph.add_parser("spectrum", help="second eigenvalue of the affine expander")
    spectrum.add_argument("--n", type=int, default=None, help="side length of Z_n x Z_n")
    spectrum.add_argument("--dense-limit", type=int, default=4096)
    common(spectrum)
    spectrum.set_defaults(handler=cmd_graph_spectrum)

    walk = sub.add_parser("walk", help="seeded random walk on the affine expander")
    walk.add_argument("--n", type=int, default=None)
    walk.add_argument("--t", type=int, default=None, help="walk length")
    common(walk)
    walk.set_defaults(handler=cmd_walk)

    ext = sub.add_parser("ext", help="extractor tools").add_subparsers(
        dest="subcommand", required=True
    )
    ext_test = ext.add_parser("test", help="brute-force extractor quality")
    ext_test.add_argument("--family", choices=["hadamard", "lhl"], default=None)
    ext_test.add_argument("--n", type=int, default=None)
    ext_test.add_argument("--d", type=int, default=None)
    ext_test.add_argument("--m", type=int, default=None)
    ext_test.add_argument("--k", type=float, default=None, help="source min-entropy")
    ext_test.add_argument("--sources", type=int, default=None)
    common(ext_test)
    ext_test.set_defaults(handler=cmd_ext_test)

    qhf = sub.add_parser("qhf", help="hash instances").add_subparsers(
        dest="subcommand", required=True
    )

    build = qhf.add_parser("build", help="build and persist an instance")
    build.add_argument("--variant", choices=[IID, EXPANDER, EXTRACTOR_SEEDED], default=None)
    build.add_argument("--group", default=None, help="Z257, 257 or 5x5")
    build.add_argument("--t", type=int, default=None)
    build.add_argument("--plan-delta", type=float, default=None)
    build.add_argument("--plan-eps", type=float, default=None)
    build.add_argument("--lambda-ratio", type=float, default=None)
    build.add_argument("--ext-family", choices=["hadamard", "lhl"], default=None)
    build.add_argument("--ext-n", type=int, default=None)
    build.add_argument("--ext-d", type=int, default=None)
    build.add_argument("--ext-m", type=int, default=None)
    build.add_argument("--k", type=float, default=None)
    common(build)
    build.set_defaults(handler=cmd_qhf_build)

    ev = qhf.add_parser("eval", help="hash one message")
    ev.add_argument("--instance", default=None)
    ev.add_argument("--msg", default=None, help="coordinates, e.g. 3 or 1,2")
    common(ev)
    ev.set_defaults(handler=cmd_qhf_eval)

    plan = qhf.add_parser("plan", help="walk/seed length planner")
    plan.add_argument("--variant", choices=[EXPANDER, EXTRACTOR_SEEDED], default=None)
    plan.add_argument("--delta", type=float, default=None)
    plan.add_argument("--eps", type=float, default=None)
    plan.add_argument("--group", type=int, default=None, help="group order |G|")
    plan.add_argument("--target", type=int, default=None, help="target order |H|")
    plan.add_argument("--lambda-ratio", type=float, default=None)
    common(plan)
    plan.set_defaults(handler=cmd_qhf_plan)

    resist = qhf.add_parser("resist", help="measure collision resistance")
    resist.add_argument("--instance", default=None)
    resist.add_argument("--delta", type=float, default=None)
    resist.add_argument("--mode", choices=["exhaustive", "sampled"], default=None)
    resist.add_argument("--samples", type=int, default=None)
    resist.add_argument("--csv", default=None, help="write the overlap histogram CSV here")
    resist.add_argument("--matrix-csv", default=None, help="write the full overlap matrix CSV here")
    common(resist)
    resist.set_defaults(handler=cmd_qhf_resist)

    compare = qhf.add_parser("compare", help="compare constructions on one group")
    compare.add_argument("--spec", default=None, help="JSON comparison spec")
    compare.add_argument("--delta", type=float, default=None)
    common(compare)
    compare.set_defaults(handler=cmd_qhf_compare)

    mac = sub.add_parser("mac", help="message authentication").add_subparsers(
        dest="subcommand", required=True
    )
    sim = mac.add_parser("sim", help="forgery experiment")
    sim.add_argument("--scheme", default=None, help="serialized MAC scheme JSON")
    sim.add_argument("--instance", default=None, help="instance JSON (with --epsilon)")
    sim.add_argument("--epsilon", type=float, default=None)
    sim.add_argument("--attacker", choices=list(ATTACKER_CHOICES), default=None)
    sim.add_argument("--queries", type=int, default=None)
    sim.add_argument("--trials", type=int, default=None)
    sim.add_argument("--tau", type=float, default=None)
    sim.add_argument("--mode", choices=["exact", "sampled"], default=None)
    sim.add_argument("--transcript", default=None, help="write per-game audit records here")
    common(sim)
    sim.set_defaults(handler=cmd_mac_sim)

    return parser


ATTACKER_CHOICES = ("random_state", "replay", "oracle_query")


if __name__ == "__main__":
    sys.exit(main())
