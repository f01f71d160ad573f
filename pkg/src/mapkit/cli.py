"""Command-line front end: metrics -> map -> dilation -> simulate -> compare.

Exit codes: 0 success, 1 compare mismatch, 2 input error, 3 deadlock.  All
commands are deterministic: identical inputs and flags produce byte-identical
outputs.  The ``grid`` command runs a full factorial experiment (applications
x topologies x algorithms x matrix kinds) into a stable directory layout plus
one ``experiments.csv``.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import quality as quality_mod
from . import simkernel, trace as trace_mod
from .comm import load_matrix_csv, compute_metrics
from .mapping import (ALGORITHMS, OBLIVIOUS_ALGORITHMS, default_seed,
                      format_mapping, generate_mapping, read_mapping, write_mapping)
from .topology import DEFAULT_LINK_TABLE, LinkSpec, Topology, build_topology

TOPOLOGY_CHOICES = ("mesh", "torus", "haec")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except simkernel.DeadlockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError, simkernel.SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapkit",
        description="Process mapping toolkit for 3-D topologies: matrix metrics, "
                    "mapping generation, dilation scoring, trace-replay simulation.")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("metrics", help="communication-matrix statistics as JSON")
    p.add_argument("--matrix", required=True, help="matrix CSV file")
    p.add_argument("--kind", choices=("count", "volume"), default="count")
    p.add_argument("--ks", default="", help="comma-separated block counts for sp(k)")
    p.add_argument("--csv", default=None, help="also write a one-row CSV summary here")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("map", help="generate a mapping file")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--matrix", default="none",
                   help="matrix CSV file; 'none' for oblivious algorithms")
    p.add_argument("--kind", choices=("count", "volume"), default="count")
    _topology_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="mapping file path (default stdout)")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("dilation", help="score a mapping against a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--kind", choices=("count", "volume"), default="count")
    p.add_argument("--mapping", required=True, help="mapping file")
    _topology_flags(p)
    p.add_argument("--csv", default=None, help="also write a one-row CSV summary here")
    p.set_defaults(func=cmd_dilation)

    p = sub.add_parser("simulate", help="replay a trace on a mapped topology")
    p.add_argument("--trace", required=True)
    p.add_argument("--mapping", required=True)
    _topology_flags(p)
    _model_flags(p)
    p.add_argument("--out", default=None, help="report JSON path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="check a pre report against a post report")
    p.add_argument("--pre", required=True, help="quality report JSON")
    p.add_argument("--post", required=True, help="simulation report JSON")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("grid", help="run a factorial experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_grid)
    return parser


def _topology_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topology", choices=TOPOLOGY_CHOICES, default="mesh")
    p.add_argument("--dims", default=None, help="grid extents X,Y,Z (default 4,4,4)")
    p.add_argument("--wireless-full", action="store_true",
                   help="haec: wireless links between all board pairs")
    p.add_argument("--config", default=None,
                   help="JSON run-config supplying topology/model defaults")


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--packet-bytes", type=int, default=None)
    p.add_argument("--no-reliability", action="store_true",
                   help="disable BER-driven serialization inflation")
    p.add_argument("--coll-delay", type=float, default=None,
                   help="fixed minimum collective delay in seconds")


def _parse_dims(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--dims expects X,Y,Z, got {text!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def _load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _links_from_config(section: dict) -> dict[str, LinkSpec]:
    table = dict(DEFAULT_LINK_TABLE)
    for kind, spec in section.items():
        if kind not in table:
            raise ValueError(f"unknown link kind {kind!r} in config")
        base = table[kind]
        table[kind] = LinkSpec(
            kind,
            bandwidth=float(spec.get("bandwidth", base.bandwidth)),
            latency=float(spec.get("latency", base.latency)),
            bit_error_rate=float(spec.get("bit_error_rate", base.bit_error_rate)),
        )
    return table


def _topology_from_args(args) -> Topology:
    cfg = _load_config(args.config) if args.config else {}
    tcfg = cfg.get("topology", {})
    if args.dims is not None:
        dims = _parse_dims(args.dims)
    else:
        dims = tuple(tcfg.get("dims", (4, 4, 4)))
    links = _links_from_config(tcfg.get("links", {}))
    wireless_full = args.wireless_full or bool(tcfg.get("wireless_full", False))
    return build_topology(args.topology, dims, links, wireless_full)


def _model_from_args(args) -> simkernel.ModelConfig:
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    mcfg = cfg.get("model", {})
    packet = args.packet_bytes if args.packet_bytes is not None \
        else int(mcfg.get("packet_bytes", 4096))
    reliability = not args.no_reliability and bool(mcfg.get("reliability_inflation", True))
    delay = args.coll_delay if args.coll_delay is not None \
        else float(mcfg.get("collective_min_delay", 0.0))
    return simkernel.ModelConfig(packet_bytes=packet, reliability_inflation=reliability,
                                 collective_min_delay=delay)


def _emit_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------

def cmd_metrics(args) -> int:
    matrix = load_matrix_csv(args.matrix, args.kind)
    ks = tuple(int(k) for k in args.ks.split(",") if k.strip())
    report = compute_metrics(matrix, ks)
    _emit_json(report.as_dict(), None)
    if args.csv:
        row = report.as_dict()
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(row.keys())
            writer.writerow(_csv_cell(v) for v in row.values())
    return 0


def _csv_cell(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def cmd_map(args) -> int:
    topology = _topology_from_args(args)
    matrix = None
    if args.matrix != "none":
        matrix = load_matrix_csv(args.matrix, args.kind)
    mapping = generate_mapping(args.algorithm, topology, matrix, args.seed)
    if args.out:
        write_mapping(mapping, args.out)
    else:
        sys.stdout.write(format_mapping(mapping))
    return 0


def cmd_dilation(args) -> int:
    topology = _topology_from_args(args)
    matrix = load_matrix_csv(args.matrix, args.kind)
    mapping = read_mapping(args.mapping, topology)
    report = quality_mod.quality_report(matrix, mapping, topology)
    _emit_json(report.as_dict(), None)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(quality_mod.CSV_HEADER)
            writer.writerow(report.csv_row())
    return 0


def cmd_simulate(args) -> int:
    topology = _topology_from_args(args)
    mapping = read_mapping(args.mapping, topology)
    tr = trace_mod.load_trace(args.trace)
    config = _model_from_args(args)
    report = simkernel.simulate(tr, mapping, topology, config)
    text = report.canonical_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    with open(args.pre, "r", encoding="utf-8") as fh:
        pre = json.load(fh)
    with open(args.post, "r", encoding="utf-8") as fh:
        post = json.load(fh)
    mismatches = []
    if pre.get("dilation") != post.get("post_dilation"):
        mismatches.append(("dilation", pre.get("dilation"), post.get("post_dilation")))
    if pre.get("matrix") == "volume" and pre.get("total_weight") != post.get("total_bytes"):
        mismatches.append(("total_bytes", pre.get("total_weight"), post.get("total_bytes")))
    if pre.get("matrix") == "count" and pre.get("total_weight") != post.get("msg_count"):
        mismatches.append(("msg_count", pre.get("total_weight"), post.get("msg_count")))
    if not mismatches:
        print("OK")
        return 0
    for name, a, b in mismatches:
        print(f"MISMATCH {name}: pre={a} post={b}")
    return 1


GRID_CSV_HEADER = ["application", "topology", "algorithm", "matrix", "dilation",
                   "total_hops", "avg_hops", "comm_model_time", "p2p_cost",
                   "parallel_cost"]


def cmd_grid(args) -> int:
    cfg = _load_config(args.config)
    out_dir = cfg.get("out", "results")
    seed = cfg.get("seed")
    if seed is None:
        seed = default_seed()

    tcfg = cfg.get("topology", {})
    dims = tuple(tcfg.get("dims", (4, 4, 4)))
    links = _links_from_config(tcfg.get("links", {}))
    wireless_full = bool(tcfg.get("wireless_full", False))

    mcfg = cfg.get("model", {})
    model = simkernel.ModelConfig(
        packet_bytes=int(mcfg.get("packet_bytes", 4096)),
        reliability_inflation=bool(mcfg.get("reliability_inflation", True)),
        collective_min_delay=float(mcfg.get("collective_min_delay", 0.0)),
    )

    gcfg = cfg.get("grid", {})
    algorithms = list(gcfg.get("algorithms", ALGORITHMS))
    kinds = list(gcfg.get("matrix_kinds", ("count", "volume")))
    topologies = list(gcfg.get("topologies", TOPOLOGY_CHOICES))
    apps = cfg.get("apps", [])
    if not apps:
        raise ValueError("config lists no apps")
    if not algorithms or not kinds or not topologies:
        raise ValueError("grid sections (algorithms, matrix_kinds, topologies) "
                         "must be non-empty")
    for name in algorithms:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r} in grid")
    for kind in kinds:
        if kind not in ("count", "volume"):
            raise ValueError(f"unknown matrix kind {kind!r} in grid")
    for tk in topologies:
        if tk not in TOPOLOGY_CHOICES:
            raise ValueError(f"unknown topology {tk!r} in grid")

    base = os.path.dirname(os.path.abspath(args.config))

    def resolve(path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(base, path)

    prepared = []
    for app in apps:
        name = app["name"]
        tr = trace_mod.load_trace(resolve(app["trace"]))
        count_m, volume_m = trace_mod.trace_matrices(tr)
        if "matrix_count" in app:
            count_m = load_matrix_csv(resolve(app["matrix_count"]), "count")
        if "matrix_volume" in app:
            volume_m = load_matrix_csv(resolve(app["matrix_volume"]), "volume")
        n = dims[0] * dims[1] * dims[2]
        if count_m.n != n or volume_m.n != n:
            raise ValueError(f"app {name!r}: matrix size {count_m.n} does not "
                             f"match dims {dims} ({n} nodes)")
        prepared.append((name, tr, {"count": count_m, "volume": volume_m}))
    prepared.sort(key=lambda item: item[0])

    topo_cache = {tk: build_topology(tk, dims, links, wireless_full)
                  for tk in sorted(set(topologies))}

    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for name, tr, matrices in prepared:
        for tk in sorted(topologies):
            topology = topo_cache[tk]
            cell_dir = os.path.join(out_dir, name, tk)
            os.makedirs(cell_dir, exist_ok=True)
            for algorithm in sorted(algorithms):
                for kind in sorted(kinds):
                    matrix = matrices[kind]
                    mapping = generate_mapping(
                        algorithm, topology,
                        None if algorithm in OBLIVIOUS_ALGORITHMS else matrix,
                        seed)
                    stem = os.path.join(cell_dir, f"{algorithm}-{kind}")
                    write_mapping(mapping, stem + ".map")
                    run_id = f"{name}/{tk}/{algorithm}-{kind}"
                    qreport = quality_mod.quality_report(
                        matrix, mapping, topology, app=name, run_id=run_id)
                    _emit_json(qreport.as_dict(), stem + ".quality.json")
                    sreport = simkernel.simulate(tr, mapping, topology, model)
                    with open(stem + ".sim.json", "w", encoding="utf-8") as fh:
                        fh.write(sreport.canonical_json() + "\n")
                    rows.append([name, tk, algorithm, kind,
                                 repr(qreport.dilation), repr(qreport.total_hops),
                                 repr(qreport.avg_hops),
                                 repr(sreport.comm_model_time),
                                 repr(sreport.p2p_cost),
                                 repr(sreport.parallel_cost)])

    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    csv_path = os.path.join(out_dir, "experiments.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GRID_CSV_HEADER)
        writer.writerows(rows)
    print(f"{len(rows)} rows -> {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
