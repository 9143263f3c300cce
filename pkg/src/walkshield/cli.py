"""Command-line front end.

Subcommands write CSV outputs plus a ``manifest.json`` echoing the resolved
configuration into ``--out``. Exit codes: 0 ok, 2 config error, 3 capability
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__, datasets, spectral
from .epidemic import SimConfig, simulate
from .errors import CapabilityError, ConvergenceError, DomainError, WalkShieldError
from .graph import Graph, NodeSet, load_edge_list, remove_nodes
from .selection import METHODS, select
from .summary import build_summary, dump_summary
from .walks import DENSE_LIMIT, set_walk_count

log = logging.getLogger("walkshield")

EXIT_OK, EXIT_CONFIG, EXIT_CAPABILITY, EXIT_IO = 0, 2, 3, 4
BENCH_HEADER = ["method", "k", "t", "scan_s", "power_s", "profile_s", "greedy_s", "total_s"]
METRICS_HEADER = ["metric", "value"]


def _write_manifest(out: Path, command: str, args: argparse.Namespace, **results) -> None:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {"command": command, "version": __version__, "config": config, **results}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args) -> Graph:
    g = load_edge_list(args.input)
    rep = g.report
    if rep.self_loops or rep.duplicates:
        print(f"# cleaned input: {rep.self_loops} self-loops, {rep.duplicates} duplicate edges",
              file=sys.stderr)
    return g


def _eigendrop(g: Graph, picked, seed: int) -> float:
    lam = spectral.lambda_max(g, seed=seed).lambda_max
    if lam == 0.0:
        return float("nan")
    return spectral.eigendrop_percent(g, picked, seed=seed, base=lam)


def read_selection(path, g: Graph) -> NodeSet:
    """Map the external ids of a selection CSV onto g's internal ids."""
    index = {str(g.label(v)): v for v in range(g.n)}
    picked = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "external_id" not in reader.fieldnames:
            raise DomainError(f"{path}: not a selection file (need column external_id)")
        for row in reader:
            ext = row["external_id"]
            if ext not in index:
                raise DomainError(f"{path}: node {ext!r} is not in the graph")
            picked.append(index[ext])
    return NodeSet(tuple(picked))


def cmd_immunize(args) -> int:
    out = _outdir(args)
    g = _load(args)
    t = args.t
    if args.method in ("walk8", "walk6") and t > g.n:
        raise DomainError(f"--t {t} exceeds the node count {g.n}")
    start = time.perf_counter()
    res = select(g, args.method, args.k, t=t, seed=args.seed, gamma=args.gamma,
                 dense_limit=args.dense_limit)
    wall_ms = (time.perf_counter() - start) * 1000.0
    drop = _eigendrop(g, res.picked, args.seed)
    res.write_csv(out / "selection.csv", g)
    line = (f"method={args.method} k={len(res.picked)} t={t} "
            f"eigendrop={drop:.6f} wall_ms={wall_ms:.1f}")
    print(line)
    _write_manifest(out, "immunize", args, n=g.n, m=g.m, gamma=res.gamma,
                    walk_source=res.walk_source, eigendrop_percent=drop,
                    wall_ms=wall_ms, timings=res.timings,
                    outputs={"selection": "selection.csv"})
    return EXIT_OK


def evaluate_metrics(g: Graph, picked: NodeSet, seed: int = 0,
                     dense_limit: int = DENSE_LIMIT) -> dict:
    before = spectral.lambda_max(g, seed=seed).lambda_max
    after = spectral.lambda_max(remove_nodes(g, picked), seed=seed).lambda_max
    metrics = {
        "k": len(picked),
        "lambda_max_before": before,
        "lambda_max_after": after,
        "eigendrop_percent": (spectral.eigendrop_percent(g, picked, seed=seed, base=before)
                              if before > 0 else float("nan")),
    }
    try:
        metrics["trace_dominance_ratio_p8"] = spectral.trace_dominance_ratio(
            g, 8, dense_limit=min(dense_limit, spectral.DENSE_SPECTRUM_LIMIT), seed=seed)
    except (CapabilityError, DomainError) as exc:
        log.info("trace dominance ratio skipped: %s", exc)
        metrics["trace_dominance_ratio_p8"] = None
    try:
        metrics["walks_removed_p8"] = set_walk_count(g, picked, 8, dense_limit)
    except CapabilityError as exc:
        log.info("walk count skipped: %s", exc)
        metrics["walks_removed_p8"] = None
    return metrics


def cmd_evaluate(args) -> int:
    out = _outdir(args)
    g = _load(args)
    picked = read_selection(args.selection, g)
    metrics = evaluate_metrics(g, picked, args.seed, args.dense_limit)
    with open(out / "metrics.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(METRICS_HEADER)
        for key, value in metrics.items():
            w.writerow([key, "" if value is None else value])
    print(f"eigendrop={metrics['eigendrop_percent']:.6f}")
    _write_manifest(out, "evaluate", args, metrics=metrics, outputs={"metrics": "metrics.csv"})
    return EXIT_OK


def cmd_simulate(args) -> int:
    out = _outdir(args)
    g = _load(args)
    if args.selection:
        picked = read_selection(args.selection, g)
    elif args.k > 0:
        picked = select(g, args.method, args.k, t=args.t, seed=args.seed,
                        dense_limit=args.dense_limit).picked
    else:
        picked = NodeSet()
    cfg = SimConfig(beta=args.beta, delta=args.delta, steps=args.steps, model=args.model,
                    runs=args.runs, seed=args.seed, immunized=picked)
    trace = simulate(g, cfg)
    trace.write_csv(out / "trace.csv")
    print(f"s={trace.s:.6f} final_infected={trace.infected_fraction[-1]:.6f}")
    _write_manifest(out, "simulate", args, virus_strength=trace.s,
                    immunized=[g.label(v) for v in picked],
                    outputs={"trace": "trace.csv"})
    return EXIT_OK


def run_bench(g: Graph, methods, ks, ts, seed: int = 0, repeat: int = 1):
    """Timing rows for each (method, k, t) cell; best of ``repeat`` runs."""
    rows = []
    for method in methods:
        for t in (ts if method in ("walk8", "walk6") else [0]):
            for k in ks:
                best = None
                for _ in range(repeat):
                    tm = select(g, method, k, t=t, seed=seed).timings
                    if best is None or tm["total"] < best["total"]:
                        best = tm
                rows.append([method, k, t] + [best.get(p, 0.0) for p in
                                              ("scan", "power", "profile", "greedy", "total")])
    return rows


def cmd_bench(args) -> int:
    out = _outdir(args)
    g = _load(args)
    rows = run_bench(g, args.methods, args.k, args.t, args.seed, args.repeat)
    with open(out / "bench.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BENCH_HEADER)
        w.writerows(rows)
    _write_manifest(out, "bench", args, cells=len(rows), outputs={"bench": "bench.csv"})
    return EXIT_OK


def cmd_summarize(args) -> int:
    out = _outdir(args)
    g = _load(args)
    sg = build_summary(g, args.t, args.seed)
    dump_summary(sg, out / "superedges.csv", out / "partition.csv", g.labels)
    _write_manifest(out, "summarize", args,
                    outputs={"superedges": "superedges.csv", "partition": "partition.csv"})
    return EXIT_OK


def cmd_fetch(args) -> int:
    root = Path(args.data_dir) if args.data_dir else None
    path = datasets.fetch(args.name, root, args.sha256)
    print(path)
    return EXIT_OK


def _common(p: argparse.ArgumentParser, selection: bool = True) -> None:
    p.add_argument("--input", required=True, help="SNAP-style edge list (.txt or .gz)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.add_argument("--dense-limit", type=int, default=DENSE_LIMIT,
                   help="largest n for exact walk counting")
    if selection:
        p.add_argument("--method", choices=METHODS, default="walk8")
        p.add_argument("--k", type=int, default=10)
        p.add_argument("--t", type=int, default=1000, help="supernodes; 0 = exact counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkshield", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("immunize", help="select k nodes to immunize")
    _common(p)
    p.add_argument("--gamma", type=float, default=None, help="override the shield-value gamma")
    p.set_defaults(func=cmd_immunize)

    p = sub.add_parser("evaluate", help="eigendrop and walk metrics of a selection")
    _common(p, selection=False)
    p.add_argument("--selection", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", help="epidemic simulation on the immunized graph")
    _common(p)
    p.set_defaults(k=0)
    p.add_argument("--selection", default=None, help="use a selection CSV instead of --method")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--model", choices=("sir", "sis"), default="sir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time selection phases over a (method, k, t) grid")
    _common(p, selection=False)
    p.add_argument("--methods", nargs="*", choices=METHODS, default=["walk8"])
    p.add_argument("--k", nargs="*", type=int, default=[])
    p.add_argument("--t", nargs="*", type=int, default=[1000])
    p.add_argument("--repeat", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("summarize", help="dump a random summary graph as CSV")
    _common(p, selection=False)
    p.add_argument("--t", type=int, default=1000)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("fetch", help="download a SNAP dataset into IMMUNIZE_DATA_DIR")
    p.add_argument("name", choices=sorted(datasets.DATASETS))
    p.add_argument("--sha256", default=None)
    p.add_argument("--data-dir", default=None)
    p.set_defaults(func=cmd_fetch)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CapabilityError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, CapabilityError) and "summary" in str(exc):
            print("hint: pass --t > 0 to use the summary estimate", file=sys.stderr)
        return EXIT_CAPABILITY
    except (OSError, datasets.ChecksumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (WalkShieldError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
