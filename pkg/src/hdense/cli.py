"""Command-line front end.

Subcommands: stats, mine, decompose, dynamic, metrics, oracle, bench.
JSON goes to stdout for tooling; TSV outputs go to files (or stdout where
noted).  Exit codes: 0 ok, 2 parse/config error, 3 bound violation under
--assert-bounds, 4 resource limit.

All output is deterministic for a fixed seed; wall-clock fields are the one
exception, and HDENSE_STABLE_OUTPUT=1 zeroes them so byte-identical output
can be asserted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .decomposition import decompose_all
from .dynamic import DynamicState
from .hypergraph import EmptyInputError, Hypergraph, ParseError, VertexLabels, load_hypergraph
from .metrics import layer_quality
from .mining import dsm_all, dsm_flow, dsm_flow_plus, dsm_path
from .oracle import OracleSizeError, dense_set_from, oracle_egalitarian

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATION = 3
EXIT_RESOURCE = 4

MINERS = {
    "path": dsm_path,
    "flow": dsm_flow,
    "flow+": dsm_flow_plus,
    "all": dsm_all,
}


def _stable_output() -> bool:
    return os.environ.get("HDENSE_STABLE_OUTPUT", "") == "1"


def _millis(elapsed: float) -> float:
    return 0.0 if _stable_output() else round(elapsed * 1000.0, 3)


def _load(path: str, labels: bool) -> tuple[Hypergraph, VertexLabels]:
    with open(path, "r", encoding="utf-8") as handle:
        return load_hypergraph(handle, labels=labels)


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, default=str)
    sys.stdout.write("\n")


def _labels_of(table: VertexLabels, ids) -> list:
    return [table.of_id[u] for u in sorted(ids)]


def _thread_count(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("HDENSE_THREADS")
    return max(1, int(env)) if env else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_stats(args) -> int:
    h, _table = _load(args.input, args.labels)
    _emit(
        {
            "schema": 1,
            "n": h.n,
            "m": h.m,
            "d_e_max": h.d_e_max,
            "d_e_min": h.d_e_min,
            "m_over_n": round(h.m / h.n, 6),
            "d_e_avg": round(h.d_e_avg, 6),
            "duplicate_hyperedges": h.duplicate_edge_count(),
        }
    )
    return EXIT_OK


def cmd_mine(args) -> int:
    h, table = _load(args.input, args.labels)
    miner = MINERS[args.algo]
    start = time.perf_counter()
    result = miner(h, args.k, args.delta)
    elapsed = time.perf_counter() - start
    _emit(
        {
            "schema": 1,
            "k": args.k,
            "delta": args.delta,
            "algo": args.algo,
            "size": result.size,
            "vertices": _labels_of(table, result.vertices),
            "millis": _millis(elapsed),
        }
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    h, table = _load(args.input, args.labels)
    start = time.perf_counter()
    try:
        dense = (
            frozenset(range(h.n))
            if args.k == 0
            else dense_set_from(oracle_egalitarian(h, args.delta), args.k)
        )
    except OracleSizeError as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    elapsed = time.perf_counter() - start
    _emit(
        {
            "schema": 1,
            "k": args.k,
            "delta": args.delta,
            "algo": "oracle",
            "size": len(dense),
            "vertices": _labels_of(table, dense),
            "millis": _millis(elapsed),
        }
    )
    return EXIT_OK


def cmd_decompose(args) -> int:
    h, table = _load(args.input, args.labels)
    deltas = None if args.all_deltas else [args.delta]
    start = time.perf_counter()
    suite = decompose_all(h, deltas=deltas, algo=args.algo, threads=_thread_count(args))
    elapsed = time.perf_counter() - start
    if args.tsv_out:
        with open(args.tsv_out, "w", encoding="utf-8") as out:
            for delta, decomp in suite.items():
                for u in range(h.n):
                    out.write(f"{table.of_id[u]}\t{delta}\t{decomp.idn[u]}\n")
    summary = []
    for delta, decomp in suite.items():
        sizes = [
            {"k": k, "size": size}
            for k, size in decomp.layer_sizes()
            if size or k == 0
        ]
        summary.append(
            {
                "delta": delta,
                "k_max": decomp.k_max,
                "layers": sizes,
                "dsm_calls": decomp.dsm_calls,
            }
        )
    _emit(
        {
            "schema": 1,
            "algo": args.algo,
            "deltas": summary,
            "millis": _millis(elapsed),
        }
    )
    return EXIT_OK


def cmd_dynamic(args) -> int:
    h, table = _load(args.input, args.labels)
    state = DynamicState(h, deltas=[args.delta])
    timings = []
    with open(args.updates, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            op, _, rest = stripped.partition(" ")
            start = time.perf_counter()
            if op == "+":
                tokens = rest.replace(",", " ").split()
                if not tokens:
                    print(f"updates line {line_no}: empty insert", file=sys.stderr)
                    return EXIT_CONFIG
                ids = [
                    table.add(tok if args.labels else int(tok)) for tok in tokens
                ]
                state.insert_edge(ids)
            elif op == "-":
                state.delete_edge(int(rest.strip()))
            else:
                print(f"updates line {line_no}: unknown op {op!r}", file=sys.stderr)
                return EXIT_CONFIG
            timings.append((line_no, op, time.perf_counter() - start))
    if args.timing_out:
        with open(args.timing_out, "w", encoding="utf-8") as out:
            out.write("line\top\tmillis\n")
            for line_no, op, elapsed in timings:
                out.write(f"{line_no}\t{op}\t{_millis(elapsed)}\n")
    out = sys.stdout
    idn = state.idn_map(args.delta)
    for u in range(state.n):
        label = table.of_id[u] if u < len(table.of_id) else u
        out.write(f"{label}\t{args.delta}\t{idn[u]}\n")
    return EXIT_OK


def cmd_metrics(args) -> int:
    h, table = _load(args.input, args.labels)
    deltas = None if args.all_deltas else [args.delta]
    suite = decompose_all(h, deltas=deltas, algo="dsd+", threads=_thread_count(args))
    report = layer_quality(h, suite)
    payload = {"schema": 1, "deltas": []}
    violations: list[str] = []
    for delta, quality in report.items():
        violations.extend(quality.violations())
        payload["deltas"].append(
            {
                "delta": delta,
                "k_max": quality.k_max,
                "non_empty_ratio": round(quality.non_empty_ratio, 6),
                "avg_jaccard_distance": round(quality.avg_jaccard_distance, 6),
                "jaccard_defined": quality.jaccard_defined,
                "sat": round(quality.sat, 6),
                "cont": round(quality.cont, 6),
                "cont_defined": quality.cont_defined,
                "layers": [
                    {
                        "k": st.k,
                        "layer_size": st.layer_size,
                        "dense_size": st.dense_size,
                        "layer_rho_d": None
                        if st.layer_rho_d is None
                        else round(float(st.layer_rho_d), 6),
                        "rho_d": round(float(st.guarantee.rho_d), 6),
                        "rho": round(float(st.guarantee.rho), 6),
                        "theta": round(float(st.guarantee.theta), 6),
                        "f_k": round(float(st.guarantee.core_fraction), 6),
                        "conductance": None
                        if st.conductance is None
                        else round(float(st.conductance.phi), 6),
                        "conductance_bound": None
                        if st.conductance is None
                        else round(float(st.conductance.bound), 6),
                    }
                    for st in quality.layers
                ],
            }
        )
    payload["violations"] = violations
    _emit(payload)
    if args.assert_bounds and violations:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_bench(args) -> int:
    h, _table = _load(args.input, args.labels)
    rows = []
    for name in args.algos:
        miner = MINERS[name]
        status = "ok"
        millis = 0.0
        digest = ""
        try:
            miner(h, args.k, args.delta)  # warmup, excluded from timing
            start = time.perf_counter()
            result = miner(h, args.k, args.delta)
            elapsed = time.perf_counter() - start
            if args.timeout and elapsed > args.timeout:
                status = "UNM"
            millis = _millis(elapsed)
            blob = ",".join(str(u) for u in sorted(result.vertices)).encode()
            digest = hashlib.sha1(blob).hexdigest()[:12]
        except MemoryError:
            status = "OOM"
        rows.append((name, status, millis, digest))
    out = sys.stdout
    out.write("algo\tstatus\tmillis\tset_hash\n")
    for name, status, millis, digest in rows:
        out.write(f"{name}\t{status}\t{millis}\t{digest}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="hyperedge-list file")
    p.add_argument(
        "--labels",
        action="store_true",
        help="treat tokens as arbitrary labels instead of integers",
    )
    p.add_argument("--seed", type=int, default=0, help="seed (outputs are deterministic)")
    p.add_argument("--threads", type=int, default=None, help="parallelism cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdense",
        description="Density decomposition of hypergraphs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="dataset statistics")
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("mine", help="one dense subhypergraph")
    _add_common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--algo", choices=sorted(MINERS), default="all")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("oracle", help="brute-force dense subhypergraph (small inputs)")
    _add_common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("decompose", help="full density decomposition")
    _add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--delta", type=int)
    group.add_argument("--all-deltas", action="store_true")
    p.add_argument("--algo", choices=["dsd", "dsd+"], default="dsd+")
    p.add_argument("--tsv-out", help="write vertexLabel/delta/idn TSV here")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("dynamic", help="apply an update stream")
    _add_common(p)
    p.add_argument("--updates", required=True, help="update file: '+ v1 v2 ...' or '- edgeId'")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--timing-out", help="write per-step timing TSV here")
    p.set_defaults(func=cmd_dynamic)

    p = sub.add_parser("metrics", help="layer quality and bound report")
    _add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--delta", type=int)
    group.add_argument("--all-deltas", action="store_true")
    p.add_argument("--assert-bounds", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="relative miner timings")
    _add_common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--algos", nargs="+", choices=sorted(MINERS), default=sorted(MINERS))
    p.add_argument("--timeout", type=float, default=0.0, help="seconds; rows over it are UNM")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, EmptyInputError) as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"{exc.filename}: not found", file=sys.stderr)
        return EXIT_CONFIG
    except MemoryError:
        print("out of memory", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
