"""Batch command-line front end: detect, compare, and stats subcommands.

Exit codes: 0 success, 2 I/O or usage error, 3 input parse error,
4 edgeless graph, 5 partition vertex-set mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .engine import RunConfig, run, write_assignment, write_trace_csv
from .errors import EdgelessGraphError, GraphParseError, PartitionMismatchError
from .evaluation import compare_partitions
from .graph import degree_stats, load_graph

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_EDGELESS = 4
EXIT_MISMATCH = 5

_STAGE_ORDER = ("vf", "coloring", "clustering", "rebuild")


def _default_threads() -> int:
    env = os.environ.get("GRAPH_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"GRAPH_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parlouvain",
        description="Parallel Louvain community detection and partition tooling.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="detect communities and write the assignment")
    detect.add_argument("--input", required=True, help="input graph file")
    detect.add_argument("--format", choices=["edgelist", "metis", "mtx"],
                        help="input format (default: inferred from the suffix)")
    detect.add_argument("--output", help="assignment file (default: INPUT.communities)")
    detect.add_argument("--trace", help="trace CSV file (default: INPUT.trace.csv)")
    detect.add_argument("--threads", type=int,
                        help="worker count (default: GRAPH_THREADS or all cores)")
    detect.add_argument("--no-vf", action="store_true",
                        help="disable vertex-following compaction")
    detect.add_argument("--no-coloring", action="store_true",
                        help="disable coloring preprocessing")
    detect.add_argument("--theta", type=float, default=1e-6,
                        help="final modularity-gain threshold (default 1e-6)")
    detect.add_argument("--theta-color", type=float, default=1e-2,
                        help="threshold while coloring is active (default 1e-2)")
    detect.add_argument("--color-cutoff", type=int, default=100_000,
                        help="stop coloring below this vertex count (default 100000)")
    detect.add_argument("--max-iters", type=int, default=10_000,
                        help="iteration cap per phase (default 10000)")

    compare = sub.add_parser("compare", help="pairwise agreement of two assignments")
    compare.add_argument("reference", help="benchmark assignment file")
    compare.add_argument("candidate", help="assignment file to evaluate")

    stats = sub.add_parser("stats", help="print graph degree statistics")
    stats.add_argument("--input", required=True, help="input graph file")
    stats.add_argument("--format", choices=["edgelist", "metis", "mtx"])
    return parser


def _config_from_args(args) -> RunConfig:
    threads = args.threads if args.threads is not None else _default_threads()
    return RunConfig(
        theta_final=args.theta,
        theta_color=args.theta_color,
        color_cutoff=args.color_cutoff,
        use_vf=not args.no_vf,
        use_coloring=not args.no_coloring,
        max_iterations_per_phase=args.max_iters,
        worker_count=max(1, threads),
    ).validate()


def _cmd_detect(args) -> int:
    cfg = _config_from_args(args)
    g = load_graph(args.input, args.format)
    records = []
    started = time.perf_counter()
    hierarchy = run(g, cfg, records.append)
    seconds = time.perf_counter() - started

    out_path = args.output or f"{args.input}.communities"
    trace_path = args.trace or f"{args.input}.trace.csv"
    write_assignment(out_path, hierarchy.final_assignment)
    write_trace_csv(trace_path, records)

    by_stage = {stage: 0.0 for stage in _STAGE_ORDER}
    for record in records:
        by_stage[record.stage] += record.millis / 1e3
    clustering = [r for r in records if r.stage == "clustering"]
    phases_with_moves = len({r.phase for r in clustering if r.moves > 0})
    breakdown = ";".join(f"{stage}={by_stage[stage]:.3f}" for stage in _STAGE_ORDER)
    print(f"{hierarchy.final_modularity:.6f},{phases_with_moves},"
          f"{len(clustering)},{seconds:.3f},{breakdown}")
    return EXIT_OK


def _read_assignment(path):
    pairs = {}
    with open(path, "r", encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(
                    f"{path}:{ln}: malformed line: expected 'vertex community'")
            try:
                vertex, community = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"{path}:{ln}: malformed line: {line!r}") from None
            if vertex in pairs:
                raise GraphParseError(f"{path}:{ln}: duplicate vertex {vertex}")
            pairs[vertex] = community
    if not pairs:
        raise GraphParseError(f"{path}: empty assignment file")
    return pairs


def _cmd_compare(args) -> int:
    reference = _read_assignment(args.reference)
    candidate = _read_assignment(args.candidate)
    if reference.keys() != candidate.keys():
        raise PartitionMismatchError(
            f"{args.reference} and {args.candidate} cover different vertex sets "
            f"({len(reference)} vs {len(candidate)} vertices)")
    vertices = sorted(reference)
    s = np.array([reference[v] for v in vertices], dtype=np.int64)
    p = np.array([candidate[v] for v in vertices], dtype=np.int64)
    print(compare_partitions(s, p).csv_line())
    return EXIT_OK


def _cmd_stats(args) -> int:
    g = load_graph(args.input, args.format)
    stats = degree_stats(g)
    print(f"{g.num_vertices},{g.num_edges},{stats.max_degree},"
          f"{stats.avg_degree:.3f},{stats.rsd:.3f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"detect": _cmd_detect, "compare": _cmd_compare, "stats": _cmd_stats}
    try:
        return handler[args.command](args)
    except EdgelessGraphError as exc:
        print(f"error: modularity undefined for edgeless graph ({exc})",
              file=sys.stderr)
        return EXIT_EDGELESS
    except GraphParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PartitionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
