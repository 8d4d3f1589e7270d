#!/usr/bin/env python3
"""Benchmark the compiled sweep kernels against the pure-Python fallback.

Runs the full detection pipeline on a seeded synthetic graph with each
backend (and several worker counts for the compiled one), reports wall
times, and verifies that every configuration produces the same partition.

    python benchmarks/bench_backends.py --edges 50000 --threads 1,2,4
"""

import argparse
import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

import parlouvain as pl
from parlouvain.synthetic import gnm_random_graph, random_geometric_graph


def run_once(g, cfg):
    started = time.perf_counter()
    hierarchy = pl.run(g, cfg)
    return time.perf_counter() - started, hierarchy


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", choices=["rgg", "gnm"], default="rgg",
                        help="geometric graphs have strong communities, "
                             "uniform random ones barely any")
    parser.add_argument("--vertices", type=int, default=12_000)
    parser.add_argument("--edges", type=int, default=48_000,
                        help="edge count (gnm) or target edge count (rgg)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", default="1,2,4",
                        help="comma-separated worker counts for the compiled backend")
    parser.add_argument("--max-iters", type=int, default=30,
                        help="per-phase iteration cap (keeps oscillating phases short)")
    parser.add_argument("--skip-python", action="store_true",
                        help="only benchmark the compiled backend")
    args = parser.parse_args()

    if args.kind == "gnm":
        g = gnm_random_graph(args.vertices, args.edges, seed=args.seed)
    else:
        avg_degree = 2.0 * args.edges / args.vertices
        radius = math.sqrt(avg_degree / (math.pi * args.vertices))
        g = random_geometric_graph(args.vertices, radius, seed=args.seed)
    print(f"graph: {args.kind} n={g.num_vertices} M={g.num_edges} (seed {args.seed})")
    print(f"{'backend':<10} {'threads':>7} {'seconds':>9} {'edges/s':>12} {'Q':>9}")

    results = {}
    rows = []
    if pl.backend.has_compiled():
        pl.backend.use("compiled")
        for threads in (int(t) for t in args.threads.split(",")):
            cfg = pl.RunConfig(worker_count=threads,
                               max_iterations_per_phase=args.max_iters)
            seconds, h = run_once(g, cfg)
            results[("compiled", threads)] = h
            rows.append(("compiled", threads, seconds, h.final_modularity))
    else:
        print("compiled kernels not built; run `python setup.py build_ext --inplace`")

    if not args.skip_python:
        pl.backend.use("python")
        cfg = pl.RunConfig(worker_count=1,
                           max_iterations_per_phase=args.max_iters)
        seconds, h = run_once(g, cfg)
        results[("python", 1)] = h
        rows.append(("python", 1, seconds, h.final_modularity))
    pl.backend.use("auto")

    for name, threads, seconds, q in rows:
        print(f"{name:<10} {threads:>7} {seconds:>9.3f} "
              f"{g.num_edges / seconds:>12.0f} {q:>9.5f}")

    assignments = [h.final_assignment for h in results.values()]
    identical = all(np.array_equal(assignments[0], other)
                    for other in assignments[1:])
    print(f"all configurations produced identical partitions: {identical}")
    if rows and not args.skip_python and pl.backend.has_compiled():
        compiled_best = min(s for n, _, s, _ in rows if n == "compiled")
        python_time = next(s for n, _, s, _ in rows if n == "python")
        print(f"compiled speedup over pure Python: {python_time / compiled_best:.1f}x")
    return 0 if identical else 1


if __name__ == "__main__":
    sys.exit(main())
