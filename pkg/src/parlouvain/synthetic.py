"""Small seeded graph generators used by the test suite and benchmarks."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def gnm_random_graph(n: int, num_edges: int, seed: int = 0,
                     weight_range: tuple[float, float] | None = None) -> Graph:
    """Uniform random simple graph with exactly ``num_edges`` distinct edges.

    Weights are 1 unless ``weight_range=(lo, hi]`` is given, in which case
    they are drawn uniformly from the half-open interval.
    """
    max_edges = n * (n - 1) // 2
    if num_edges > max_edges:
        raise ValueError(f"cannot place {num_edges} edges on {n} vertices")
    rng = np.random.default_rng(seed)
    chosen = np.empty(0, dtype=np.int64)
    while len(chosen) < num_edges:
        need = num_edges - len(chosen)
        u = rng.integers(0, n, size=2 * need + 16, dtype=np.int64)
        v = rng.integers(0, n, size=2 * need + 16, dtype=np.int64)
        mask = u != v
        a = np.minimum(u[mask], v[mask])
        b = np.maximum(u[mask], v[mask])
        keys = a * n + b
        chosen = np.unique(np.concatenate([chosen, keys]))
    rng.shuffle(chosen)
    chosen = chosen[:num_edges]
    u = chosen // n
    v = chosen % n
    if weight_range is None:
        w = None
    else:
        lo, hi = weight_range
        # uniform on (lo, hi]: 1 - random() lies in (0, 1]
        w = lo + (hi - lo) * (1.0 - rng.random(num_edges))
    return Graph.from_edges(u, v, w, num_vertices=n)


def random_geometric_graph(n: int, radius: float, seed: int = 0) -> Graph:
    """Unit-square random geometric graph: points closer than ``radius`` are joined."""
    from scipy.spatial import cKDTree

    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    pairs = cKDTree(points).query_pairs(radius, output_type="ndarray")
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs = pairs[order]
    return Graph.from_edges(pairs[:, 0], pairs[:, 1], num_vertices=n)


def random_weighted_multigraph_records(n: int, max_records: int, seed: int,
                                       max_weight: int = 10,
                                       allow_self_loops: bool = True):
    """Raw integer-weighted edge records (with duplicates) for loader tests."""
    rng = np.random.default_rng(seed)
    k = rng.integers(1, max_records + 1)
    u = rng.integers(0, n, size=k, dtype=np.int64)
    v = rng.integers(0, n, size=k, dtype=np.int64)
    if not allow_self_loops:
        mask = u != v
        u, v = u[mask], v[mask]
    w = rng.integers(1, max_weight + 1, size=len(u)).astype(np.float64)
    return u, v, w
