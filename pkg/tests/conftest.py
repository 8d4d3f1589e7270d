import itertools
from pathlib import Path

import numpy as np
import pytest

from parlouvain import Graph, load_graph

DATA = Path(__file__).parent / "data"


def graph_from(edges, n=None):
    """Build a Graph from (u, v) or (u, v, w) tuples."""
    u = [e[0] for e in edges]
    v = [e[1] for e in edges]
    w = [float(e[2]) if len(e) > 2 else 1.0 for e in edges]
    return Graph.from_edges(u, v, w, num_vertices=n)


def clique(k):
    return graph_from([(i, j) for i in range(k) for j in range(i + 1, k)])


def path_graph(k):
    return graph_from([(i, i + 1) for i in range(k - 1)])


def star_graph(leaves):
    return graph_from([(0, i) for i in range(1, leaves + 1)])


def two_triangles_bridge():
    return graph_from([(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def all_partitions(n):
    """Every partition of range(n) as an assignment array (restricted growth)."""
    def grow(prefix, used):
        i = len(prefix)
        if i == n:
            yield np.array(prefix, dtype=np.int64)
            return
        for c in range(used + 1):
            yield from grow(prefix + [c], max(used, c + 1))
    yield from grow([], 0)


def random_state_graph(seed, max_n=60, max_weight=10.0):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, max_n))
    m = int(rng.integers(n - 1, min(3 * n, n * (n - 1) // 2)))
    from parlouvain.synthetic import gnm_random_graph
    return gnm_random_graph(n, m, seed=seed, weight_range=(0.0, max_weight))


@pytest.fixture(scope="session")
def karate():
    return load_graph(DATA / "karate.el")


@pytest.fixture(scope="session")
def corpus_paths():
    return [DATA / name for name in
            ("k4.el", "two_triangles.el", "star4.el", "path3.el", "karate.el")]


def brute_force_best_q(g):
    """Exhaustive max modularity over all partitions (tiny graphs only)."""
    from parlouvain.modularity import modularity_of_assignment
    best_q = -np.inf
    best = None
    for assignment in all_partitions(g.num_vertices):
        q = modularity_of_assignment(g, assignment)
        if q > best_q:
            best_q, best = q, assignment
    return best_q, best


def canonical_blocks(assignment):
    """Frozenset-of-frozensets view of a partition for label-free comparison."""
    groups = {}
    for vertex, community in enumerate(np.asarray(assignment).tolist()):
        groups.setdefault(community, set()).add(vertex)
    return frozenset(frozenset(block) for block in groups.values())


assert len(list(itertools.islice(all_partitions(3), 10))) == 5  # Bell(3)
