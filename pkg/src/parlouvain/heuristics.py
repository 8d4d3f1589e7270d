"""Preprocessing heuristics: single-degree vertex compaction and coloring.

Vertex following folds every vertex whose only non-self edge is (i, j) into
j, turning the edge weight into self-loop weight, so hubs drive the later
migration decisions. Distance-1 coloring partitions vertices into classes
that are safe to sweep concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .graph import Graph


@dataclass
class VfMapping:
    """Result of vertex-following compaction."""
    vertex_map: np.ndarray  # original vertex -> compacted vertex
    graph: Graph
    merged_count: int


@dataclass
class Coloring:
    """Valid distance-1 coloring: adjacent vertices never share a color."""
    colors: np.ndarray
    num_colors: int
    class_sizes: np.ndarray

    def classes(self):
        """Vertex arrays per color, ascending vertex id within each class."""
        order = np.argsort(self.colors, kind="stable")
        bounds = np.cumsum(self.class_sizes)
        return np.split(order, bounds[:-1])

    def size_rsd(self) -> float:
        """Relative standard deviation of the color-class sizes."""
        sizes = self.class_sizes.astype(np.float64)
        return float(sizes.std() / sizes.mean())


def vf_compact(g: Graph) -> VfMapping:
    """Merge every single-degree vertex into its sole neighbor.

    One pass over the input degrees only; chains are not followed. A vertex
    qualifies when it has exactly one non-self edge and no self loop. When
    two qualifying vertices form an isolated pair, the higher id folds into
    the lower one.
    """
    n = g.num_vertices
    degrees = g.unweighted_degrees()
    candidate = (degrees == 1) & (g.self_loop_weights == 0.0)
    only_neighbor = np.full(n, -1, dtype=np.int64)
    cand_ids = np.flatnonzero(candidate)
    if len(cand_ids):
        only_neighbor[cand_ids] = g.neighbors[g.adjacency_offsets[cand_ids]]
    # self loop would imply degree 2 here, so a candidate's single entry is non-self
    merged = candidate.copy()
    if len(cand_ids):
        partner = only_neighbor[cand_ids]
        paired = candidate[partner]
        survivors = cand_ids[paired & (cand_ids < partner)]
        merged[survivors] = False

    new_id = np.cumsum(~merged) - 1
    vertex_map = np.where(merged, new_id[only_neighbor], new_id)
    n_new = int((~merged).sum())

    a, b, w = g.edge_records()
    keep = ~merged[a] & ~merged[b]
    rec_u = [new_id[a[keep]]]
    rec_v = [new_id[b[keep]]]
    rec_w = [w[keep]]
    merged_ids = np.flatnonzero(merged)
    if len(merged_ids):
        tgt = new_id[only_neighbor[merged_ids]]
        folded = g.weights[g.adjacency_offsets[merged_ids]]
        rec_u.append(tgt)
        rec_v.append(tgt)
        rec_w.append(folded)
    compacted = Graph.from_edges(np.concatenate(rec_u), np.concatenate(rec_v),
                                 np.concatenate(rec_w), num_vertices=n_new,
                                 count_merges=False)
    return VfMapping(vertex_map=vertex_map, graph=compacted,
                     merged_count=int(merged.sum()))


def color_graph(g: Graph, workers: int = 1) -> Coloring:
    """Speculative parallel greedy distance-1 coloring.

    Rounds of: tentatively color every uncolored vertex with the smallest
    color absent among already-colored neighbors, then uncolor the higher-id
    endpoint of every conflicting edge. Deterministic for a fixed graph
    regardless of worker count.
    """
    kern = backend.active()
    n = g.num_vertices
    colors = np.full(n, -1, dtype=np.int64)
    active = np.arange(n, dtype=np.int64)
    max_degree = g.max_degree
    while len(active):
        tentative = np.empty(len(active), dtype=np.int64)
        kern.color_assign(g.adjacency_offsets, g.neighbors, active, colors,
                          max_degree, workers, tentative)
        colors[active] = tentative
        keep = np.empty(len(active), dtype=np.uint8)
        kern.color_conflicts(g.adjacency_offsets, g.neighbors, active, colors,
                             workers, keep)
        rejected = active[keep == 0]
        colors[rejected] = -1
        active = rejected
    num_colors = int(colors.max()) + 1 if n else 0
    return Coloring(colors=colors, num_colors=num_colors,
                    class_sizes=np.bincount(colors, minlength=num_colors))


def check_coloring(g: Graph, coloring: Coloring) -> bool:
    """Full edge scan: no non-self edge may join two same-colored vertices."""
    src = np.repeat(np.arange(g.num_vertices, dtype=np.int64),
                    np.diff(g.adjacency_offsets))
    nonself = src != g.neighbors
    if np.any(coloring.colors[src[nonself]] == coloring.colors[g.neighbors[nonself]]):
        raise AssertionError("adjacent vertices share a color")
    colors = coloring.colors
    if len(colors) and (colors.min() < 0 or colors.max() >= coloring.num_colors):
        raise AssertionError("color ids out of range")
    if coloring.num_colors and np.any(coloring.class_sizes == 0):
        raise AssertionError("unused color id")
    return True
