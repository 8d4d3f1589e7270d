"""Modularity bookkeeping: community aggregates, Q, and single-move gains.

Aggregates follow the doubled self-loop convention of the graph module, so
the internal-weight accumulator of a community equals the sum of e_{i->C(i)}
over its members and Q reduces to

    Q = sum_C w_internal(C) / (2m) - sum_C (a_C / 2m)^2

Gains for a vertex's current community use the exclude-self convention:
staying put is always a zero-gain option.
"""

from __future__ import annotations

import numpy as np

from .errors import EdgelessGraphError
from .graph import Graph


class CommunityState:
    """Per-vertex community assignment plus per-community aggregates.

    Community ids live in 0..n-1 (ids of emptied communities are retained
    with zeroed aggregates until the next rebuild). ``labels[c]`` is the
    numeric label used by the minimum-label heuristics.
    """

    __slots__ = ("assignment", "labels", "a_tot", "w_internal", "sizes")

    def __init__(self, assignment, labels, a_tot, w_internal, sizes):
        self.assignment = assignment
        self.labels = labels
        self.a_tot = a_tot
        self.w_internal = w_internal
        self.sizes = sizes

    def copy(self):
        return CommunityState(self.assignment.copy(), self.labels.copy(),
                              self.a_tot.copy(), self.w_internal.copy(),
                              self.sizes.copy())

    def num_communities(self):
        return int(np.count_nonzero(self.sizes))


def singleton_state(g: Graph) -> CommunityState:
    """Every vertex alone in a community labelled by its own id."""
    n = g.num_vertices
    return CommunityState(
        assignment=np.arange(n, dtype=np.int64),
        labels=np.arange(n, dtype=np.int64),
        a_tot=g.weighted_degrees.copy(),
        w_internal=2.0 * g.self_loop_weights,
        sizes=np.ones(n, dtype=np.int64),
    )


def modularity(g: Graph, s: CommunityState) -> float:
    """Q of the partition tracked by ``s``, from the incremental aggregates."""
    if g.total_weight <= 0.0:
        raise EdgelessGraphError("modularity undefined for edgeless graph")
    two_m = 2.0 * g.total_weight
    return float(s.w_internal.sum() / two_m - np.square(s.a_tot / two_m).sum())


def modularity_of_assignment(g: Graph, assignment) -> float:
    """Q recomputed from scratch by a full edge scan (test/debug oracle)."""
    if g.total_weight <= 0.0:
        raise EdgelessGraphError("modularity undefined for edgeless graph")
    assignment = np.asarray(assignment, dtype=np.int64)
    src = np.repeat(np.arange(g.num_vertices, dtype=np.int64),
                    np.diff(g.adjacency_offsets))
    intra = assignment[src] == assignment[g.neighbors]
    intra_doubled = float(g.weights[intra].sum() + g.self_loop_weights.sum())
    a = np.bincount(assignment, weights=g.weighted_degrees,
                    minlength=g.num_vertices)
    two_m = 2.0 * g.total_weight
    return intra_doubled / two_m - float(np.square(a / two_m).sum())


def state_from_assignment(g: Graph, assignment) -> CommunityState:
    """Build a consistent state for an arbitrary assignment by full recount."""
    assignment = np.asarray(assignment, dtype=np.int64)
    if assignment.shape != (g.num_vertices,):
        raise ValueError("assignment length must equal the vertex count")
    n = g.num_vertices
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.adjacency_offsets))
    intra = assignment[src] == assignment[g.neighbors]
    w_internal = np.bincount(assignment[src[intra]], weights=g.weights[intra],
                             minlength=n).astype(np.float64, copy=False)
    w_internal += np.bincount(assignment, weights=2.0 * g.self_loop_weights,
                              minlength=n)
    # non-self intra edges were counted from both endpoints; self loops added twice
    return CommunityState(
        assignment=assignment.copy(),
        labels=np.arange(n, dtype=np.int64),
        a_tot=np.bincount(assignment, weights=g.weighted_degrees, minlength=n),
        w_internal=w_internal,
        sizes=np.bincount(assignment, minlength=n).astype(np.int64),
    )


def check_state(g: Graph, s: CommunityState, rtol: float = 1e-9):
    """Verify the incremental aggregates against a from-scratch recount."""
    ref = state_from_assignment(g, s.assignment)
    for name in ("a_tot", "w_internal"):
        got = getattr(s, name)
        want = getattr(ref, name)
        if not np.allclose(got, want, rtol=rtol, atol=rtol):
            worst = int(np.argmax(np.abs(got - want)))
            raise AssertionError(
                f"{name}[{worst}] drifted: tracked {got[worst]!r}, "
                f"recomputed {want[worst]!r}")
    if not np.array_equal(s.sizes, ref.sizes):
        raise AssertionError("community sizes drifted from assignment")
    return True


def neighbor_community_weights(g: Graph, s: CommunityState, i: int) -> dict:
    """e_{i->C} for each neighboring community of i, self loops excluded.

    The current community of i is always present (weight 0.0 when no
    neighbor of i lives there), matching the candidate set of the move rule.
    """
    i = int(i)
    weights = {}
    nbrs, wts = g.neighbors_of(i)
    assignment = s.assignment
    for j, w in zip(nbrs.tolist(), wts.tolist()):
        if j == i:
            continue
        c = int(assignment[j])
        weights[c] = weights.get(c, 0.0) + w
    weights.setdefault(int(assignment[i]), 0.0)
    return weights


def delta_q(g: Graph, s: CommunityState, i: int, target: int, e_i_to: dict) -> float:
    """Gain from moving vertex i to ``target``; exactly 0 for its own community."""
    i = int(i)
    target = int(target)
    c_old = int(s.assignment[i])
    if target == c_old:
        return 0.0
    if target not in e_i_to:
        raise ValueError(f"community {target} is not adjacent to vertex {i}")
    m = g.total_weight
    four_m_sq = (2.0 * m) * (2.0 * m)
    ki = float(g.weighted_degrees[i])
    e_new = e_i_to[target]
    e_old = e_i_to.get(c_old, 0.0)
    a_old_excl = float(s.a_tot[c_old]) - ki
    a_new = float(s.a_tot[target])
    return (e_new - e_old) / m + (2.0 * ki * a_old_excl - 2.0 * ki * a_new) / four_m_sq


def apply_move(g: Graph, s: CommunityState, i: int, target: int) -> None:
    """Move vertex i to ``target``, updating all aggregates incrementally."""
    i = int(i)
    target = int(target)
    c_old = int(s.assignment[i])
    if target == c_old:
        return
    nbrs, wts = g.neighbors_of(i)
    assignment = s.assignment
    e_old = 0.0
    e_new = 0.0
    for j, w in zip(nbrs.tolist(), wts.tolist()):
        if j == i:
            continue
        c = int(assignment[j])
        if c == c_old:
            e_old += w
        elif c == target:
            e_new += w
    sw = float(g.self_loop_weights[i])
    ki = float(g.weighted_degrees[i])
    s.w_internal[c_old] -= 2.0 * e_old + 2.0 * sw
    s.w_internal[target] += 2.0 * e_new + 2.0 * sw
    s.a_tot[c_old] -= ki
    s.a_tot[target] += ki
    s.sizes[c_old] -= 1
    s.sizes[target] += 1
    s.assignment[i] = target


def joint_gain_oracle(g: Graph, s: CommunityState, i: int, j: int,
                      k_target: int) -> float:
    """Net gain when two singleton vertices enter ``k_target`` simultaneously.

    Equals delta_q(i) + delta_q(j) + w(i,j)/m - 2 k_i k_j / (2m)^2, which the
    tests cross-check against a brute-force before/after Q difference.
    """
    i, j, k_target = int(i), int(j), int(k_target)
    if i == j:
        raise ValueError("vertices must be distinct")
    ci, cj = int(s.assignment[i]), int(s.assignment[j])
    if s.sizes[ci] != 1 or s.sizes[cj] != 1 or ci == cj:
        raise ValueError("both vertices must be in singleton communities")
    if k_target in (ci, cj):
        raise ValueError("target must differ from both current communities")
    gain_i = delta_q(g, s, i, k_target, neighbor_community_weights(g, s, i))
    gain_j = delta_q(g, s, j, k_target, neighbor_community_weights(g, s, j))
    m = g.total_weight
    ki = float(g.weighted_degrees[i])
    kj = float(g.weighted_degrees[j])
    return gain_i + gain_j + g.edge_weight(i, j) / m - 2.0 * ki * kj / ((2.0 * m) * (2.0 * m))
