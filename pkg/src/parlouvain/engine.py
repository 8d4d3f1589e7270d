"""Multi-phase parallel Louvain driver.

Each phase sweeps vertices in parallel against a frozen decision snapshot
(taken at iteration start, or at color-class stage start when a coloring is
active), applies the decided moves in ascending vertex order, and tracks Q
through incremental community aggregates. Between phases the graph is
rebuilt with one meta-vertex per non-empty community. Output is identical
for any worker count.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import EdgelessGraphError
from .graph import Graph
from .heuristics import Coloring, VfMapping, color_graph, vf_compact
from .modularity import (CommunityState, modularity, modularity_of_assignment,
                         singleton_state)

log = logging.getLogger(__name__)

_ZERO_GUARD = 1e-15  # |Q_P| below this switches relative tests to absolute


@dataclass
class RunConfig:
    """Thresholds, heuristic toggles, and worker count for a detection run."""
    theta_final: float = 1e-6
    theta_color: float = 1e-2
    color_cutoff: int = 100_000
    use_vf: bool = True
    use_coloring: bool = True
    max_iterations_per_phase: int = 10_000
    worker_count: int = 1
    debug_check: bool = False  # recompute Q from scratch after every iteration

    def validate(self):
        if self.theta_final <= 0.0 or self.theta_color <= 0.0:
            raise ValueError("thresholds must be positive")
        if self.theta_color < self.theta_final:
            raise ValueError("theta_color must be >= theta_final")
        if self.max_iterations_per_phase < 1:
            raise ValueError("max_iterations_per_phase must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.color_cutoff < 0:
            raise ValueError("color_cutoff must be >= 0")
        return self


@dataclass
class TraceRecord:
    """One row of the run trace (stage is vf, coloring, clustering, or rebuild).

    For clustering rows ``moves`` counts vertex migrations; for vf rows it
    carries the merged-vertex count and for coloring rows the number of
    color classes. ``theta`` is the termination threshold in effect.
    """
    phase: int
    iteration: int
    stage: str
    modularity: float
    moves: int
    millis: float
    theta: float

    CSV_HEADER = "phase,iteration,stage,modularity,moves,millis"

    def csv_row(self) -> str:
        return (f"{self.phase},{self.iteration},{self.stage},"
                f"{self.modularity!r},{self.moves},{self.millis:.3f}")


@dataclass
class PhaseStats:
    iterations: int
    total_moves: int
    q_end: float
    theta: float
    colored: bool
    hit_iteration_cap: bool


@dataclass
class PhaseResult:
    """Per-phase maps: community assignment plus the dense renumbering of
    non-empty communities into next-phase vertex ids."""
    assignment: np.ndarray
    renumber: np.ndarray
    stats: PhaseStats


@dataclass
class Hierarchy:
    """All per-phase maps plus the flattened original-vertex assignment."""
    phases: list[PhaseResult] = field(default_factory=list)
    vf: VfMapping | None = None
    final_assignment: np.ndarray | None = None
    final_modularity: float = float("nan")
    num_original_vertices: int = 0
    num_communities: int = 0

    def flatten(self) -> np.ndarray:
        """Compose the VF map and every phase map into one assignment."""
        v = np.arange(self.num_original_vertices, dtype=np.int64)
        if self.vf is not None:
            v = self.vf.vertex_map[v]
        for phase in self.phases:
            v = phase.renumber[phase.assignment[v]]
        return v


def _emit(trace, record: TraceRecord):
    if trace is None:
        return
    if callable(trace):
        trace(record)
    else:
        trace.append(record)


def _rel_gain(q_new: float, q_old: float) -> float:
    if abs(q_old) < _ZERO_GUARD:
        return q_new - q_old
    return (q_new - q_old) / abs(q_old)


def _iteration_converged(q_cur: float, q_prev: float, theta: float) -> bool:
    if abs(q_prev) < _ZERO_GUARD:
        return abs(q_cur - q_prev) < theta
    return abs(q_cur - q_prev) / abs(q_prev) < theta


def run_iteration(g: Graph, s: CommunityState, vertices,
                  workers: int = 1) -> tuple[CommunityState, int]:
    """One decision sweep over ``vertices`` (all of V, or one color class).

    Destinations are chosen for every vertex against a snapshot of the
    assignment and aggregates taken on entry, so the outcome is independent
    of worker count; moves are then applied in ascending vertex order.
    """
    kern = backend.active()
    subset = np.ascontiguousarray(vertices, dtype=np.int64)
    snap_assign = s.assignment.copy()
    snap_atot = s.a_tot.copy()
    snap_sizes = s.sizes.copy()
    targets = np.empty(len(subset), dtype=np.int64)
    moved = np.empty(len(subset), dtype=np.uint8)
    kern.decide_moves(g.adjacency_offsets, g.neighbors, g.weights,
                      g.weighted_degrees, s.labels, subset, snap_assign,
                      snap_atot, snap_sizes, g.total_weight, g.max_degree,
                      workers, targets, moved)
    count = kern.apply_moves(g.adjacency_offsets, g.neighbors, g.weights,
                             g.weighted_degrees, g.self_loop_weights, subset,
                             targets, moved, s.assignment, s.a_tot,
                             s.w_internal, s.sizes)
    return s, int(count)


def run_phase(g: Graph, cfg: RunConfig, coloring: Coloring | None = None,
              trace=None, phase_index: int = 1) -> tuple[CommunityState, PhaseStats]:
    """Iterate sweeps from the singleton state until the gain fades.

    Uncolored: one sweep of all vertices per iteration. Colored: one stage
    per color class, ascending color, makes up one iteration. The phase ends
    when an iteration moves nothing, the relative Q gain drops below theta
    (theta_color while colored, theta_final otherwise), or the iteration cap
    is hit.
    """
    if g.total_weight <= 0.0:
        raise EdgelessGraphError("modularity undefined for edgeless graph")
    s = singleton_state(g)
    theta = cfg.theta_color if coloring is not None else cfg.theta_final
    stages = coloring.classes() if coloring is not None else None
    everything = np.arange(g.num_vertices, dtype=np.int64)
    q_prev = None  # stands in for the -infinity start: iteration 1 always runs
    iterations = 0
    total_moves = 0
    hit_cap = False
    while True:
        started = time.perf_counter()
        if stages is None:
            s, moves = run_iteration(g, s, everything, cfg.worker_count)
        else:
            moves = 0
            for stage_vertices in stages:
                s, stage_moves = run_iteration(g, s, stage_vertices, cfg.worker_count)
                moves += stage_moves
        iterations += 1
        total_moves += moves
        q_cur = modularity(g, s)
        if cfg.debug_check:
            _check_tracked_q(g, s, q_cur)
        _emit(trace, TraceRecord(phase_index, iterations, "clustering", q_cur,
                                 moves, (time.perf_counter() - started) * 1e3,
                                 theta))
        if moves == 0:
            break
        if q_prev is not None and _iteration_converged(q_cur, q_prev, theta):
            break
        if iterations >= cfg.max_iterations_per_phase:
            hit_cap = True
            log.warning("phase %d stopped at the %d-iteration cap",
                        phase_index, iterations)
            break
        q_prev = q_cur
    return s, PhaseStats(iterations=iterations, total_moves=total_moves,
                         q_end=q_cur, theta=theta,
                         colored=coloring is not None,
                         hit_iteration_cap=hit_cap)


def _check_tracked_q(g: Graph, s: CommunityState, tracked: float,
                     rtol: float = 1e-9):
    reference = modularity_of_assignment(g, s.assignment)
    scale = abs(reference)
    err = abs(tracked - reference)
    if (err > rtol if scale < _ZERO_GUARD else err / scale > rtol):
        raise AssertionError(
            f"tracked modularity {tracked!r} drifted from recomputed {reference!r}")


def rebuild(g: Graph, s: CommunityState) -> tuple[Graph, np.ndarray]:
    """Contract every non-empty community into one meta-vertex.

    Communities are renumbered densely in ascending label order. The
    meta-vertex self loop stores the intra-community weight once, and
    parallel inter-community weights are summed, so the singleton state of
    the rebuilt graph has the same modularity as ``s`` on ``g``.
    """
    assignment = s.assignment
    communities = np.unique(assignment)
    renumber = np.full(len(s.sizes), -1, dtype=np.int64)
    renumber[communities] = np.arange(len(communities), dtype=np.int64)
    a, b, w = g.edge_records()
    ca = renumber[assignment[a]]
    cb = renumber[assignment[b]]
    lo = np.minimum(ca, cb)
    hi = np.maximum(ca, cb)
    order = np.lexsort((hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    if len(lo):
        new_run = np.empty(len(lo), dtype=bool)
        new_run[0] = True
        new_run[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        starts = np.flatnonzero(new_run)
        lo, hi, w = lo[starts], hi[starts], np.add.reduceat(w, starts)
    rebuilt = Graph.from_edges(lo, hi, w, num_vertices=len(communities),
                               count_merges=False)
    return rebuilt, renumber


def run(g: Graph, cfg: RunConfig | None = None, trace=None) -> Hierarchy:
    """Full pipeline: optional VF compaction, phased clustering with the
    multi-phase coloring policy, graph rebuilding, and flattening.

    Coloring stays active while it is enabled, the phase input has at least
    ``color_cutoff`` vertices, and the inter-phase gain has not dropped below
    ``theta_color``; once any of these fails, later phases run uncolored with
    ``theta_final``. Phasing stops when a phase moves nothing or improves Q
    by less than ``theta_final`` (relative).
    """
    cfg = (cfg or RunConfig()).validate()
    if g.total_weight <= 0.0:
        raise EdgelessGraphError("modularity undefined for edgeless graph")
    hierarchy = Hierarchy(num_original_vertices=g.num_vertices)
    current = g
    if cfg.use_vf:
        started = time.perf_counter()
        hierarchy.vf = vf_compact(g)
        current = hierarchy.vf.graph
        q0 = modularity(current, singleton_state(current))
        _emit(trace, TraceRecord(0, 0, "vf", q0, hierarchy.vf.merged_count,
                                 (time.perf_counter() - started) * 1e3,
                                 cfg.theta_final))
    q_prev_phase = modularity(current, singleton_state(current))
    coloring_enabled = cfg.use_coloring
    while True:
        phase_index = len(hierarchy.phases) + 1
        if coloring_enabled and current.num_vertices < cfg.color_cutoff:
            coloring_enabled = False
        coloring = None
        if coloring_enabled:
            started = time.perf_counter()
            coloring = color_graph(current, cfg.worker_count)
            _emit(trace, TraceRecord(phase_index, 0, "coloring", q_prev_phase,
                                     coloring.num_colors,
                                     (time.perf_counter() - started) * 1e3,
                                     cfg.theta_color))
        state, stats = run_phase(current, cfg, coloring, trace, phase_index)
        started = time.perf_counter()
        rebuilt, renumber = rebuild(current, state)
        _emit(trace, TraceRecord(phase_index, stats.iterations, "rebuild",
                                 stats.q_end, 0,
                                 (time.perf_counter() - started) * 1e3,
                                 stats.theta))
        hierarchy.phases.append(PhaseResult(assignment=state.assignment,
                                            renumber=renumber, stats=stats))
        gain = _rel_gain(stats.q_end, q_prev_phase)
        if coloring_enabled and gain < cfg.theta_color:
            coloring_enabled = False
        q_prev_phase = stats.q_end
        current = rebuilt
        if stats.total_moves == 0 or gain < cfg.theta_final:
            break
    hierarchy.final_assignment = hierarchy.flatten()
    hierarchy.final_modularity = hierarchy.phases[-1].stats.q_end
    hierarchy.num_communities = current.num_vertices
    return hierarchy


def write_assignment(path, assignment):
    """Write one `vertex community` line per original vertex."""
    with open(path, "w", encoding="utf-8") as fh:
        for vertex, community in enumerate(np.asarray(assignment).tolist()):
            fh.write(f"{vertex} {community}\n")


def write_trace_csv(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TraceRecord.CSV_HEADER + "\n")
        for record in records:
            fh.write(record.csv_row() + "\n")
