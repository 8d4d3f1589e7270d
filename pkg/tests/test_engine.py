import logging
import math
import warnings

import numpy as np
import pytest

from parlouvain import (EdgelessGraphError, RunConfig, backend, color_graph,
                        modularity, rebuild, run, run_iteration, run_phase,
                        singleton_state, state_from_assignment)
from parlouvain.synthetic import gnm_random_graph

from conftest import (canonical_blocks, clique, graph_from,
                      random_state_graph, star_graph, two_triangles_bridge)

ALL_COMBOS = [(vf, col) for vf in (False, True) for col in (False, True)]


def small_config(**overrides):
    base = dict(use_vf=False, use_coloring=False, color_cutoff=0,
                max_iterations_per_phase=50, debug_check=True)
    base.update(overrides)
    return RunConfig(**base)


def test_iteration_k2_no_swap():
    g = graph_from([(0, 1)])
    s = singleton_state(g)
    s, moves = run_iteration(g, s, np.arange(2))
    # equal gains both ways; the singlet guard lets only the higher label move
    assert moves == 1
    assert s.assignment.tolist() == [0, 0]


def test_iteration_k4_min_label_collapse():
    g = clique(4)
    s = singleton_state(g)
    s, moves = run_iteration(g, s, np.arange(4))
    assert moves == 3
    assert s.assignment.tolist() == [0, 0, 0, 0]


def test_iteration_fixpoint_moves_nothing():
    g = two_triangles_bridge()
    s = state_from_assignment(g, [0, 0, 0, 3, 3, 3])
    before = s.assignment.copy()
    s, moves = run_iteration(g, s, np.arange(6))
    assert moves == 0
    assert np.array_equal(s.assignment, before)


def test_phase_k4_exact_zero():
    g = clique(4)
    s, stats = run_phase(g, small_config())
    assert stats.q_end == 0.0
    assert len(np.unique(s.assignment)) == 1
    assert not stats.hit_iteration_cap


def test_phase_two_triangles():
    g = two_triangles_bridge()
    s, stats = run_phase(g, small_config())
    assert canonical_blocks(s.assignment) == canonical_blocks([0, 0, 0, 1, 1, 1])
    assert abs(stats.q_end - 5.0 / 14.0) < 1e-12


def test_phase_self_loops_only_terminates_immediately():
    g = graph_from([(0, 0, 2.0), (1, 1, 1.0)])
    s, stats = run_phase(g, small_config())
    assert stats.iterations == 1
    assert stats.total_moves == 0


def test_phase_iteration_cap_sets_flag(caplog):
    g = two_triangles_bridge()
    with caplog.at_level(logging.WARNING):
        s, stats = run_phase(g, small_config(max_iterations_per_phase=1))
    assert stats.hit_iteration_cap
    assert stats.iterations == 1
    assert any("iteration cap" in message for message in caplog.messages)


def test_phase_colored_two_triangles():
    g = two_triangles_bridge()
    coloring = color_graph(g)
    s, stats = run_phase(g, small_config(), coloring)
    assert stats.colored
    assert canonical_blocks(s.assignment) == canonical_blocks([0, 0, 0, 1, 1, 1])


def test_rebuild_triangle_partial_partition():
    g = clique(3)
    s = state_from_assignment(g, [0, 0, 2])
    q_before = modularity(g, s)
    assert math.isclose(q_before, -2.0 / 9.0, rel_tol=1e-15)
    rebuilt, renumber = rebuild(g, s)
    assert rebuilt.num_vertices == 2
    assert rebuilt.self_loop_weights.tolist() == [1.0, 0.0]
    assert rebuilt.edge_weight(0, 1) == 2.0
    assert renumber.tolist() == [0, -1, 1]
    q_after = modularity(rebuilt, singleton_state(rebuilt))
    assert abs(q_before - q_after) < 1e-12


def test_rebuild_all_singletons_is_identity():
    g = two_triangles_bridge()
    s = singleton_state(g)
    rebuilt, renumber = rebuild(g, s)
    assert rebuilt.same_as(g)
    assert renumber.tolist() == list(range(6))


def test_rebuild_two_triangles_preserves_q():
    g = two_triangles_bridge()
    s = state_from_assignment(g, [0, 0, 0, 3, 3, 3])
    rebuilt, _ = rebuild(g, s)
    assert rebuilt.num_vertices == 2
    assert rebuilt.self_loop_weights.tolist() == [3.0, 3.0]
    assert rebuilt.edge_weight(0, 1) == 1.0
    q = modularity(rebuilt, singleton_state(rebuilt))
    assert abs(q - 5.0 / 14.0) < 1e-12


def test_rebuild_invariance_random():
    for seed in range(30):
        g = random_state_graph(seed, max_n=120)
        rng = np.random.default_rng(seed + 99)
        s = state_from_assignment(
            g, rng.integers(0, g.num_vertices, size=g.num_vertices))
        q_before = modularity(g, s)
        rebuilt, _ = rebuild(g, s)
        q_after = modularity(rebuilt, singleton_state(rebuilt))
        assert abs(q_before - q_after) < 1e-12
        assert rebuilt.num_edges <= g.num_edges


def test_run_two_triangles_all_heuristic_combos():
    g = two_triangles_bridge()
    for use_vf, use_coloring in ALL_COMBOS:
        h = run(g, small_config(use_vf=use_vf, use_coloring=use_coloring))
        assert canonical_blocks(h.final_assignment) == \
            canonical_blocks([0, 0, 0, 1, 1, 1]), (use_vf, use_coloring)
        assert abs(h.final_modularity - 5.0 / 14.0) < 1e-12


def test_run_star_with_vf_single_community():
    g = star_graph(3)
    h = run(g, small_config(use_vf=True))
    assert h.vf is not None and h.vf.merged_count == 3
    assert h.final_assignment.tolist() == [0, 0, 0, 0]
    assert h.final_modularity == 0.0
    # no movement was ever needed
    assert all(p.stats.total_moves == 0 for p in h.phases)


def test_run_karate_default_config_floor(karate):
    h = run(karate, RunConfig())
    assert h.final_modularity >= 0.40
    counts = np.bincount(h.final_assignment, minlength=h.num_communities)
    assert np.all(counts > 0)
    assert len(h.final_assignment) == 34


def test_run_rejects_edgeless():
    from parlouvain import Graph
    g = Graph.from_edges([], [], num_vertices=3)
    with pytest.raises(EdgelessGraphError):
        run(g, small_config())


def test_run_no_swap_on_disjoint_edge_pairs():
    g = graph_from([(0, 1), (2, 3), (4, 5)])
    trace = []
    h = run(g, small_config(), trace)
    clustering = [r for r in trace if r.stage == "clustering" and r.phase == 1]
    assert len(clustering) <= 2
    assert canonical_blocks(h.final_assignment) == \
        canonical_blocks([0, 0, 1, 1, 2, 2])


def test_run_monotone_phase_q():
    """End-of-phase Q should be non-decreasing for cleanly converged runs.

    Cap-terminated phases stop mid-oscillation, and a zero-move stop can land
    on a collapsed community after jointly-overshooting moves, so dips on
    weak-structure graphs are reported rather than asserted.
    """
    dips = []
    for seed in range(12):
        g = random_state_graph(seed, max_n=100)
        trace = []
        h = run(g, small_config(max_iterations_per_phase=40), trace)
        ends = [p.stats.q_end for p in h.phases]
        monotone = all(b >= a - 1e-12 for a, b in zip(ends, ends[1:]))
        if any(p.stats.hit_iteration_cap for p in h.phases):
            if not monotone:
                dips.append((seed, ends))
            continue
        assert monotone, (seed, ends)
    if dips:
        warnings.warn(f"end-of-phase Q dipped in cap-terminated runs: {dips}")


def test_run_flattening_total_and_non_empty():
    for seed in range(10):
        g = random_state_graph(seed)
        for use_vf, use_coloring in ALL_COMBOS:
            h = run(g, small_config(use_vf=use_vf, use_coloring=use_coloring,
                                    max_iterations_per_phase=40))
            assert h.final_assignment.shape == (g.num_vertices,)
            assert h.final_assignment.min() >= 0
            counts = np.bincount(h.final_assignment,
                                 minlength=h.num_communities)
            assert np.all(counts > 0)
            assert np.array_equal(h.final_assignment, h.flatten())


def test_run_determinism_across_workers():
    g = gnm_random_graph(400, 1600, seed=11, weight_range=(0.0, 3.0))
    for use_coloring in (False, True):
        outputs = []
        for workers in (1, 2, 8):
            cfg = small_config(use_coloring=use_coloring,
                               worker_count=workers,
                               max_iterations_per_phase=60)
            h = run(g, cfg)
            outputs.append((h.final_assignment.tobytes(), h.final_modularity))
        assert outputs[0] == outputs[1] == outputs[2]


def test_run_trace_records_sane(karate):
    trace = []
    run(karate, RunConfig(use_vf=True, use_coloring=True, color_cutoff=0,
                          max_iterations_per_phase=60), trace)
    stages = {r.stage for r in trace}
    assert stages <= {"vf", "coloring", "clustering", "rebuild"}
    assert "vf" in stages and "coloring" in stages
    for r in trace:
        assert math.isfinite(r.modularity)
        assert r.millis >= 0.0
        assert r.moves >= 0
    # colored phases run under theta_color, later phases under theta_final
    colored_phases = {r.phase for r in trace if r.stage == "coloring"}
    for r in trace:
        if r.stage != "clustering":
            continue
        expected = 1e-2 if r.phase in colored_phases else 1e-6
        assert r.theta == expected


def test_run_vf_keeps_folded_vertices_with_neighbors():
    for seed in range(15):
        g = random_state_graph(seed, max_n=80)
        h = run(g, small_config(use_vf=True, max_iterations_per_phase=40))
        if h.vf is None or h.vf.merged_count == 0:
            continue
        degrees = g.unweighted_degrees()
        for i in np.flatnonzero((degrees == 1) &
                                (g.self_loop_weights == 0.0)).tolist():
            nbr = int(g.neighbors_of(i)[0][0])
            assert h.final_assignment[i] == h.final_assignment[nbr]


def test_run_without_vf_single_degree_vertices_follow_empirically():
    # the follow rule holds for the serial method; for the parallel sweeps it
    # is checked empirically and violations are reported, not asserted
    violations = 0
    checked = 0
    for seed in range(15):
        g = random_state_graph(seed, max_n=80)
        h = run(g, small_config(use_vf=False, max_iterations_per_phase=40))
        degrees = g.unweighted_degrees()
        for i in np.flatnonzero((degrees == 1) &
                                (g.self_loop_weights == 0.0)).tolist():
            nbr = int(g.neighbors_of(i)[0][0])
            checked += 1
            if h.final_assignment[i] != h.final_assignment[nbr]:
                violations += 1
    assert checked > 0
    if violations:
        warnings.warn(f"single-degree follow rule violated for {violations} "
                      f"of {checked} vertices in parallel runs")


@pytest.mark.skipif(not backend.has_compiled(),
                    reason="compiled kernels not built")
def test_backends_bit_identical():
    for seed in range(6):
        g = random_state_graph(seed, max_n=90)
        cfg = small_config(use_vf=True, use_coloring=True,
                           max_iterations_per_phase=40)
        previous = backend.use("compiled")
        try:
            h_compiled = run(g, cfg)
            backend.use("python")
            h_python = run(g, cfg)
        finally:
            backend.use(previous)
        assert np.array_equal(h_compiled.final_assignment,
                              h_python.final_assignment)
        assert h_compiled.final_modularity == h_python.final_modularity


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(theta_final=0.0).validate()
    with pytest.raises(ValueError):
        RunConfig(theta_color=1e-7, theta_final=1e-6).validate()
    with pytest.raises(ValueError):
        RunConfig(worker_count=0).validate()
    RunConfig().validate()
