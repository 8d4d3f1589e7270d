import math

import numpy as np

from parlouvain import (check_coloring, color_graph, modularity_of_assignment,
                        vf_compact)
from parlouvain.synthetic import gnm_random_graph

from conftest import (all_partitions, clique, graph_from, path_graph,
                      random_state_graph, star_graph)


def test_vf_star_collapses_to_hub():
    vf = vf_compact(star_graph(3))
    g = vf.graph
    assert vf.merged_count == 3
    assert g.num_vertices == 1
    assert g.self_loop_weights.tolist() == [3.0]
    assert g.weighted_degrees.tolist() == [6.0]
    assert g.total_weight == 3.0
    assert vf.vertex_map.tolist() == [0, 0, 0, 0]


def test_vf_triangle_untouched():
    g = clique(3)
    vf = vf_compact(g)
    assert vf.merged_count == 0
    assert vf.graph.same_as(g)
    assert vf.vertex_map.tolist() == [0, 1, 2]


def test_vf_path_both_endpoints_fold_in_one_pass():
    vf = vf_compact(path_graph(3))
    g = vf.graph
    assert vf.merged_count == 2
    assert g.num_vertices == 1
    assert g.self_loop_weights.tolist() == [2.0]
    assert g.total_weight == 2.0
    assert vf.vertex_map.tolist() == [0, 0, 0]


def test_vf_isolated_pair_lower_id_survives():
    vf = vf_compact(graph_from([(0, 1, 2.5), (2, 3), (2, 4), (3, 4)]))
    assert vf.merged_count == 1
    assert vf.vertex_map[0] == vf.vertex_map[1] == 0
    assert vf.graph.self_loop_weights[0] == 2.5
    assert vf.graph.num_vertices == 4


def test_vf_keeps_self_loop_vertices():
    # degree-1 vertex with a self loop is a single-neighbor case, not merged
    g = graph_from([(0, 1), (0, 0, 2.0), (1, 2), (2, 3), (1, 3)])
    vf = vf_compact(g)
    assert vf.merged_count == 0
    assert vf.graph.same_as(g)


def test_vf_mass_preserved_and_only_degree_one_merged():
    for seed in range(30):
        g = random_state_graph(seed, max_n=80)
        vf = vf_compact(g)
        assert math.isclose(vf.graph.total_weight, g.total_weight, rel_tol=1e-12)
        degrees = g.unweighted_degrees()
        candidate = (degrees == 1) & (g.self_loop_weights == 0.0)
        # non-candidates all survive, so the map is injective on them
        keepers = vf.vertex_map[~candidate]
        assert len(np.unique(keepers)) == len(keepers)
        assert vf.merged_count == g.num_vertices - vf.graph.num_vertices
        # every candidate lands in the same compacted vertex as its neighbor
        for i in np.flatnonzero(candidate).tolist():
            nbr = int(g.neighbors_of(i)[0][0])
            assert vf.vertex_map[i] == vf.vertex_map[nbr]


def test_vf_map_is_surjective():
    for seed in range(10):
        g = random_state_graph(seed)
        vf = vf_compact(g)
        assert np.array_equal(np.unique(vf.vertex_map),
                              np.arange(vf.graph.num_vertices))


def test_vf_quality_preserved_under_expansion():
    # exhaustive check: the compacted search space reaches the same maximum
    # as original-graph partitions constrained to keep folded vertices home
    for seed in (1, 4, 7, 11):
        rng = np.random.default_rng(seed)
        g = random_state_graph(seed, max_n=9)
        vf = vf_compact(g)
        if vf.graph.num_vertices > 8 or vf.graph.total_weight == 0.0:
            continue
        best_compact = -np.inf
        best_expanded = -np.inf
        for assignment in all_partitions(vf.graph.num_vertices):
            q_compact = modularity_of_assignment(vf.graph, assignment)
            expanded = assignment[vf.vertex_map]
            q_expanded = modularity_of_assignment(g, expanded)
            assert abs(q_compact - q_expanded) < 1e-12
            best_compact = max(best_compact, q_compact)
            best_expanded = max(best_expanded, q_expanded)
        assert abs(best_compact - best_expanded) < 1e-12


def test_coloring_triangle_needs_three():
    coloring = color_graph(clique(3))
    assert coloring.num_colors == 3
    assert sorted(coloring.colors.tolist()) == [0, 1, 2]
    check_coloring(clique(3), coloring)


def test_coloring_path_resolves_by_id():
    coloring = color_graph(path_graph(3))
    assert coloring.colors.tolist() == [0, 1, 0]
    assert coloring.num_colors == 2


def test_coloring_self_loops_only():
    g = graph_from([(0, 0, 1.0), (1, 1, 2.0)])
    coloring = color_graph(g)
    assert coloring.num_colors == 1
    assert coloring.colors.tolist() == [0, 0]


def test_coloring_valid_on_random_graphs_any_workers():
    for seed in range(25):
        g = random_state_graph(seed, max_n=120)
        reference = None
        for workers in (1, 2, 8):
            coloring = color_graph(g, workers=workers)
            check_coloring(g, coloring)
            if reference is None:
                reference = coloring.colors
            else:
                assert np.array_equal(reference, coloring.colors)
        assert coloring.class_sizes.sum() == g.num_vertices
        assert coloring.size_rsd() >= 0.0


def test_coloring_classes_ascend():
    g = gnm_random_graph(40, 120, seed=5)
    coloring = color_graph(g)
    classes = coloring.classes()
    assert len(classes) == coloring.num_colors
    seen = np.concatenate(classes)
    assert sorted(seen.tolist()) == list(range(40))
    for cls in classes:
        assert np.all(np.diff(cls) > 0)
