"""Parallel Louvain community detection with compiled sweep kernels.

The package couples a compressed-adjacency graph core with a multi-phase
modularity-maximization engine. Swap and local-maxima hazards of concurrent
vertex sweeps are tamed by minimum-label tie breaking, an optional
single-degree vertex compaction pass, and optional distance-1 coloring.
Hot kernels run through a compiled extension when available and fall back
to a bit-identical pure-Python implementation otherwise.
"""

__version__ = "0.1.0"

from . import backend
from .engine import (Hierarchy, PhaseResult, RunConfig, TraceRecord, rebuild,
                     run, run_iteration, run_phase, write_assignment,
                     write_trace_csv)
from .errors import (EdgelessGraphError, GraphError, GraphParseError,
                     PartitionMismatchError)
from .evaluation import (PartitionComparison, compare_partitions,
                         compare_partitions_bruteforce)
from .graph import (DegreeStats, Graph, degree_stats, load_graph,
                    write_edge_list)
from .heuristics import (Coloring, VfMapping, check_coloring, color_graph,
                         vf_compact)
from .modularity import (CommunityState, apply_move, check_state, delta_q,
                         joint_gain_oracle, modularity,
                         modularity_of_assignment, neighbor_community_weights,
                         singleton_state, state_from_assignment)

__all__ = [
    "__version__",
    "backend",
    "Graph", "DegreeStats", "degree_stats", "load_graph", "write_edge_list",
    "CommunityState", "singleton_state", "modularity",
    "modularity_of_assignment", "state_from_assignment", "check_state",
    "neighbor_community_weights", "delta_q", "apply_move", "joint_gain_oracle",
    "VfMapping", "Coloring", "vf_compact", "color_graph", "check_coloring",
    "RunConfig", "TraceRecord", "PhaseResult", "Hierarchy",
    "run", "run_phase", "run_iteration", "rebuild",
    "write_assignment", "write_trace_csv",
    "PartitionComparison", "compare_partitions", "compare_partitions_bruteforce",
    "GraphError", "GraphParseError", "EdgelessGraphError", "PartitionMismatchError",
]
