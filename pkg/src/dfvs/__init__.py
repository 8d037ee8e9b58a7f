"""Exact solver for minimum directed feedback vertex set.

The pipeline kernelizes the input graph, enumerates chordless cycles per
strongly connected component, reduces the resulting cover problem with
vertex-cover style rules, and finishes with branch-and-bound plus lazy
cycle constraints for anything the enumeration could not complete.
"""

from .cover import CoverProblem, lift_cover_solution, reduce_cover
from .cycles import (
    CycleSet,
    EnumOutcome,
    brute_force_enum,
    chord_filter,
    enumerate_chordless,
    enumerate_hub,
    harvest_random_cycles,
    normalize_cycle,
    trim_to_chordless,
)
from .digraph import (
    DirectedGraph,
    is_acyclic,
    strongly_connected_components,
    weak_articulation_points,
)
from .kernel import kernelize_graph, lift_graph_solution
from .pace import parse_pace, read_instance, serialize_pace, write_solution
from .solver import (
    IlpModel,
    Solution,
    SolverConfig,
    build_model,
    export_lp,
    lazy_loop,
    max_edge_disjoint_cycles,
    run_pipeline,
    solve_cover_exact,
    solve_dfvs,
)

__version__ = "0.1.0"

__all__ = [
    "CoverProblem",
    "CycleSet",
    "DirectedGraph",
    "EnumOutcome",
    "IlpModel",
    "Solution",
    "SolverConfig",
    "brute_force_enum",
    "build_model",
    "chord_filter",
    "enumerate_chordless",
    "enumerate_hub",
    "export_lp",
    "harvest_random_cycles",
    "is_acyclic",
    "kernelize_graph",
    "lazy_loop",
    "lift_cover_solution",
    "lift_graph_solution",
    "max_edge_disjoint_cycles",
    "normalize_cycle",
    "parse_pace",
    "read_instance",
    "reduce_cover",
    "run_pipeline",
    "serialize_pace",
    "solve_cover_exact",
    "solve_dfvs",
    "strongly_connected_components",
    "trim_to_chordless",
    "weak_articulation_points",
    "write_solution",
]
