"""Exact optimization over the reduced cover problem.

The residue left by the reductions is a minimum hitting set instance: binary
variables, one per vertex, and >=1 constraints over vertex sets.  A small
deterministic branch-and-bound solves it exactly.  When unresolved graph
constraints remain, a lazy loop alternates solving the explicit model with
acyclicity checks on the graphs, feeding violated cycles back in as new
constraints; the first candidate that survives every check is optimal,
because every constraint added along the way is a genuine cycle any feasible
solution must hit.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from .cover import CoverProblem, lift_cover_solution, reduce_cover
from .cycles import (
    Cycle,
    DEFAULT_ENUM_BUDGET,
    enumerate_chordless,
    harvest_random_cycles,
    mixed_rng,
    trim_to_chordless,
)
from .digraph import DirectedGraph, find_cycle, is_acyclic
from .kernel import (
    Contracted,
    RemovedSourceSink,
    kernelize_graph,
    lift_graph_solution,
)


class ModelError(ValueError):
    """The cover state handed to the model builder was inconsistent."""


@dataclass(frozen=True)
class Solution:
    vertices: frozenset[int]
    optimal: bool = True
    lower_bound: int = 0

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class SolverConfig:
    harvest_rounds: int = 50
    enum_budget: int = DEFAULT_ENUM_BUDGET
    generalized_desks: bool = False
    seed: int = 0
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.harvest_rounds < 0 or self.enum_budget < 0:
            raise ValueError("counts must be nonnegative")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time limit must be nonnegative")


class Deadline:
    """Shared stop signal: a wall-clock limit, a signal handler, or both."""

    def __init__(self, limit: float | None) -> None:
        self._expires = None if limit is None else time.monotonic() + limit
        self._triggered = False

    def trigger(self) -> None:
        self._triggered = True

    def expired(self) -> bool:
        if self._triggered:
            return True
        return self._expires is not None and time.monotonic() >= self._expires


@dataclass(frozen=True)
class IlpModel:
    variables: tuple[int, ...]
    constraints: tuple[frozenset[int], ...]


def build_model(p: CoverProblem) -> IlpModel:
    """One binary variable per remaining vertex, one >=1 constraint per edge
    and big set.  Attached graphs are not expressed; callers either require
    their absence or treat the model as a relaxation."""
    constraints: list[frozenset[int]] = [frozenset(e) for e in p.edges()]
    for big in p.big_sets:
        if not big:
            raise ModelError("empty cover set")
        constraints.append(frozenset(big))
    ordered = sorted(set(constraints), key=lambda c: (len(c), sorted(c)))
    return IlpModel(tuple(sorted(p.vertex_set())), tuple(ordered))


def _greedy_hitting(constraints: tuple[frozenset[int], ...]) -> set[int]:
    """Initial incumbent: repeatedly take the vertex hitting the most
    still-unhit constraints, smallest id on ties."""
    chosen: set[int] = set()
    remaining = list(constraints)
    while remaining:
        counts: dict[int, int] = {}
        for c in remaining:
            for v in c:
                counts[v] = counts.get(v, 0) + 1
        pick = min(counts, key=lambda v: (-counts[v], v))
        chosen.add(pick)
        remaining = [c for c in remaining if pick not in c]
    return chosen


def _disjoint_bound(active: list[frozenset[int]], banned: set[int]) -> int:
    """Greedy family of pairwise-disjoint unsatisfied constraints; each needs
    its own vertex, so the family size lower-bounds the remaining cost."""
    used: set[int] = set()
    count = 0
    for c in active:
        avail = c - banned
        if avail and not (avail & used):
            count += 1
            used |= avail
    return count


class _SearchTimeout(Exception):
    pass


def solve_cover_exact(
    model: IlpModel, cfg: SolverConfig | None = None, deadline: Deadline | None = None
) -> Solution:
    """Provably minimum hitting set of the model's constraints.

    Branches on the vertex appearing in the most unsatisfied constraints
    (ties to the smallest id), include-branch first.  Constraints whose last
    available vertex would be excluded force that vertex in before any
    branching, and the disjoint-constraint bound prunes the rest.  Fully
    deterministic.  On deadline expiry the incumbent comes back with
    ``optimal=False`` and a bound that is still a true lower bound.
    """
    del cfg  # deterministic search; nothing here randomizes
    constraints = sorted(set(model.constraints), key=lambda c: (len(c), sorted(c)))
    if not constraints:
        return Solution(frozenset(), True, 0)
    if any(not c for c in constraints):
        raise ModelError("empty constraint is unsatisfiable")

    incumbent = _greedy_hitting(model.constraints)
    best_size = len(incumbent)
    root_bound = _disjoint_bound(constraints, set())
    limit = sys.getrecursionlimit()
    if len(model.variables) * 2 + 100 > limit:
        sys.setrecursionlimit(len(model.variables) * 2 + 100)

    def search(fixed_in: set[int], banned: set[int], active: list[frozenset[int]]) -> None:
        nonlocal incumbent, best_size
        if deadline is not None and deadline.expired():
            raise _SearchTimeout
        # unit propagation: a constraint down to one available vertex
        # commits it; an emptied constraint kills the branch
        while True:
            available: list[frozenset[int]] = []
            forced = None
            for c in active:
                left = c - banned
                if not left:
                    return
                if len(left) == 1:
                    (forced,) = left
                    break
                available.append(left)
            if forced is None:
                break
            fixed_in = fixed_in | {forced}
            active = [c for c in active if forced not in c]
            if not active:
                break
        if not active:
            if len(fixed_in) < best_size:
                incumbent = set(fixed_in)
                best_size = len(fixed_in)
            return
        # one pass over the availability sets yields both the pruning bounds
        # and the branching frequencies
        used: set[int] = set()
        bound = 0
        counts: dict[int, int] = {}
        for left in available:
            if not (left & used):
                bound += 1
                used |= left
        for left in available:
            for v in left:
                counts[v] = counts.get(v, 0) + 1
        top = max(counts.values())
        bound = max(bound, -(-len(available) // top))
        if len(fixed_in) + bound >= best_size:
            return
        branch = min(counts, key=lambda v: (-counts[v], v))
        search(fixed_in | {branch}, banned, [c for c in active if branch not in c])
        search(fixed_in, banned | {branch}, active)

    timed_out = False
    try:
        search(set(), set(), constraints)
    except _SearchTimeout:
        timed_out = True
    finally:
        sys.setrecursionlimit(limit)
    if timed_out:
        return Solution(frozenset(incumbent), False, min(root_bound, best_size))
    return Solution(frozenset(incumbent), True, best_size)


def max_edge_disjoint_cycles(g: DirectedGraph, removed=frozenset()) -> set[Cycle]:
    """Greedy maximal family of pairwise arc-disjoint chordless cycles of the
    graph minus ``removed``: find a cycle depth-first, trim it chordless,
    delete its arcs, repeat until acyclic."""
    work = g.without(removed)
    cycles: set[Cycle] = set()
    while True:
        raw = find_cycle(work)
        if raw is None:
            return cycles
        cycle = trim_to_chordless(raw, work)
        cycles.add(cycle)
        for i in range(len(cycle)):
            work.remove_arc(cycle[i], cycle[(i + 1) % len(cycle)])


def _feasible_completion(chosen: set[int], graphs: list[DirectedGraph]) -> set[int]:
    """Pad a candidate until every attached graph is acyclic; used so that a
    timeout still reports a usable feedback set.  Greedy and deterministic:
    break each surviving cycle at its busiest vertex."""
    out = set(chosen)
    for g in graphs:
        work = g.without(out)
        while True:
            cycle = find_cycle(work)
            if cycle is None:
                break
            pick = min(
                cycle,
                key=lambda v: (-(work.in_degree(v) + work.out_degree(v)), v),
            )
            out.add(pick)
            work.remove_vertex(pick)
    return out


@dataclass
class LazyOutcome:
    solution: Solution
    iterations: int
    constraints_added: int
    model: IlpModel


def lazy_loop(
    p: CoverProblem, cfg: SolverConfig, deadline: Deadline | None = None
) -> LazyOutcome:
    """Solve-check-cut loop for problems that still carry graph constraints.

    The explicit model starts from the problem's edges and big sets plus one
    round of random cycle harvesting per graph.  Each candidate optimum is
    checked by deleting it from every attached graph: if everything is
    acyclic the candidate is optimal (the model was a relaxation built from
    necessary constraints and the candidate is feasible).  Otherwise every
    cyclic graph contributes a maximal arc-disjoint batch of violated cycles
    plus a fresh harvest, and the model is re-solved.
    """
    if not p.graphs:
        raise ValueError("lazy loop needs at least one attached graph")
    constraints: dict[frozenset[int], None] = {}
    for e in p.edges():
        constraints.setdefault(frozenset(e))
    for big in p.big_sets:
        constraints.setdefault(frozenset(big))
    for index, g in enumerate(p.graphs):
        if deadline is not None and deadline.expired():
            break
        seed = mixed_rng(cfg.seed, 0, index).randrange(1 << 30)
        for cycle in sorted(harvest_random_cycles(g, cfg.harvest_rounds, seed)):
            constraints.setdefault(frozenset(cycle))
    variables = tuple(sorted(p.vertex_set()))
    added = len(constraints)
    iteration = 0
    while True:
        iteration += 1
        model = IlpModel(
            variables,
            tuple(sorted(constraints, key=lambda c: (len(c), sorted(c)))),
        )
        candidate = solve_cover_exact(model, cfg, deadline)
        chosen = set(candidate.vertices)
        if not candidate.optimal:
            padded = _feasible_completion(chosen, p.graphs)
            return LazyOutcome(
                Solution(frozenset(padded), False, candidate.lower_bound),
                iteration,
                len(constraints) - added,
                model,
            )
        cyclic = [g for g in p.graphs if not is_acyclic(g.without(chosen))]
        if not cyclic:
            return LazyOutcome(candidate, iteration, len(constraints) - added, model)
        for index, g in enumerate(cyclic):
            for cycle in sorted(max_edge_disjoint_cycles(g, chosen)):
                constraints.setdefault(frozenset(cycle))
            if deadline is not None and deadline.expired():
                continue
            seed = mixed_rng(cfg.seed, iteration, index).randrange(1 << 30)
            for cycle in sorted(
                harvest_random_cycles(g.without(chosen), cfg.harvest_rounds, seed)
            ):
                constraints.setdefault(frozenset(cycle))


@dataclass
class RunReport:
    """Per-run accounting, printable as ``key: value`` lines."""

    name: str = ""
    n: int = 0
    m: int = 0
    graph_forced: int = 0
    graph_removed: int = 0
    graph_contracted: int = 0
    subgraph_count: int = 0
    subgraph_vertices: int = 0
    cycle_rules: dict[str, int] = field(default_factory=dict)
    enumeration_complete: bool = True
    residual_graphs: int = 0
    residual_vertices: int = 0
    cover_rules: dict[str, int] = field(default_factory=dict)
    cover_included: int = 0
    cover_offset: int = 0
    lazy_iterations: int = 0
    lazy_constraints_added: int = 0
    solution_size: int = 0
    optimal: bool = True
    wall_time: float = 0.0

    def lines(self) -> list[str]:
        out = [
            f"instance: {self.name}",
            f"n: {self.n}",
            f"m: {self.m}",
            f"graph_forced: {self.graph_forced}",
            f"graph_removed: {self.graph_removed}",
            f"graph_contracted: {self.graph_contracted}",
            f"subgraph_count: {self.subgraph_count}",
            f"subgraph_vertices: {self.subgraph_vertices}",
        ]
        for key in sorted(self.cycle_rules):
            out.append(f"cycles_{key}: {self.cycle_rules[key]}")
        out.append(f"enumeration_complete: {str(self.enumeration_complete).lower()}")
        out.append(f"residual_graphs: {self.residual_graphs}")
        out.append(f"residual_vertices: {self.residual_vertices}")
        for key in sorted(self.cover_rules):
            out.append(f"cover_{key}: {self.cover_rules[key]}")
        out += [
            f"cover_included: {self.cover_included}",
            f"cover_offset: {self.cover_offset}",
            f"lazy_iterations: {self.lazy_iterations}",
            f"lazy_constraints_added: {self.lazy_constraints_added}",
            f"solution_size: {self.solution_size}",
            f"optimal: {str(self.optimal).lower()}",
            f"wall_time_s: {self.wall_time:.3f}",
        ]
        return out


@dataclass
class PipelineResult:
    solution: Solution
    report: RunReport
    model: IlpModel
    cycles: tuple[Cycle, ...] = ()
    cover: CoverProblem | None = None


def solve_dfvs(g: DirectedGraph, cfg: SolverConfig | None = None) -> Solution:
    return run_pipeline(g, cfg).solution


def run_pipeline(
    g: DirectedGraph,
    cfg: SolverConfig | None = None,
    deadline: Deadline | None = None,
) -> PipelineResult:
    """Full solve: kernelize, enumerate chordless cycles per component,
    reduce the cover problem, optimize the residue, lift everything back,
    and certify the answer against the untouched input."""
    cfg = cfg or SolverConfig()
    if deadline is None:
        deadline = Deadline(cfg.time_limit)
    started = time.monotonic()
    report = RunReport(n=g.vertex_count(), m=g.arc_count())

    subgraphs, forced, trace = kernelize_graph(g)
    report.graph_forced = len(forced)
    report.graph_contracted = sum(
        1 for e in trace.events if isinstance(e, Contracted)
    )
    report.graph_removed = (
        sum(1 for e in trace.events if isinstance(e, RemovedSourceSink))
        + trace.acyclic_singletons
    )
    report.subgraph_count = len(subgraphs)
    report.subgraph_vertices = sum(s.vertex_count() for s in subgraphs)

    problem = CoverProblem()
    found_cycles: list[Cycle] = []
    for sub in subgraphs:
        outcome = enumerate_chordless(sub, cfg.enum_budget, deadline)
        found_cycles.extend(sorted(outcome.cycles.cycles))
        for key, value in outcome.rule_stats.items():
            report.cycle_rules[key] = report.cycle_rules.get(key, 0) + value
        residual_sets = [r.vertex_set() for r in outcome.residuals]
        for cycle in sorted(outcome.cycles.cycles):
            # a cycle lying inside a residual graph is implied by that
            # graph's acyclicity constraint; materializing it would only
            # bloat the model (incomplete searches can dump huge piles)
            if any(set(cycle) <= rv for rv in residual_sets):
                continue
            if len(cycle) == 2:
                problem.add_edge(*cycle)
            else:
                problem.add_big_set(cycle)
        for residual in outcome.residuals:
            problem.attach_graph(residual)
        if not outcome.cycles.complete:
            report.enumeration_complete = False
    report.residual_graphs = len(problem.graphs)
    report.residual_vertices = sum(h.vertex_count() for h in problem.graphs)

    reduce_cover(problem, cfg.generalized_desks, report.cover_rules, deadline)
    report.cover_included = len(problem.forced)
    report.cover_offset = problem.offset

    if problem.graphs:
        outcome = lazy_loop(problem, cfg, deadline)
        residue_solution = outcome.solution
        report.lazy_iterations = outcome.iterations
        report.lazy_constraints_added = outcome.constraints_added
        model = outcome.model
    else:
        model = build_model(problem)
        if model.constraints:
            residue_solution = solve_cover_exact(model, cfg, deadline)
        else:
            residue_solution = Solution(frozenset(), True, 0)

    cover_solution = lift_cover_solution(residue_solution.vertices, problem.events)
    final = lift_graph_solution(cover_solution, forced, trace)
    if not final <= g.vertex_set():
        raise RuntimeError("lifted solution references vertices outside the input")
    if not is_acyclic(g.without(final)):
        raise RuntimeError("lifted solution does not break every cycle")

    lower = (
        len(forced)
        + problem.offset
        + report.cover_included
        + residue_solution.lower_bound
    )
    solution = Solution(frozenset(final), residue_solution.optimal, lower)
    if solution.optimal and solution.size != lower:
        raise RuntimeError("solution accounting is inconsistent")
    report.solution_size = solution.size
    report.optimal = solution.optimal
    report.wall_time = time.monotonic() - started
    return PipelineResult(solution, report, model, tuple(found_cycles), problem)


# -- LP text export -------------------------------------------------------------


def export_lp(model: IlpModel) -> str:
    """Render the model in LP text form, binary variables named ``x<id>``,
    one >=1 row per constraint.  An escape hatch for external solvers."""
    lines = ["Minimize"]
    objective = " + ".join(f"x{v}" for v in model.variables)
    lines.append(f" obj: {objective}" if objective else " obj:")
    lines.append("Subject To")
    for index, constraint in enumerate(model.constraints, start=1):
        left = " + ".join(f"x{v}" for v in sorted(constraint))
        lines.append(f" c{index}: {left} >= 1")
    lines.append("Binary")
    for v in model.variables:
        lines.append(f" x{v}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> IlpModel:
    """Read back the LP text produced by :func:`export_lp`."""
    variables: list[int] = []
    constraints: list[frozenset[int]] = []
    section = ""
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        lowered = line.lower()
        if lowered in {"minimize", "subject to", "binary", "end"}:
            section = lowered
            continue
        if section == "subject to":
            _, _, body = line.partition(":")
            left, _, right = body.partition(">=")
            if right.strip() != "1":
                raise ValueError(f"unsupported constraint line {raw!r}")
            members = frozenset(
                int(term.strip()[1:]) for term in left.split("+") if term.strip()
            )
            constraints.append(members)
        elif section == "binary":
            variables.append(int(line[1:]))
    return IlpModel(tuple(sorted(variables)), tuple(constraints))
