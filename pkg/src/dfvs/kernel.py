"""Kernelization of the input graph before any cycle work happens.

Four rules run to a queue-driven fixpoint: vertices carrying a self-loop are
forced into the solution, sources and sinks are deleted, and vertices with a
unique in- or out-neighbor are contracted into that neighbor.  A Tarjan split
then isolates the strongly connected components, each of which gets a second
fixpoint pass.  Every mutation is logged so solutions of the reduced
subproblems can be lifted back to the original graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .digraph import (
    DirectedGraph,
    is_strongly_connected,
    strongly_connected_components,
)


class ContractionError(ValueError):
    """contract_vertex called on a vertex without a degree-one side."""


class LiftError(RuntimeError):
    """A lifted solution contradicts the recorded reduction trace."""


@dataclass(frozen=True)
class ForcedSelfLoop:
    vertex: int


@dataclass(frozen=True)
class RemovedSourceSink:
    vertex: int


@dataclass(frozen=True)
class Contracted:
    vertex: int
    into: int


GraphReductionEvent = ForcedSelfLoop | RemovedSourceSink | Contracted


@dataclass
class ReductionTrace:
    events: list[GraphReductionEvent] = field(default_factory=list)
    # vertices dropped as acyclic singleton components; they need no replay
    # but the bookkeeping keeps vertex accounting exact for reports
    acyclic_singletons: int = 0


def contract_vertex(g: DirectedGraph, v: int) -> int:
    """Splice v out of the graph, rerouting its arcs through the unique
    neighbor on its degree-one side.  Returns that neighbor.

    A 2-cycle with the neighbor collapses to a self-loop on the survivor,
    which the caller's worklist picks up as a forced vertex.  Mutates ``g``.
    """
    if g.has_self_loop(v):
        raise ContractionError(f"vertex {v} has a self-loop")
    if g.in_degree(v) == 1:
        (u,) = g.predecessors(v)
        targets = g.successors(v)
        g.remove_vertex(v)
        for w in targets:
            g.add_arc(u, w)
        return u
    if g.out_degree(v) == 1:
        (u,) = g.successors(v)
        sources = g.predecessors(v)
        g.remove_vertex(v)
        for w in sources:
            g.add_arc(w, u)
        return u
    raise ContractionError(f"vertex {v} has no degree-one side")


def _degree_pass(g: DirectedGraph, forced: set[int], trace: ReductionTrace) -> None:
    """Apply self-loop / source-sink / contraction rules to fixpoint."""
    queue: deque[int] = deque(g.vertices())
    queued = set(queue)
    while queue:
        v = queue.popleft()
        queued.discard(v)
        if v not in g:
            continue
        if g.has_self_loop(v):
            forced.add(v)
            affected = g.undirected_neighbors(v)
            g.remove_vertex(v)
            trace.events.append(ForcedSelfLoop(v))
        elif g.in_degree(v) == 0 or g.out_degree(v) == 0:
            affected = g.undirected_neighbors(v)
            g.remove_vertex(v)
            trace.events.append(RemovedSourceSink(v))
        elif g.in_degree(v) == 1 or g.out_degree(v) == 1:
            affected = g.undirected_neighbors(v)
            survivor = contract_vertex(g, v)
            trace.events.append(Contracted(v, survivor))
            affected = affected + (survivor,)
        else:
            continue
        for w in affected:
            if w in g and w not in queued:
                queue.append(w)
                queued.add(w)


def kernelize_graph(
    g: DirectedGraph,
) -> tuple[list[DirectedGraph], set[int], ReductionTrace]:
    """Reduce ``g`` to strongly connected subproblems plus forced vertices.

    The input graph is not modified.  Each returned subgraph is strongly
    connected, free of self-loops, and has minimum in- and out-degree of at
    least two.  Strong connectivity is re-checked after the second degree
    pass; should a pass have broken it (removals can split a component), the
    pieces are re-split rather than returned as-is.
    """
    work = g.copy()
    forced: set[int] = set()
    trace = ReductionTrace()
    _degree_pass(work, forced, trace)

    subgraphs: list[DirectedGraph] = []
    if work.vertex_count():
        pending: list[DirectedGraph] = []
        components = strongly_connected_components(work)
        for comp in components:
            if len(comp) >= 2:
                pending.append(work.subgraph(comp))
            else:
                trace.acyclic_singletons += 1
        while pending:
            sub = pending.pop(0)
            _degree_pass(sub, forced, trace)
            if sub.vertex_count() == 0:
                continue
            if is_strongly_connected(sub):
                if sub.vertex_count() >= 2:
                    subgraphs.append(sub)
                else:
                    trace.acyclic_singletons += 1
                continue
            for comp in strongly_connected_components(sub):
                if len(comp) >= 2:
                    pending.append(sub.subgraph(comp))
                else:
                    trace.acyclic_singletons += 1
    return subgraphs, forced, trace


def lift_graph_solution(
    sub_solution: set[int], forced: set[int], trace: ReductionTrace
) -> set[int]:
    """Map a solution of the reduced subproblems back to the original graph.

    Contracted vertices never need to enter the solution: every cycle through
    one also runs through its contraction survivor.  The replay asserts this
    (and that deleted vertices stayed out) so a broken rule fails loudly
    instead of producing an invalid answer.
    """
    lifted = set(sub_solution) | set(forced)
    for event in reversed(trace.events):
        if isinstance(event, Contracted):
            if event.vertex in lifted:
                raise LiftError(f"contracted vertex {event.vertex} in solution")
        elif isinstance(event, RemovedSourceSink):
            if event.vertex in lifted:
                raise LiftError(f"deleted vertex {event.vertex} in solution")
        elif isinstance(event, ForcedSelfLoop):
            if event.vertex not in lifted:
                raise LiftError(f"forced vertex {event.vertex} missing")
    return lifted
