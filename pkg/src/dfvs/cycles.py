"""Chordless directed cycle machinery.

A cascade of cheap structural rules tries to turn a strongly connected graph
into its complete set of chordless cycles: 2-cycles are harvested and their
arcs dropped, components split along strongly connected pieces and weak
separators, degree-one chains under a shortcut arc disappear, single-hub
graphs enumerate by direct walk, and whatever survives goes to a blocked
depth-first search with a node budget.  A constraint the search cannot
finish is handed back as a residual graph for lazy treatment.

Cycles are vertex tuples rotated so the smallest id leads; a cycle is
chordless when no graph arc joins two of its vertices other than the cycle
arcs themselves (a reverse arc between consecutive vertices counts as a
chord).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .digraph import (
    DirectedGraph,
    find_cycle,
    is_strongly_connected,
    strongly_connected_components,
    weak_articulation_points,
)

Cycle = tuple[int, ...]

DEFAULT_ENUM_BUDGET = 10_000_000


def normalize_cycle(seq) -> Cycle:
    """Rotate so the smallest vertex id comes first."""
    items = tuple(seq)
    pivot = items.index(min(items))
    return items[pivot:] + items[:pivot]


@dataclass
class CycleSet:
    cycles: set[Cycle]
    complete: bool


@dataclass
class EnumOutcome:
    cycles: CycleSet
    residuals: list[DirectedGraph]
    rule_stats: dict[str, int] = field(default_factory=dict)


def mixed_rng(seed: int, *salts: int) -> random.Random:
    """Deterministic generator derived from a seed and integer salts."""
    x = seed & 0xFFFFFFFFFFFFFFFF
    for s in salts:
        x = (x * 6364136223846793005 + s + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
    return random.Random(x)


# -- individual rules ---------------------------------------------------------


def reduce_two_cycles(g: DirectedGraph) -> set[Cycle]:
    """Emit every 2-cycle and delete both of its arcs from ``g`` (mutates).

    Any longer cycle through one of those arcs would carry the reverse arc
    as a chord, so nothing chordless is lost; cycles found later that used a
    removed arc as a chord get filtered out at the end of the cascade.
    """
    found: set[Cycle] = set()
    for u in list(g.vertices()):
        for v in g.successors(u):
            if v > u and g.has_arc(v, u):
                found.add((u, v))
    for u, v in found:
        g.remove_arc(u, v)
        g.remove_arc(v, u)
    return found


def contract_interior_paths(g: DirectedGraph) -> bool:
    """Remove chains of in/out-degree-one vertices bypassed by a shortcut arc.

    For a path u -> m1 -> ... -> mk -> v with every m of in- and out-degree
    one and the arc u -> v present, any cycle through an m also runs through
    u and v and is chorded by the shortcut, so the interior cannot be on a
    chordless cycle.  Mutates ``g``; returns whether anything was removed.
    """

    def chainlike(v: int) -> bool:
        return g.in_degree(v) == 1 and g.out_degree(v) == 1 and not g.has_self_loop(v)

    changed = False
    handled: set[int] = set()
    for start in list(g.vertices()):
        if start not in g or start in handled or not chainlike(start):
            continue
        # walk back to the front of the maximal chain; in-degrees of one make
        # the walk deterministic, and returning to start means the chain is a
        # pure cycle, which belongs to the simple-cycle rule instead
        head = start
        pure_cycle = False
        while True:
            (pred,) = g.predecessors(head)
            if not chainlike(pred):
                break
            if pred == start:
                pure_cycle = True
                break
            head = pred
        if pure_cycle:
            handled.add(start)
            continue
        chain = [head]
        while True:
            (succ,) = g.successors(chain[-1])
            if not chainlike(succ):
                break
            chain.append(succ)
        handled.update(chain)
        (u,) = g.predecessors(chain[0])
        (v,) = g.successors(chain[-1])
        if u == v:
            continue  # lollipop: the shortcut would be a self-loop
        if g.has_arc(u, v):
            for m in chain:
                g.remove_vertex(m)
            changed = True
    return changed


def _hub_walk(g: DirectedGraph, hub: int) -> set[Cycle]:
    """All chordless cycles of a graph whose non-hub vertices have in-degree
    one.  Every cycle passes the hub, every vertex is reached by a unique
    path, and closing back to the hub is always the only chordless option."""
    cycles: set[Cycle] = set()
    path = [hub]

    def walk(v: int) -> None:
        if v != hub and g.has_arc(v, hub):
            cycles.add(normalize_cycle(path))
            return
        for child in g.successors(v):
            path.append(child)
            walk(child)
            path.pop()

    walk(hub)
    return cycles


def enumerate_hub(g: DirectedGraph) -> CycleSet | None:
    """Complete enumeration when a single vertex owns all branching on one
    side: at most one vertex of in-degree >= 2 (walk forward from it) or of
    out-degree >= 2 (walk the reversed graph).  Returns None when the shape
    does not apply.  Requires strong connectivity."""
    if g.vertex_count() < 2 or not is_strongly_connected(g):
        return None
    in_heavy = [v for v in g.vertices() if g.in_degree(v) >= 2]
    if len(in_heavy) <= 1:
        hub = in_heavy[0] if in_heavy else min(g.vertices())
        return CycleSet(_hub_walk(g, hub), True)
    out_heavy = [v for v in g.vertices() if g.out_degree(v) >= 2]
    if len(out_heavy) <= 1:
        hub = out_heavy[0] if out_heavy else min(g.vertices())
        reverse_cycles = _hub_walk(g.reversed(), hub)
        return CycleSet(
            {normalize_cycle(tuple(reversed(c))) for c in reverse_cycles}, True
        )
    return None


def split_on_separator(g: DirectedGraph, mode: str) -> list[DirectedGraph] | None:
    """Split a constraint at a weak articulation point (``mode='vertex'``) or
    at an arc whose endpoint pair disconnects the skeleton (``mode='edge'``).

    Every chordless cycle lies entirely inside one returned piece (it cannot
    cross the separator twice), so the pieces can be enumerated separately.
    Returns None when no separator exists.
    """
    if mode == "vertex":
        points = weak_articulation_points(g)
        if not points:
            return None
        cut = min(points)
        pieces = _skeleton_components(g, {cut})
        if len(pieces) < 2:
            return None
        return [g.subgraph(piece | {cut}) for piece in pieces]
    if mode == "edge":
        for u, v in sorted(g.arcs()):
            if u == v:
                continue
            pieces = _skeleton_components(g, {u, v})
            if len(pieces) >= 2:
                return [g.subgraph(piece | {u, v}) for piece in pieces]
        return None
    raise ValueError(f"unknown separator mode {mode!r}")


def _skeleton_components(g: DirectedGraph, skip: set[int]) -> list[set[int]]:
    seen = set(skip)
    out: list[set[int]] = []
    for root in g.vertices():
        if root in seen:
            continue
        comp = {root}
        seen.add(root)
        frontier = [root]
        while frontier:
            v = frontier.pop()
            for w in g.undirected_neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    frontier.append(w)
        out.append(comp)
    return out


def brute_force_enum(
    g: DirectedGraph,
    budget: int = DEFAULT_ENUM_BUDGET,
    *,
    verify_blocks: bool = False,
    deadline=None,
) -> CycleSet:
    """Blocked depth-first enumeration of all chordless cycles.

    Visiting a vertex places one block on itself, on each of its in-neighbors
    and on each of its out-neighbors; a candidate child carrying more than the
    single block from its immediate parent would either revisit the path or
    close a chord, so it is skipped.  When the start vertex is a child of the
    current one, closing the cycle is the only chordless continuation.  Each
    start vertex is permanently blocked once exhausted so every cycle is
    produced exactly once, from its smallest vertex.

    A shared node counter aborts the search once ``budget`` is exceeded;
    ``complete`` is False in that case and the cycles found so far are kept.
    An expired ``deadline`` trips the same abort path.  ``verify_blocks``
    asserts that all block counters return to their entry values on every
    non-aborted unwind.
    """
    order = sorted(g.vertices())
    blocks = {v: 0 for v in order}
    found: set[Cycle] = set()
    path: list[int] = []
    nodes_visited = 0
    cap = budget
    big = 3 * len(order)

    def helper(v: int) -> None:
        nonlocal nodes_visited, cap
        nodes_visited += 1
        if deadline is not None and nodes_visited % 4096 == 0 and deadline.expired():
            cap = -1
        if nodes_visited > cap:
            return
        if path and v == path[0]:
            found.add(normalize_cycle(path))
            return
        snapshot = dict(blocks) if verify_blocks else None
        if path:
            blocks[v] += 1
            for p in g.predecessors(v):
                blocks[p] += 1
        for c in g.successors(v):
            blocks[c] += 1
        path.append(v)
        aborted = False
        if g.has_arc(v, path[0]):
            helper(path[0])
        else:
            for c in g.successors(v):
                if blocks[c] <= 1:
                    helper(c)
                    if nodes_visited > cap:
                        aborted = True
                        break
        if aborted:
            return  # whole search is being torn down; skip unwinding
        path.pop()
        if path:
            blocks[v] -= 1
            for p in g.predecessors(v):
                blocks[p] -= 1
        for c in g.successors(v):
            blocks[c] -= 1
        if verify_blocks:
            assert blocks == snapshot, f"block counters not restored at {v}"

    complete = True
    for start in order:
        blocks[start] = -big
        helper(start)
        blocks[start] = 1
        if nodes_visited > cap:
            complete = False
            break
    return CycleSet(found, complete)


def chord_filter(cycles: set[Cycle], g_original: DirectedGraph) -> set[Cycle]:
    """Keep only the cycles that are chordless with respect to ``g_original``.

    Needed because 2-cycle stripping runs before the rest of the cascade:
    later rules can report cycles whose chord was one of the removed arcs.
    """
    kept: set[Cycle] = set()
    for cycle in cycles:
        if not _has_chord(cycle, g_original):
            kept.add(cycle)
    return kept


def _has_chord(cycle: Cycle, g: DirectedGraph) -> bool:
    k = len(cycle)
    position = {v: i for i, v in enumerate(cycle)}
    for i, v in enumerate(cycle):
        succ = cycle[(i + 1) % k]
        for w in g.successors(v):
            if w in position and w != succ and w != v:
                return True
    return False


def trim_to_chordless(cycle, g: DirectedGraph) -> Cycle:
    """Shrink a directed cycle of ``g`` along chords until none remain.

    The first chord found scanning from the cycle head is shortcut each
    round; the result is a chordless cycle over a subset of the input's
    vertices.  A reverse arc between consecutive vertices shortcuts down to
    the 2-cycle it forms.
    """
    current = list(cycle)
    while True:
        k = len(current)
        if k <= 2:
            break
        position = {v: i for i, v in enumerate(current)}
        chord = None
        for i, v in enumerate(current):
            succ_index = (i + 1) % k
            for w in g.successors(v):
                j = position.get(w)
                if j is not None and j != succ_index and w != v:
                    chord = (i, j)
                    break
            if chord:
                break
        if chord is None:
            break
        i, j = chord
        if i < j:
            current = current[j:] + current[: i + 1]
        else:
            current = current[j : i + 1]
    return normalize_cycle(current)


def harvest_random_cycles(g: DirectedGraph, rounds: int = 50, seed: int = 0) -> set[Cycle]:
    """Randomized cycle collection used to seed and refresh the lazy loop.

    Each round works on a private copy: a randomized depth-first search finds
    a cycle, the cycle is trimmed to a chordless one, recorded, and one of
    its arcs (chosen at random) is deleted from the copy so the round keeps
    discovering new cycles until the copy is acyclic.  Output is the
    deduplicated union over all rounds and is a deterministic function of
    ``(g, rounds, seed)``.
    """
    found: set[Cycle] = set()
    for round_index in range(rounds):
        rng = mixed_rng(seed, round_index)
        work = g.copy()
        while True:
            raw = find_cycle(work, rng)
            if raw is None:
                break
            local = trim_to_chordless(raw, work)
            # arcs the round deleted earlier can reappear as chords of the
            # recorded cycle, so finish trimming against the full graph
            found.add(trim_to_chordless(local, g))
            drop = rng.randrange(len(local))
            work.remove_arc(local[drop], local[(drop + 1) % len(local)])
    return found


# -- the full cascade ----------------------------------------------------------


def enumerate_chordless(
    g: DirectedGraph, budget: int = DEFAULT_ENUM_BUDGET, deadline=None
) -> EnumOutcome:
    """Run the rule cascade over ``g`` and collect chordless cycles.

    Rules are retried from the cheapest after every change; separator
    splitting on arcs only runs when everything cheaper is stuck, and the
    budgeted search runs last.  Constraints the search gives up on come back
    as residual graphs carrying their full original arc sets (including arcs
    the 2-cycle rule stripped), so downstream chord checks see every arc.
    The input graph is left untouched.

    Expects self-loop-free input; graph kernelization consumes self-loops
    before any cycle work starts.
    """
    original = g.copy()
    cycles: set[Cycle] = set()
    residuals: list[DirectedGraph] = []
    stats: dict[str, int] = {}

    def bump(key: str, amount: int = 1) -> None:
        stats[key] = stats.get(key, 0) + amount

    pending: list[DirectedGraph] = [g.copy()]
    while pending:
        h = pending.pop()
        if h.vertex_count() == 0 or h.arc_count() == 0:
            continue
        two = reduce_two_cycles(h)
        if two:
            bump("two_cycles", len(two))
            cycles |= two
        components = strongly_connected_components(h)
        if len(components) != 1:
            bump("scc_splits")
            pending.extend(h.subgraph(c) for c in components if len(c) >= 2)
            continue
        if len(next(iter(components))) < 2:
            continue
        if all(h.out_degree(v) == 1 for v in h.vertices()):
            cycles.add(_walk_simple_cycle(h))
            bump("simple_cycles")
            continue
        if contract_interior_paths(h):
            bump("path_contractions")
            pending.append(h)
            continue
        in_heavy = [v for v in h.vertices() if h.in_degree(v) >= 2]
        if len(in_heavy) == 1:
            cycles |= _hub_walk(h, in_heavy[0])
            bump("in_hub_graphs")
            continue
        out_heavy = [v for v in h.vertices() if h.out_degree(v) >= 2]
        if len(out_heavy) == 1:
            reverse_cycles = _hub_walk(h.reversed(), out_heavy[0])
            cycles |= {normalize_cycle(tuple(reversed(c))) for c in reverse_cycles}
            bump("out_hub_graphs")
            continue
        pieces = split_on_separator(h, "vertex")
        if pieces:
            bump("vertex_splits")
            pending.extend(pieces)
            continue
        pieces = split_on_separator(h, "edge")
        if pieces:
            bump("edge_splits")
            pending.extend(pieces)
            continue
        result = brute_force_enum(h, budget, deadline=deadline)
        cycles |= result.cycles
        bump("brute_force_cycles", len(result.cycles))
        if not result.complete:
            bump("brute_force_giveups")
            residuals.append(original.subgraph(h.vertex_set()))

    kept = chord_filter(cycles, original)
    return EnumOutcome(CycleSet(kept, not residuals), residuals, stats)


def _walk_simple_cycle(g: DirectedGraph) -> Cycle:
    start = min(g.vertices())
    path = [start]
    (current,) = g.successors(start)
    while current != start:
        path.append(current)
        (current,) = g.successors(current)
    return normalize_cycle(path)
