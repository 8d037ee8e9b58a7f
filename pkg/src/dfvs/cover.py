"""Reduction of the minimum cover problem built from harvested cycles.

State is a hypergraph cover instance: size-two sets live as an edge adjacency
(this is the vertex-cover part), larger sets are kept as explicit "big sets",
and graphs that never got fully enumerated hang off the problem as implicit
acyclicity constraints.  A vertex in no big set and no graph is *bare*; most
vertex-cover rules only fire on bare vertices because their exchange
arguments move cover members around a neighborhood and must not disturb a
constraint they cannot see.

Every structural change is appended to an event trace.  Solving the reduced
residue and replaying the trace newest-first reconstructs a solution of the
original instance; replay validates each step and raises instead of emitting
a broken cover.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import DirectedGraph


class CoverLiftError(RuntimeError):
    """Trace replay could not justify either branch of an alternative."""


@dataclass(frozen=True)
class Include:
    vertex: int


@dataclass(frozen=True)
class Exclude:
    vertex: int


@dataclass(frozen=True)
class Fold:
    """Degree-two fold: ``merged`` stands for choosing both outer vertices,
    its absence for choosing the center."""

    merged: int
    outer: tuple[int, int]
    center: int


@dataclass(frozen=True)
class FunnelFold:
    """Funnel alternative on adjacent u, v: exactly one of them joins the
    final cover.  ``u_private`` / ``v_private`` are the neighbors exclusive
    to each side at fold time; whichever private side ended up fully covered
    licenses keeping the opposite endpoint out."""

    u: int
    v: int
    u_private: frozenset[int]
    v_private: frozenset[int]


@dataclass(frozen=True)
class DeskFold:
    """Alternative over an induced 4-cycle: one opposite pair joins the
    cover, the other stays out."""

    first_pair: tuple[int, int]
    second_pair: tuple[int, int]
    first_private: frozenset[int]
    second_private: frozenset[int]


CoverEvent = Include | Exclude | Fold | FunnelFold | DeskFold


class CoverProblem:
    """Mutable cover instance with an event trace for solution lift-back."""

    def __init__(self) -> None:
        self._adj: dict[int, dict[int, None]] = {}
        self.big_sets: list[set[int]] = []
        self.graphs: list[DirectedGraph] = []
        self.forced: set[int] = set()
        self.offset: int = 0
        self.events: list[CoverEvent] = []
        self._max_id: int = 0
        self._set_keys: set[frozenset[int]] = set()

    # -- construction -----------------------------------------------------

    def add_vertex(self, v: int) -> None:
        if v not in self._adj:
            self._adj[v] = {}
            if v > self._max_id:
                self._max_id = v

    def add_edge(self, u: int, v: int) -> bool:
        if u == v:
            raise ValueError("cover edges join two distinct vertices")
        self.add_vertex(u)
        self.add_vertex(v)
        if v in self._adj[u]:
            return False
        self._adj[u][v] = None
        self._adj[v][u] = None
        return True

    def add_big_set(self, members) -> None:
        big = set(members)
        if len(big) < 2:
            raise ValueError("cover sets need at least two members")
        for v in big:
            self.add_vertex(v)
        if len(big) == 2:
            self.add_edge(*sorted(big))
            return
        key = frozenset(big)
        if key not in self._set_keys:
            self._set_keys.add(key)
            self.big_sets.append(big)

    def _reindex_big_sets(self) -> None:
        """Call after any direct mutation of ``big_sets`` so duplicate
        detection stays truthful."""
        self._set_keys = {frozenset(s) for s in self.big_sets}

    def attach_graph(self, g: DirectedGraph) -> None:
        for v in g.vertices():
            self.add_vertex(v)
        self.graphs.append(g.copy())

    # -- queries ------------------------------------------------------------

    def vertices(self):
        return iter(self._adj)

    def vertex_set(self) -> set[int]:
        return set(self._adj)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def edges(self):
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def big_set_indices(self, v: int) -> list[int]:
        return [i for i, s in enumerate(self.big_sets) if v in s]

    def in_graph(self, v: int) -> bool:
        return any(v in g for g in self.graphs)

    def is_bare(self, v: int) -> bool:
        return not self.in_graph(v) and all(v not in s for s in self.big_sets)

    def fresh_vertex(self) -> int:
        self._max_id += 1
        return self._max_id

    def is_empty(self) -> bool:
        return not self._adj and not self.big_sets and not self.graphs

    def copy(self) -> "CoverProblem":
        dup = CoverProblem()
        dup._adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        dup.big_sets = [set(s) for s in self.big_sets]
        dup.graphs = [g.copy() for g in self.graphs]
        dup.forced = set(self.forced)
        dup.offset = self.offset
        dup.events = list(self.events)
        dup._max_id = self._max_id
        dup._set_keys = set(self._set_keys)
        return dup

    # -- mutations shared by the rules ---------------------------------------

    def include(self, v: int) -> None:
        """Commit v to the cover: every set through it is satisfied, and any
        attached graph loses it (followed by peeling of vertices that can no
        longer lie on a cycle)."""
        self.events.append(Include(v))
        self.forced.add(v)
        if any(v in s for s in self.big_sets):
            self.big_sets = [s for s in self.big_sets if v not in s]
            self._reindex_big_sets()
        for w in list(self._adj[v]):
            del self._adj[w][v]
        del self._adj[v]
        kept_graphs = []
        for g in self.graphs:
            if v in g:
                g.remove_vertex(v)
                _peel_degree_zero(g)
            if g.vertex_count():
                kept_graphs.append(g)
        self.graphs = kept_graphs

    def exclude_isolated(self, v: int) -> None:
        """Drop a vertex that no constraint touches anymore."""
        if self._adj[v] or not self.is_bare(v):
            raise ValueError(f"vertex {v} is still constrained")
        self.events.append(Exclude(v))
        del self._adj[v]

    def _delete_unconstrained(self, v: int) -> None:
        """Remove a vertex whose fate an alternative event will decide."""
        for w in list(self._adj[v]):
            del self._adj[w][v]
        del self._adj[v]


def _peel_degree_zero(g: DirectedGraph) -> None:
    """Drop vertices of in- or out-degree zero until none remain; this keeps
    exactly the part of the graph that can still carry a cycle."""
    again = True
    while again:
        again = False
        for v in list(g.vertices()):
            if g.in_degree(v) == 0 or g.out_degree(v) == 0:
                g.remove_vertex(v)
                again = True


# -- rules, in the order reduce_cover applies them ------------------------------


def rule_subsumption(p: CoverProblem) -> bool:
    """Drop any set containing another set; duplicates collapse.

    Edges cannot contain one another (the adjacency deduplicates), so the
    only candidates for removal are big sets holding an edge or a smaller
    big set.  Processing in ascending size catches every containment.
    """
    ordered = sorted(p.big_sets, key=lambda s: (len(s), sorted(s)))
    kept: list[set[int]] = []
    changed = False
    for big in ordered:
        if any(p.has_edge(u, v) for u in big for v in big if u < v):
            changed = True
            continue
        if any(small <= big for small in kept):
            changed = True
            continue
        kept.append(big)
    if changed:
        p.big_sets = kept
        p._reindex_big_sets()
    return changed


def rule_degree_low(p: CoverProblem) -> bool:
    """Degree-zero and degree-one handling.

    A vertex with no edges, no graphs, and exactly one big set can always be
    swapped for another member of that set, so it leaves the set.  A bare
    vertex with a single edge never beats its neighbor, so the neighbor is
    committed.  Vertices no constraint mentions are dropped outright.
    """
    for v in sorted(p.vertex_set()):
        if v not in p:
            continue
        if p.degree(v) == 0 and not p.in_graph(v):
            sets = p.big_set_indices(v)
            if not sets:
                p.exclude_isolated(v)
                return True
            if len(sets) == 1:
                big = p.big_sets[sets[0]]
                big.discard(v)
                if len(big) == 2:
                    del p.big_sets[sets[0]]
                    p._reindex_big_sets()
                    p.add_edge(*sorted(big))
                else:
                    p._reindex_big_sets()
                return True
        elif p.degree(v) == 1 and p.is_bare(v):
            (u,) = p.neighbors(v)
            p.include(u)
            p.exclude_isolated(v)
            return True
    return False


def rule_fold_degree_two(p: CoverProblem) -> bool:
    """Bare degree-two vertices: adjacent neighbors make the vertex
    simplicial (commit both neighbors); bare non-adjacent ones fold into a
    fresh merged vertex that inherits both neighborhoods."""
    for v in sorted(p.vertex_set()):
        if v not in p or p.degree(v) != 2 or not p.is_bare(v):
            continue
        u, w = sorted(p.neighbors(v))
        if p.has_edge(u, w):
            p.include(u)
            p.include(w)
            p.exclude_isolated(v)
            return True
        if p.is_bare(u) and p.is_bare(w):
            merged_nbrs = (set(p.neighbors(u)) | set(p.neighbors(w))) - {v}
            fresh = p.fresh_vertex()
            p._delete_unconstrained(v)
            p._delete_unconstrained(u)
            p._delete_unconstrained(w)
            p.add_vertex(fresh)
            for x in sorted(merged_nbrs):
                p.add_edge(fresh, x)
            p.offset += 1
            p.events.append(Fold(fresh, (u, w), v))
            return True
    return False


def rule_simplicial(p: CoverProblem) -> bool:
    """A bare vertex whose neighborhood is a clique loses: some optimal cover
    takes the whole neighborhood instead.  Neighbors need not be bare."""
    for v in sorted(p.vertex_set()):
        if v not in p or p.degree(v) < 1 or not p.is_bare(v):
            continue
        nbrs = sorted(p.neighbors(v))
        if all(p.has_edge(a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1 :]):
            for u in nbrs:
                p.include(u)
            p.exclude_isolated(v)
            return True
    return False


def rule_domination(p: CoverProblem) -> bool:
    """If everything constraining a neighbor u is also constrained by v
    (edges and big sets alike, with u attached to no graph), some optimal
    cover contains v."""
    for v in sorted(p.vertex_set()):
        if v not in p:
            continue
        v_nbrs = set(p.neighbors(v))
        v_sets = {frozenset(p.big_sets[i]) for i in p.big_set_indices(v)}
        for u in sorted(v_nbrs):
            if p.in_graph(u):
                continue
            if not set(p.neighbors(u)) - {v} <= v_nbrs:
                continue
            u_sets = {frozenset(p.big_sets[i]) for i in p.big_set_indices(u)}
            if not u_sets <= v_sets:
                continue
            p.include(v)
            return True
    return False


def _resolve_alternative_commons(p: CoverProblem, commons) -> None:
    for c in sorted(commons):
        if c in p:
            p.include(c)


def rule_funnel(p: CoverProblem) -> bool:
    """Funnel: bare v whose neighborhood is one vertex u plus a clique.

    Exactly one of u, v sits in some optimal cover.  Vertices adjacent to
    both sides are committed outright; the leftover exclusive neighborhoods
    get a complete bipartite join that encodes "one exclusive side must be
    fully covered".  Big sets through u are rewritten onto each exclusive
    neighbor of v, which reproduces "u covers the set" as "all of v's
    exclusive neighbors were chosen".  Blocked when u sits in a graph, or
    when u has big sets and any exclusive neighbor of v sits in a graph.
    """
    for v in sorted(p.vertex_set()):
        if v not in p or p.degree(v) < 2 or not p.is_bare(v):
            continue
        nbrs = sorted(p.neighbors(v))
        for u in nbrs:
            rest = [x for x in nbrs if x != u]
            if not all(
                p.has_edge(a, b) for i, a in enumerate(rest) for b in rest[i + 1 :]
            ):
                continue
            if p.in_graph(u):
                continue
            u_nbrs = set(p.neighbors(u))
            v_nbrs = set(nbrs)
            v_private = v_nbrs - u_nbrs - {u}
            if not v_private:
                continue  # neighborhood would be a whole clique: simplicial
            u_sets = p.big_set_indices(u)
            if u_sets and any(p.in_graph(w) for w in v_private):
                continue
            u_private = u_nbrs - v_nbrs - {v}
            commons = u_nbrs & v_nbrs
            _resolve_alternative_commons(p, commons)
            replicated = [set(p.big_sets[i]) for i in p.big_set_indices(u)]
            p.big_sets = [s for s in p.big_sets if u not in s]
            p._reindex_big_sets()
            p._delete_unconstrained(u)
            p._delete_unconstrained(v)
            for big in replicated:
                for w in sorted(v_private):
                    p.add_big_set((big - {u}) | {w})
            for w in sorted(v_private):
                for x in sorted(u_private):
                    p.add_edge(w, x)
            p.offset += 1
            p.events.append(
                FunnelFold(u, v, frozenset(u_private), frozenset(v_private))
            )
            return True
    return False


def _unconfined_witness(p: CoverProblem, v: int) -> set[int] | None:
    """Run the confinement extension from v over the edge structure.

    Returns the witness set when v is provably in some optimal cover and the
    whole witness plus its neighborhood is bare; returns None when v is
    confined or a non-bare vertex enters the picture (the exchange argument
    would then touch constraints it cannot repair).
    """
    witness = {v}
    while True:
        boundary: set[int] = set()
        for s in witness:
            boundary.update(p.neighbors(s))
        boundary -= witness
        if any(not p.is_bare(x) for x in witness | boundary):
            return None
        closed = witness | boundary
        best: tuple[int, int] | None = None
        best_extension: set[int] = set()
        for u in sorted(boundary):
            u_nbrs = set(p.neighbors(u))
            if len(u_nbrs & witness) != 1:
                continue
            extension = u_nbrs - closed
            key = (len(extension), u)
            if best is None or key < best:
                best = key
                best_extension = extension
        if best is None:
            return None
        if len(best_extension) == 0:
            return witness
        if len(best_extension) == 1:
            witness |= best_extension
            continue
        return None


def rule_unconfined(p: CoverProblem) -> bool:
    for v in sorted(p.vertex_set()):
        if v not in p or p.degree(v) == 0:
            continue
        if _unconfined_witness(p, v) is not None:
            p.include(v)
            return True
    return False


def _desk_conditions(
    p: CoverProblem, a: int, b: int, c: int, d: int, generalized: bool
) -> bool:
    degrees = [p.degree(x) for x in (a, b, c, d)]
    if any(deg < 3 for deg in degrees):
        return False
    na, nb, nc, nd = (set(p.neighbors(x)) for x in (a, b, c, d))
    if len(na | nc) > 4:
        return False
    if generalized:
        return len(nb - nd) <= 1 and len(nd - nb) <= 1
    return all(deg <= 4 for deg in degrees) and len(nb | nd) <= 4


def rule_desk(p: CoverProblem, generalized: bool = False) -> bool:
    """Fold an induced 4-cycle whose neighborhood sizes make the two opposite
    pairs an alternative.  The classic shape caps every degree at four and
    both pair neighborhoods at four; the generalized shape keeps the cap on
    one pair but only bounds how much the other pair's members differ.

    All four vertices and all of their neighbors must be bare.  Vertices
    adjacent to both pairs are committed, exclusive neighborhoods get the
    bipartite join, and the cover grows by two.
    """
    for a in sorted(p.vertex_set()):
        if a not in p:
            continue
        for b in sorted(p.neighbors(a)):
            for c in sorted(p.neighbors(b)):
                if c == a or p.has_edge(a, c):
                    continue
                for d in sorted(set(p.neighbors(c)) & set(p.neighbors(a))):
                    if d == b or p.has_edge(b, d):
                        continue
                    if not _desk_conditions(p, a, b, c, d, generalized):
                        continue
                    ring = {a, b, c, d}
                    halo = set()
                    for x in ring:
                        halo.update(p.neighbors(x))
                    if any(not p.is_bare(x) for x in ring | halo):
                        continue
                    first_out = (set(p.neighbors(a)) | set(p.neighbors(c))) - ring
                    second_out = (set(p.neighbors(b)) | set(p.neighbors(d))) - ring
                    commons = first_out & second_out
                    first_private = first_out - second_out
                    second_private = second_out - first_out
                    _resolve_alternative_commons(p, commons)
                    for x in (a, b, c, d):
                        p._delete_unconstrained(x)
                    for w in sorted(first_private):
                        for x in sorted(second_private):
                            p.add_edge(w, x)
                    p.offset += 2
                    p.events.append(
                        DeskFold(
                            (a, c),
                            (b, d),
                            frozenset(first_private),
                            frozenset(second_private),
                        )
                    )
                    return True
    return False


_RULES: list[tuple[str, object]] = [
    ("subsumption", rule_subsumption),
    ("degree_low", rule_degree_low),
    ("fold_degree_two", rule_fold_degree_two),
    ("simplicial", rule_simplicial),
    ("domination", rule_domination),
    ("funnel", rule_funnel),
    ("unconfined", rule_unconfined),
    ("desk", rule_desk),
]


def reduce_cover(
    p: CoverProblem,
    generalized_desks: bool = False,
    stats: dict[str, int] | None = None,
    deadline=None,
) -> CoverProblem:
    """Apply all rules to a fixpoint, restarting from the cheapest after any
    change.  Mutates and returns ``p``; per-rule fire counts land in
    ``stats`` when given.  An expired deadline stops the loop early, which
    is safe: reduction is an accelerator, never required for correctness."""
    while True:
        if deadline is not None and deadline.expired():
            return p
        fired = False
        for name, rule in _RULES:
            changed = rule(p, generalized_desks) if name == "desk" else rule(p)
            if changed:
                if stats is not None:
                    stats[name] = stats.get(name, 0) + 1
                fired = True
                break
        if not fired:
            return p


def dump_cover(p: CoverProblem) -> str:
    """Line-oriented debug rendering: ``e u v`` per edge, ``s v1 v2 ...``
    per big set, and one ``g`` block per attached graph in instance format."""
    from .pace import serialize_pace

    lines: list[str] = []
    for u, v in sorted(p.edges()):
        lines.append(f"e {u} {v}")
    for big in sorted(p.big_sets, key=lambda s: (len(s), sorted(s))):
        lines.append("s " + " ".join(str(v) for v in sorted(big)))
    for g in p.graphs:
        lines.append("g")
        lines.append(serialize_pace(g).rstrip("\n"))
    return "\n".join(lines) + "\n" if lines else ""


def lift_cover_solution(reduced_solution, events) -> set[int]:
    """Replay the trace newest-first over a solution of the reduced problem.

    Includes reappear, folds expand to the side the solution chose, and
    alternatives pick whichever endpoint pair the surviving cover justifies;
    an unjustifiable alternative raises, since it means a rule was unsound.
    """
    solution = set(reduced_solution)
    for event in reversed(events):
        if isinstance(event, Include):
            solution.add(event.vertex)
        elif isinstance(event, Exclude):
            if event.vertex in solution:
                raise CoverLiftError(f"dropped vertex {event.vertex} in solution")
        elif isinstance(event, Fold):
            if event.merged in solution:
                solution.discard(event.merged)
                solution.update(event.outer)
            else:
                solution.add(event.center)
        elif isinstance(event, FunnelFold):
            if event.v_private <= solution:
                solution.add(event.u)
            elif event.u_private <= solution:
                solution.add(event.v)
            else:
                raise CoverLiftError(
                    f"funnel over ({event.u}, {event.v}): neither side justified"
                )
        elif isinstance(event, DeskFold):
            if not event.first_private <= solution:
                if not event.second_private <= solution:
                    raise CoverLiftError(
                        f"desk over {event.first_pair}/{event.second_pair}: "
                        "neither side justified"
                    )
                solution.update(event.first_pair)
            else:
                solution.update(event.second_pair)
    return solution
