"""Mutable directed graph plus the structural queries the solver leans on:
strongly connected components, acyclicity, and weak articulation points.

Adjacency is kept in insertion order on both sides, so every traversal in
the package is deterministic for a given construction sequence.  Parallel
arcs collapse to one; a self-loop is an ordinary arc ``v -> v`` stored in
both adjacency maps.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class DirectedGraph:
    """Directed graph over integer vertex ids with O(1) arc updates.

    A single instance is not safe for concurrent mutation; independent
    copies may be used freely across threads.
    """

    __slots__ = ("_out", "_in")

    def __init__(self) -> None:
        self._out: dict[int, dict[int, None]] = {}
        self._in: dict[int, dict[int, None]] = {}

    @classmethod
    def from_arcs(
        cls, vertices: Iterable[int] = (), arcs: Iterable[tuple[int, int]] = ()
    ) -> "DirectedGraph":
        g = cls()
        for v in vertices:
            g.add_vertex(v)
        for u, v in arcs:
            g.add_arc(u, v)
        return g

    # -- vertices ---------------------------------------------------------

    def add_vertex(self, v: int) -> None:
        if v not in self._out:
            self._out[v] = {}
            self._in[v] = {}

    def remove_vertex(self, v: int) -> None:
        for w in list(self._out[v]):
            del self._in[w][v]
        for w in list(self._in[v]):
            # self-loop entry may already be gone with the out side
            self._out[w].pop(v, None)
        del self._out[v]
        del self._in[v]

    def __contains__(self, v: int) -> bool:
        return v in self._out

    def vertices(self) -> Iterator[int]:
        return iter(self._out)

    def vertex_set(self) -> set[int]:
        return set(self._out)

    def vertex_count(self) -> int:
        return len(self._out)

    # -- arcs --------------------------------------------------------------

    def add_arc(self, u: int, v: int) -> bool:
        """Insert arc u->v, creating endpoints as needed.

        Returns False when the arc was already present (duplicates collapse).
        """
        self.add_vertex(u)
        self.add_vertex(v)
        if v in self._out[u]:
            return False
        self._out[u][v] = None
        self._in[v][u] = None
        return True

    def remove_arc(self, u: int, v: int) -> None:
        del self._out[u][v]
        del self._in[v][u]

    def has_arc(self, u: int, v: int) -> bool:
        return u in self._out and v in self._out[u]

    def has_self_loop(self, v: int) -> bool:
        return v in self._out[v]

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, outs in self._out.items():
            for v in outs:
                yield (u, v)

    def arc_count(self) -> int:
        return sum(len(outs) for outs in self._out.values())

    # -- neighborhoods ------------------------------------------------------

    def successors(self, v: int) -> tuple[int, ...]:
        return tuple(self._out[v])

    def predecessors(self, v: int) -> tuple[int, ...]:
        return tuple(self._in[v])

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def undirected_neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors in the undirected skeleton, self excluded, deduplicated."""
        seen: dict[int, None] = {}
        for w in self._out[v]:
            if w != v:
                seen[w] = None
        for w in self._in[v]:
            if w != v:
                seen[w] = None
        return tuple(seen)

    # -- derived graphs ------------------------------------------------------

    def copy(self) -> "DirectedGraph":
        g = DirectedGraph()
        g._out = {v: dict(outs) for v, outs in self._out.items()}
        g._in = {v: dict(ins) for v, ins in self._in.items()}
        return g

    def subgraph(self, keep: Iterable[int]) -> "DirectedGraph":
        """Induced subgraph on ``keep``, preserving relative order."""
        kept = set(keep)
        g = DirectedGraph()
        for v in self._out:
            if v in kept:
                g.add_vertex(v)
        for v in g._out:
            for w in self._out[v]:
                if w in kept:
                    g._out[v][w] = None
                    g._in[w][v] = None
        return g

    def without(self, drop: Iterable[int]) -> "DirectedGraph":
        dropped = set(drop)
        return self.subgraph(v for v in self._out if v not in dropped)

    def reversed(self) -> "DirectedGraph":
        g = DirectedGraph()
        g._out = {v: dict(ins) for v, ins in self._in.items()}
        g._in = {v: dict(outs) for v, outs in self._out.items()}
        return g

    def arc_set(self) -> set[tuple[int, int]]:
        return set(self.arcs())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DirectedGraph(|V|={self.vertex_count()}, |A|={self.arc_count()})"


def strongly_connected_components(g: DirectedGraph) -> list[set[int]]:
    """Tarjan's algorithm, iterative.  Components come out in reverse
    topological order of the condensation."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    components: list[set[int]] = []
    counter = 0

    for root in g.vertices():
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        frames: list[tuple[int, Iterator[int]]] = [(root, iter(g.successors(root)))]
        while frames:
            v, children = frames[-1]
            pushed = False
            for w in children:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    frames.append((w, iter(g.successors(w))))
                    pushed = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if pushed:
                continue
            frames.pop()
            if frames:
                parent = frames[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                component: set[int] = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.add(w)
                    if w == v:
                        break
                components.append(component)
    return components


def is_strongly_connected(g: DirectedGraph) -> bool:
    if g.vertex_count() == 0:
        return False
    return len(strongly_connected_components(g)) == 1


def is_acyclic(g: DirectedGraph) -> bool:
    """Kahn peeling; a self-loop keeps its vertex at positive in-degree and
    is therefore reported as a cycle."""
    indeg = {v: g.in_degree(v) for v in g.vertices()}
    ready = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in g.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == g.vertex_count()


def undirected_components(g: DirectedGraph, skip: Iterable[int] = ()) -> list[set[int]]:
    """Connected components of the undirected skeleton, ignoring ``skip``."""
    skipped = set(skip)
    seen: set[int] = set(skipped)
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


def weak_articulation_points(g: DirectedGraph) -> set[int]:
    """Vertices whose removal disconnects the undirected skeleton.

    Standard lowpoint computation, run iteratively so large inputs cannot
    overflow the interpreter stack.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    points: set[int] = set()
    timer = 0

    for root in g.vertices():
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        frames: list[tuple[int, int | None, Iterator[int]]] = [
            (root, None, iter(g.undirected_neighbors(root)))
        ]
        while frames:
            v, parent, nbrs = frames[-1]
            pushed = False
            for w in nbrs:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    frames.append((w, v, iter(g.undirected_neighbors(w))))
                    pushed = True
                    break
                if disc[w] < low[v]:
                    low[v] = disc[w]
            if pushed:
                continue
            frames.pop()
            if parent is None:
                continue
            if low[v] < low[parent]:
                low[parent] = low[v]
            if parent != root and low[v] >= disc[parent]:
                points.add(parent)
        if root_children >= 2:
            points.add(root)
    return points


def find_cycle(g: DirectedGraph, rng=None) -> list[int] | None:
    """Return some directed cycle as a vertex list, or None when acyclic.

    Traversal follows adjacency order; passing an ``rng`` shuffles both the
    root order and each child list, which is how randomized harvesting
    explores different cycles per seed.
    """
    order = list(g.vertices())
    if rng is not None:
        rng.shuffle(order)

    def children(v: int) -> Iterator[int]:
        cs = list(g.successors(v))
        if rng is not None:
            rng.shuffle(cs)
        return iter(cs)

    state: dict[int, int] = {}  # 1 = on current path, 2 = finished
    for root in order:
        if root in state:
            continue
        state[root] = 1
        path = [root]
        pos = {root: 0}
        frames = [(root, children(root))]
        while frames:
            v, cs = frames[-1]
            advanced = False
            for w in cs:
                mark = state.get(w)
                if mark == 1:
                    return path[pos[w]:]
                if mark is None:
                    state[w] = 1
                    pos[w] = len(path)
                    path.append(w)
                    frames.append((w, children(w)))
                    advanced = True
                    break
            if not advanced:
                frames.pop()
                state[v] = 2
                path.pop()
                del pos[v]
    return None
