"""Brute-force reference implementations for desk-scale verification.

Everything here trades speed for independence: subset enumeration instead of
reductions, anchored path search instead of blocked search, and a private
acyclicity check.  Tests compare the fast paths against these.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from .cover import CoverProblem
from .cycles import Cycle
from .digraph import DirectedGraph

ORACLE_VERTEX_CAP = 20


class OracleCapExceeded(ValueError):
    pass


def _acyclic_without(g: DirectedGraph, removed: set[int]) -> bool:
    """Path-marking acyclicity test, written independently of the package's
    production check."""
    state: dict[int, int] = {}  # 1 = in progress, 2 = done

    def walk(root: int) -> bool:
        stack = [(root, iter(g.successors(root)))]
        state[root] = 1
        while stack:
            v, children = stack[-1]
            advanced = False
            for w in children:
                if w in removed:
                    continue
                mark = state.get(w)
                if mark == 1:
                    return False
                if mark is None:
                    state[w] = 1
                    stack.append((w, iter(g.successors(w))))
                    advanced = True
                    break
            if not advanced:
                state[v] = 2
                stack.pop()
        return True

    for v in g.vertices():
        if v in removed or v in state:
            continue
        if not walk(v):
            return False
    return True


def minimum_dfvs(g: DirectedGraph, max_n: int = ORACLE_VERTEX_CAP) -> set[int]:
    """Smallest feedback vertex set, by subset enumeration in increasing size."""
    n = g.vertex_count()
    if n > max_n:
        raise OracleCapExceeded(f"{n} vertices exceeds the oracle cap of {max_n}")
    order = sorted(g.vertices())
    for size in range(n + 1):
        for subset in combinations(order, size):
            removed = set(subset)
            if _acyclic_without(g, removed):
                return removed
    return set(order)


def minimum_dfvs_size(g: DirectedGraph, max_n: int = ORACLE_VERTEX_CAP) -> int:
    return len(minimum_dfvs(g, max_n))


def minimum_hitting_set(
    constraints: Iterable[Iterable[int]], universe: Iterable[int] | None = None
) -> set[int]:
    """Smallest vertex set meeting every constraint, by subset enumeration."""
    sets = [frozenset(c) for c in constraints]
    if universe is None:
        pool: set[int] = set()
        for c in sets:
            pool |= c
    else:
        pool = set(universe)
    order = sorted(pool)
    for size in range(len(order) + 1):
        for subset in combinations(order, size):
            chosen = set(subset)
            if all(c & chosen for c in sets):
                return chosen
    raise ValueError("unsatisfiable constraint present")


def minimum_cover_solution(p: CoverProblem, max_n: int = ORACLE_VERTEX_CAP) -> set[int]:
    """Smallest set covering every edge and big set of ``p`` while making
    every attached graph acyclic."""
    order = sorted(p.vertex_set())
    if len(order) > max_n:
        raise OracleCapExceeded(f"{len(order)} vertices exceeds the cap of {max_n}")
    edge_list = [frozenset(e) for e in p.edges()]
    big_list = [frozenset(s) for s in p.big_sets]
    for size in range(len(order) + 1):
        for subset in combinations(order, size):
            chosen = set(subset)
            if not all(c & chosen for c in edge_list):
                continue
            if not all(c & chosen for c in big_list):
                continue
            if all(_acyclic_without(g, chosen) for g in p.graphs):
                return chosen
    raise ValueError("cover problem is unsatisfiable")


def minimum_cover_size(p: CoverProblem, max_n: int = ORACLE_VERTEX_CAP) -> int:
    return len(minimum_cover_solution(p, max_n))


def simple_cycles(g: DirectedGraph) -> Iterator[Cycle]:
    """Every simple directed cycle exactly once, anchored at its smallest
    vertex (so the tuples come out rotation-normalized for free)."""
    for anchor in sorted(g.vertices()):
        path = [anchor]
        on_path = {anchor}

        def extend(v: int) -> Iterator[Cycle]:
            for w in sorted(g.successors(v)):
                if w == anchor:
                    yield tuple(path)
                elif w > anchor and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    yield from extend(w)
                    path.pop()
                    on_path.discard(w)

        yield from extend(anchor)


def _chordless_in(cycle: Cycle, g: DirectedGraph) -> bool:
    k = len(cycle)
    index = {v: i for i, v in enumerate(cycle)}
    for i, v in enumerate(cycle):
        for w in g.successors(v):
            if w in index and w != v and index[w] != (i + 1) % k:
                return False
    return True


def chordless_cycles(g: DirectedGraph) -> set[Cycle]:
    """All chordless directed cycles, including 2-cycles."""
    return {c for c in simple_cycles(g) if _chordless_in(c, g)}
