"""Seeded random instance construction for experiments and tests."""

from __future__ import annotations

import random

from .digraph import DirectedGraph


def random_digraph(
    n: int, p: float, rng: random.Random, self_loop_rate: float = 0.0
) -> DirectedGraph:
    """Each ordered pair (u, v), u != v, gets an arc with probability ``p``;
    each vertex a self-loop with probability ``self_loop_rate``."""
    g = DirectedGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v and rng.random() < p:
                g.add_arc(u, v)
        if self_loop_rate and rng.random() < self_loop_rate:
            g.add_arc(u, u)
    return g


def random_strongly_connected(n: int, p: float, rng: random.Random) -> DirectedGraph:
    """Random digraph plus a spanning cycle over a shuffled vertex order, so
    the result is one strongly connected component."""
    g = random_digraph(n, p, rng)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    for i, u in enumerate(order):
        g.add_arc(u, order[(i + 1) % n])
    return g
