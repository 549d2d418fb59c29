"""Shared test utilities."""

from __future__ import annotations

import random

from irvzones.graphs import Graph


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.3) -> Graph:
    """Uniformish connected graph: a random spanning tree plus extra edges."""
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        edges.add(tuple(sorted((order[i], order[rng.randrange(i)]))))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))
