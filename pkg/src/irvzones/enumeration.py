"""Exhaustive generation of small connected graphs and free trees.

The graph enumerator sweeps adjacency bitmasks in ascending order and marks
every relabeling of each newly seen mask, so exactly one representative per
isomorphism class survives: the minimum bitstring over all n! relabelings.
Brute-force canonicalization is deliberate; at n <= 8 it is fast and easy
to check independently.

Trees come from the level-sequence successor method for rooted trees, with
free-tree duplicates removed by a canonical form rooted at the tree center.

`zone_census` runs the minimal-zone search over a whole class of graphs and
reproduces the published nontrivial / two-node counts.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetExceededError, GraphFormatError
from .graphs import Graph, all_pairs_distances, pair_order, parse_graph6, to_graph6
from .zones import minimal_exclusion_zone

MAX_GRAPH_N = 8
MAX_TREE_N = 16

# Connected-graph and free-tree class counts for n = 1.., used as generator
# self-checks in the tests.
CONNECTED_GRAPH_COUNTS = (1, 1, 2, 6, 21, 112, 853, 11117)
FREE_TREE_COUNTS = (1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320)


@dataclass(frozen=True)
class CensusRow:
    n: int
    universe_count: int
    nontrivial_count: int
    two_node_count: int

    def __post_init__(self):
        if not (0 <= self.two_node_count <= self.nontrivial_count <= self.universe_count):
            raise ValueError(f"inconsistent census row {self}")

    def csv_line(self) -> str:
        return f"{self.n},{self.universe_count},{self.nontrivial_count},{self.two_node_count}"


CENSUS_CSV_HEADER = "n,universe,nontrivial,two_node"


def _permutation_bit_powers(n: int) -> np.ndarray:
    """Row p, column j: the bitmask contribution of pair j under permutation p.

    Applying permutation ``perm`` to a graph moves the pair-order bit j to the
    bit of the relabeled pair; summing the selected powers of two rebuilds the
    permuted adjacency mask in one integer dot product.
    """
    pairs = pair_order(n)
    index_of = {pair: j for j, pair in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    powers = np.zeros((len(perms), len(pairs)), dtype=np.uint64)
    for p, perm in enumerate(perms):
        for j, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
            powers[p, j] = np.uint64(1) << np.uint64(index_of[(a, b)])
    return powers


def _mask_to_graph(n: int, mask: int, pairs: list[tuple[int, int]]) -> Graph | None:
    """Build the graph for an adjacency mask, or None if disconnected."""
    edges = [pairs[j] for j in range(len(pairs)) if (mask >> j) & 1]
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        return None
    return Graph.from_edges(n, edges)


def enumerate_connected_graphs(n: int, *, source: str | None = None) -> Iterator[Graph]:
    """Yield one representative per connected-graph isomorphism class.

    The built-in enumerator covers 1 <= n <= 8.  ``source`` names a graph6
    file (one graph per line) to stream instead, the escape hatch for larger
    n; every graph in the file must have exactly n nodes.
    """
    if source is not None:
        for g in graphs_from_file(source):
            if g.n != n:
                raise GraphFormatError(
                    f"graph in {source} has {g.n} nodes, expected {n}"
                )
            yield g
        return
    if not 1 <= n <= MAX_GRAPH_N:
        raise ValueError(
            f"built-in enumerator covers 1 <= n <= {MAX_GRAPH_N}; "
            f"pass a graph6 file for n={n}"
        )
    if n == 1:
        yield Graph.from_edges(1, [])
        return
    pairs = pair_order(n)
    c = len(pairs)
    powers = _permutation_bit_powers(n)
    total = 1 << c
    words = np.zeros((total + 63) // 64, dtype=np.uint64)
    bit_range = np.arange(c, dtype=np.uint64)
    one = np.uint64(1)
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    for w in range(len(words)):
        while True:
            free = int(words[w] ^ full)
            if free == 0:
                break
            b = (free & -free).bit_length() - 1
            mask = (w << 6) | b
            if mask >= total:
                break
            bits = (np.uint64(mask) >> bit_range) & one
            dests = powers @ bits
            np.bitwise_or.at(words, dests >> np.uint64(6), one << (dests & np.uint64(63)))
            words[w] |= one << np.uint64(b)
            g = _mask_to_graph(n, mask, pairs)
            if g is not None:
                yield g


def _successor_level_sequence(levels: list[int]) -> list[int] | None:
    """Next rooted-tree level sequence in the standard successor order."""
    p = max((i for i in range(len(levels)) if levels[i] > 2), default=None)
    if p is None:
        return None
    q = max(i for i in range(p) if levels[i] == levels[p] - 1)
    out = levels[:p]
    span = p - q
    for i in range(p, len(levels)):
        out.append(out[i - span])
    return out


def _levels_to_parents(levels: list[int]) -> list[int]:
    """Parent index per node (root gets -1) from a rooted level sequence."""
    last_at_level = {0: -1}
    parents = []
    for i, lev in enumerate(levels):
        parents.append(last_at_level[lev - 1])
        last_at_level[lev] = i
    return parents


def _tree_centers(adj: list[list[int]]) -> list[int]:
    n = len(adj)
    if n <= 2:
        return list(range(n))
    degree = [len(a) for a in adj]
    layer = [v for v in range(n) if degree[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _ahu_code(adj: list[list[int]], root: int) -> str:
    """Canonical parenthesis string of the tree rooted at `root`."""
    order = [(root, -1)]
    for v, parent in order:
        order.extend((w, v) for w in adj[v] if w != parent)
    codes = [""] * len(adj)
    for v, parent in reversed(order):
        children = sorted(codes[w] for w in adj[v] if w != parent)
        codes[v] = "(" + "".join(children) + ")"
    return codes[root]


def _free_tree_key(adj: list[list[int]]) -> tuple[str, ...]:
    centers = _tree_centers(adj)
    return tuple(sorted(_ahu_code(adj, c) for c in centers))


def enumerate_trees(n: int) -> Iterator[Graph]:
    """Yield one representative per free-tree isomorphism class, 1 <= n <= 16."""
    if not 1 <= n <= MAX_TREE_N:
        raise ValueError(f"tree enumerator covers 1 <= n <= {MAX_TREE_N}, got n={n}")
    if n == 1:
        yield Graph.from_edges(1, [])
        return
    levels: list[int] | None = list(range(1, n + 1))
    seen: set[tuple[str, ...]] = set()
    while levels is not None:
        parents = _levels_to_parents(levels)
        adj: list[list[int]] = [[] for _ in range(n)]
        for child in range(1, n):
            adj[child].append(parents[child])
            adj[parents[child]].append(child)
        key = _free_tree_key(adj)
        if key not in seen:
            seen.add(key)
            yield Graph.from_edges(n, [(parents[i], i) for i in range(1, n)])
        levels = _successor_level_sequence(levels)


def graphs_from_file(path: str) -> Iterator[Graph]:
    """Stream graphs from a graph6 file, one per line."""
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield parse_graph6(line)


def _graph_stream(kind: str, n: int, source: str | None) -> Iterator[Graph]:
    if kind == "graphs":
        return enumerate_connected_graphs(n, source=source)
    if kind == "trees":
        if source is not None:
            return enumerate_connected_graphs(n, source=source)
        return enumerate_trees(n)
    raise ValueError(f"census kind must be 'graphs' or 'trees', got {kind!r}")


def _census_one(g6: str, cap: int, node_budget: int) -> tuple[bool, bool]:
    g = parse_graph6(g6)
    dm = all_pairs_distances(g)
    try:
        report = minimal_exclusion_zone(dm, cap=cap, node_budget=node_budget)
    except BudgetExceededError as exc:
        raise BudgetExceededError(f"budget exceeded on graph {g6}: {exc}") from exc
    nontrivial = len(report.zone) < g.n
    return nontrivial, nontrivial and len(report.zone) == 2


def zone_census(
    kind: str,
    n: int,
    *,
    cap: int = 25,
    node_budget: int = 200_000,
    workers: int = 1,
    source: str | None = None,
) -> CensusRow:
    """Count nontrivial and 2-node minimal zones over a whole graph class.

    Any per-graph budget overrun aborts the row, naming the offending graph
    in graph6 form.  Counters are commutative, so the row is independent of
    stream order and worker count.
    """
    universe = 0
    nontrivial = 0
    two_node = 0
    stream = _graph_stream(kind, n, source)
    if workers <= 1:
        for g in stream:
            universe += 1
            is_nontrivial, is_two = _census_one(to_graph6(g), cap, node_budget)
            nontrivial += is_nontrivial
            two_node += is_two
    else:
        g6s = [to_graph6(g) for g in stream]
        universe = len(g6s)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for is_nontrivial, is_two in pool.map(
                _census_one,
                g6s,
                itertools.repeat(cap),
                itertools.repeat(node_budget),
                chunksize=32,
            ):
                nontrivial += is_nontrivial
                two_node += is_two
    return CensusRow(n, universe, nontrivial, two_node)


def census_rows_csv(rows: Iterable[CensusRow]) -> str:
    return "\n".join([CENSUS_CSV_HEADER] + [r.csv_line() for r in rows])
