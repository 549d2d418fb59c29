"""Named graph families with closed-form exclusion zones.

Each family admits a direct description of its minimal exclusion zone, so
callers can cross-check the generic search against a formula instead of
trusting one code path.  Node labels follow the package convention
("1".."n"); zone results are 0-based index sets like everything else in
the library.

Supported kinds:

* ``path``                 param = node count n >= 1
* ``cycle``                param = node count n >= 3
* ``complete``             param = node count n >= 1
* ``bistar``               param = leaves per hub k >= 1
* ``perfect_binary_tree``  param = height h >= 0
"""

from __future__ import annotations

from fractions import Fraction

from .elections import pairwise_contest
from .graphs import Graph

FAMILY_KINDS = ("path", "cycle", "complete", "bistar", "perfect_binary_tree")


def _check_param(kind: str, param: int, minimum: int) -> None:
    if param < minimum:
        raise ValueError(f"{kind} requires param >= {minimum}, got {param}")


def build_family(kind: str, param: int) -> Graph:
    """Construct a family member.  ``param`` is n, k, or h per the kind."""
    if kind == "path":
        _check_param(kind, param, 1)
        return Graph.from_edges(param, [(i, i + 1) for i in range(param - 1)])
    if kind == "cycle":
        _check_param(kind, param, 3)
        edges = [(i, (i + 1) % param) for i in range(param)]
        return Graph.from_edges(param, edges)
    if kind == "complete":
        _check_param(kind, param, 1)
        edges = [(i, j) for i in range(param) for j in range(i + 1, param)]
        return Graph.from_edges(param, edges)
    if kind == "bistar":
        # Two adjacent hubs ("1" and "2"), each carrying `param` leaves.
        _check_param(kind, param, 1)
        n = 2 * param + 2
        edges = [(0, 1)]
        edges += [(0, 2 + i) for i in range(param)]
        edges += [(1, 2 + param + i) for i in range(param)]
        return Graph.from_edges(n, edges)
    if kind == "perfect_binary_tree":
        _check_param(kind, param, 0)
        n = 2 ** (param + 1) - 1
        # Heap order: node i (1-based) has children 2i and 2i+1.
        edges = []
        for child in range(2, n + 1):
            edges.append((child // 2 - 1, child - 1))
        return Graph.from_edges(n, edges)
    raise ValueError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")


def family_zone(kind: str, param: int) -> frozenset[int]:
    """Minimal exclusion zone of the family member, as 0-based indices.

    The zone equals the full node set exactly when the member has no
    nontrivial zone (cycles, complete graphs, short paths, odd-height
    perfect binary trees).
    """
    if kind == "path":
        _check_param(kind, param, 1)
        n = param
        a = (n + 8) // 6
        return frozenset(range(a - 1, n - a + 1))
    if kind in ("cycle", "complete"):
        _check_param(kind, param, 3 if kind == "cycle" else 1)
        return frozenset(range(param))
    if kind == "bistar":
        _check_param(kind, param, 1)
        return frozenset({0, 1})
    if kind == "perfect_binary_tree":
        _check_param(kind, param, 0)
        n = 2 ** (param + 1) - 1
        if param == 0 or param % 2 == 1:
            return frozenset(range(n))
        # Even positive height: the internal nodes exclude every leaf.
        return frozenset(range(2**param - 1))
    raise ValueError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")


def is_all_pairwise_ties(dm: list[list[int]]) -> bool:
    """True when every head-to-head contest splits the electorate evenly.

    Vertex-transitive families (cycles, complete graphs) satisfy this, which
    certifies that no set smaller than the whole graph can be a zone: any
    proposed member is already weakly minimal against any outsider.
    """
    n = len(dm)
    half = Fraction(n, 2)
    for u in range(n):
        for v in range(u + 1, n):
            su, sv = pairwise_contest(dm, u, v)
            if su != half or sv != half:
                return False
    return True
