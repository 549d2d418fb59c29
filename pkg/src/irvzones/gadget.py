"""Hardness-gadget generator: exact-3-cover instances as zone checks.

An RX3C instance has 3n items and 3n size-3 sets with every item in exactly
3 sets; asking for an exact cover (n pairwise disjoint sets hitting every
item) is the classic hard question. The gadget graph built here ties that
question to zone membership: {s1, s2} is an exclusion zone of the gadget
if and only if the instance has no exact cover. With a cover, placing
candidates on s1 and the covering set nodes makes s1 weakly minimal in the
opening round; without one, every surviving set node wastes votes on
multiply- or un-covered items and s1 outlasts everything.

Gadget anatomy for instance (X, C), k = 3n sets:
  - (5n-1)/2 copies of every item (labels "x:<item>#<j>"); n must be odd
    for this to be integral,
  - one node per (set, member) pair ("y:<i>:<item>"),
  - one node per set ("c:<i>") adjacent to all copies of its members, its
    three y nodes, a private pendant ("b:<i>"), and a clique over all set
    nodes plus s1 and s2,
  - s1 and s2, each with a private pendant ("b:<k+1>", "b:<k+2>") and
    adjacent to every y node.
"""

from __future__ import annotations

from .errors import MalformedInstanceError
from .graphs import Graph

__all__ = [
    "validate_rx3c",
    "has_exact_cover",
    "rx3c_gadget",
    "parse_rx3c",
]


def validate_rx3c(items, sets) -> int:
    """Check RX3C shape (3n items, 3n size-3 sets, coverage exactly 3); return n."""
    items = list(items)
    if len(set(items)) != len(items):
        raise MalformedInstanceError("duplicate item labels")
    if not items or len(items) % 3:
        raise MalformedInstanceError(f"item count {len(items)} is not 3n")
    n = len(items) // 3
    if len(sets) != 3 * n:
        raise MalformedInstanceError(
            f"expected {3 * n} sets for {3 * n} items, got {len(sets)}"
        )
    known = set(items)
    coverage = {x: 0 for x in items}
    for i, s in enumerate(sets):
        members = list(s)
        if len(set(members)) != 3:
            raise MalformedInstanceError(f"set {i + 1} is not a 3-set: {members}")
        for x in members:
            if x not in known:
                raise MalformedInstanceError(f"set {i + 1} names unknown item {x!r}")
            coverage[x] += 1
    bad = {x: c for x, c in coverage.items() if c != 3}
    if bad:
        raise MalformedInstanceError(f"items not covered exactly 3 times: {bad}")
    return n


def has_exact_cover(items, sets) -> bool:
    """Exhaustive search for pairwise-disjoint sets covering every item once."""
    universe = frozenset(items)
    pool = [frozenset(s) for s in sets]
    for s in pool:
        if not s <= universe:
            raise MalformedInstanceError(f"set {sorted(s)} names unknown items")

    def cover(remaining: frozenset) -> bool:
        if not remaining:
            return True
        pivot = min(remaining, key=list(items).index)
        return any(s <= remaining and cover(remaining - s) for s in pool if pivot in s)

    return cover(universe)


def rx3c_gadget(items, sets) -> tuple[Graph, tuple[int, int]]:
    """Build the gadget graph; returns (graph, (s1, s2) node indices).

    {s1, s2} is an exclusion zone iff (items, sets) has no exact cover.
    """
    items = list(items)
    n = validate_rx3c(items, sets)
    if n % 2 == 0:
        raise MalformedInstanceError(
            f"n={n} is even, so the (5n-1)/2 item copies are not integral"
        )
    k = 3 * n
    copies = (5 * n - 1) // 2
    item_pos = {x: a for a, x in enumerate(items)}
    ordered_sets = [sorted(s, key=item_pos.__getitem__) for s in sets]

    labels: list[str] = []
    for x in items:
        labels.extend(f"x:{x}#{j + 1}" for j in range(copies))
    off_y = len(labels)
    for i, members in enumerate(ordered_sets):
        labels.extend(f"y:{i + 1}:{x}" for x in members)
    off_c = len(labels)
    labels.extend(f"c:{i + 1}" for i in range(k))
    s1 = len(labels)
    s2 = s1 + 1
    labels.extend(["s1", "s2"])
    off_b = len(labels)
    labels.extend(f"b:{i + 1}" for i in range(k + 2))

    def copy_idx(x: str, j: int) -> int:
        return item_pos[x] * copies + j

    edges = []
    hub = list(range(off_c, s2 + 1))  # the set nodes plus s1, s2
    for a in range(len(hub)):
        for b in range(a + 1, len(hub)):
            edges.append((hub[a], hub[b]))
    for i, members in enumerate(ordered_sets):
        ci = off_c + i
        edges.append((ci, off_b + i))
        for t, x in enumerate(members):
            yi = off_y + 3 * i + t
            edges.append((ci, yi))
            edges.append((s1, yi))
            edges.append((s2, yi))
            edges.extend((ci, copy_idx(x, j)) for j in range(copies))
    edges.append((s1, off_b + k))
    edges.append((s2, off_b + k + 1))
    return Graph.from_edges(len(labels), edges, labels), (s1, s2)


def parse_rx3c(text: str) -> tuple[list[str], list[tuple[str, str, str]]]:
    """Parse an instance file: first line n, then 3n lines of three item labels.

    Items are the sorted distinct labels appearing on the set lines; shape
    validation happens here, odd-n validation in rx3c_gadget.
    """
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise MalformedInstanceError("empty instance file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MalformedInstanceError(
            f"first line must be the integer n, got {lines[0]!r}"
        ) from None
    if n < 1:
        raise MalformedInstanceError(f"n must be positive, got {n}")
    set_lines = lines[1:]
    if len(set_lines) != 3 * n:
        raise MalformedInstanceError(
            f"expected {3 * n} set lines for n={n}, got {len(set_lines)}"
        )
    sets = []
    for lineno, ln in enumerate(set_lines, start=2):
        parts = tuple(ln.replace(",", " ").split())
        if len(parts) != 3:
            raise MalformedInstanceError(
                f"line {lineno}: expected three item labels, got {ln!r}"
            )
        sets.append(parts)
    items = sorted({x for s in sets for x in s})
    validate_rx3c(items, sets)
    return items, sets
