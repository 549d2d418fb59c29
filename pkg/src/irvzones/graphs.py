"""Immutable undirected graphs, graph6 and edge-list codecs, BFS distances.

Nodes are integers 0..n-1. Human-facing names live in a labels sidecar so
algorithms never pay for string handling: graph6 inputs and family builders
get labels "1".."n", edge lists keep their original tokens.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import DisconnectedGraphError, GraphFormatError

__all__ = [
    "Graph",
    "parse_graph6",
    "to_graph6",
    "parse_edge_list",
    "load_graph",
    "all_pairs_distances",
]


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph with frozen adjacency sets.

    Disconnected graphs are rejected at construction (the path metric is
    undefined on them) unless allow_disconnected is set; the distance
    computation still refuses such graphs.
    """

    adj: tuple[frozenset[int], ...]
    labels: tuple[str, ...] = field(default=())
    allow_disconnected: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.adj)
        if n == 0:
            raise GraphFormatError("graph must have at least one node")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(n)))
        if len(self.labels) != n:
            raise ValueError(f"expected {n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != n:
            raise ValueError("labels must be distinct")
        for u, nbrs in enumerate(self.adj):
            if u in nbrs:
                raise GraphFormatError(f"self-loop at node {u}")
            for v in nbrs:
                if not 0 <= v < n:
                    raise GraphFormatError(f"edge endpoint {v} out of range")
                if u not in self.adj[v]:
                    raise GraphFormatError(f"asymmetric adjacency {u}-{v}")
        if not self.allow_disconnected and not _is_connected(self.adj):
            raise DisconnectedGraphError(
                "graph is disconnected; pass largest_component=True to parse_edge_list "
                "or supply a connected graph"
            )

    @staticmethod
    def from_edges(n: int, edges, labels=None, *, allow_disconnected=False) -> "Graph":
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            adj[u].add(v)
            adj[v].add(u)
        return Graph(
            tuple(frozenset(s) for s in adj),
            tuple(labels) if labels else (),
            allow_disconnected,
        )

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        # frozenset iteration order is hash-dependent, so sort for stable output
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no node labeled {label!r}") from None


def _is_connected(adj) -> bool:
    n = len(adj)
    seen = bytearray(n)
    seen[0] = 1
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                queue.append(v)
    return count == n


def all_pairs_distances(g: Graph) -> tuple[tuple[int, ...], ...]:
    """All-pairs shortest path lengths via one BFS per node."""
    n = g.n
    rows = []
    for src in range(n):
        dist = [-1] * n
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in g.adj[u]:
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue.append(v)
        if -1 in dist:
            raise DisconnectedGraphError(
                f"node {g.labels[src]} cannot reach every node; "
                "path distances are undefined"
            )
        rows.append(tuple(dist))
    return tuple(rows)


# graph6: 6-bit big-endian chunks of the column-major upper triangle,
# each chunk offset by 63. Pair order: (0,1),(0,2),(1,2),(0,3),(1,3),(2,3),...
def pair_order(n: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(1, n) for i in range(j)]


def _g6_size(data: bytes) -> tuple[int, bytes]:
    if not data:
        raise GraphFormatError("empty graph6 string")
    if data[0] != 126:  # '~'
        return data[0] - 63, data[1:]
    if len(data) >= 4 and data[1] != 126:
        n = 0
        for b in data[1:4]:
            if not 63 <= b <= 126:
                raise GraphFormatError("bad byte in graph6 size header")
            n = (n << 6) | (b - 63)
        return n, data[4:]
    if len(data) >= 8 and data[1] == 126:
        n = 0
        for b in data[2:8]:
            if not 63 <= b <= 126:
                raise GraphFormatError("bad byte in graph6 size header")
            n = (n << 6) | (b - 63)
        return n, data[8:]
    raise GraphFormatError("truncated graph6 size header")


def parse_graph6(text: str, *, allow_disconnected: bool = False) -> Graph:
    """Decode one graph6 string (optional ">>graph6<<" prefix tolerated)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii", errors="strict") if s.isascii() else None
    if data is None:
        raise GraphFormatError("graph6 input is not ASCII")
    n, body = _g6_size(data)
    if n <= 0:
        raise GraphFormatError(f"graph6 node count {n} out of range")
    npairs = n * (n - 1) // 2
    need = (npairs + 5) // 6
    if len(body) != need:
        raise GraphFormatError(
            f"graph6 body for n={n} needs {need} bytes, got {len(body)}"
        )
    bits = []
    for b in body:
        if not 63 <= b <= 126:
            raise GraphFormatError(f"graph6 byte {b} out of range")
        bits.append(format(b - 63, "06b"))
    bitstring = "".join(bits)
    if any(c == "1" for c in bitstring[npairs:]):
        raise GraphFormatError("graph6 padding bits must be zero")
    edges = [
        pair for pair, bit in zip(pair_order(n), bitstring) if bit == "1"
    ]
    return Graph.from_edges(n, edges, allow_disconnected=allow_disconnected)


def to_graph6(g: Graph) -> str:
    """Encode to graph6 (no header, no trailing newline)."""
    n = g.n
    if n <= 62:
        head = chr(63 + n)
    elif n <= 258047:
        head = "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    else:
        head = "~~" + "".join(chr(63 + ((n >> s) & 63)) for s in (30, 24, 18, 12, 6, 0))
    bits = ["1" if j in g.adj[i] else "0" for i, j in pair_order(n)]
    bits.extend("0" * (-len(bits) % 6))
    body = "".join(
        chr(63 + int("".join(bits[k : k + 6]), 2)) for k in range(0, len(bits), 6)
    )
    return head + body


def parse_edge_list(
    text: str, *, symmetrize: bool = True, largest_component: bool = False
) -> Graph:
    """Parse "u v" lines (whitespace or comma separated) into a graph.

    Tokens are arbitrary strings and become labels (sorted, so node ids are
    stable across permutations of the lines). Lines starting with '#' and
    blank lines are skipped. With symmetrize, directed duplicates collapse
    into one undirected edge; without it every pair must appear in both
    orientations.
    """
    directed = set()
    tokens = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = parts
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop {u!r}")
        tokens.update(parts)
        directed.add((u, v))
    if not tokens:
        raise GraphFormatError("edge list contains no edges")
    if not symmetrize:
        for u, v in directed:
            if (v, u) not in directed:
                raise GraphFormatError(
                    f"edge {u!r}->{v!r} not reciprocated (symmetrize=False)"
                )
    labels = sorted(tokens)
    index = {tok: i for i, tok in enumerate(labels)}
    adj = [set() for _ in labels]
    for u, v in directed:
        adj[index[u]].add(index[v])
        adj[index[v]].add(index[u])
    if largest_component and not _is_connected(adj):
        comp = _largest_component(adj)
        keep = sorted(comp)
        remap = {old: new for new, old in enumerate(keep)}
        adj = [set(remap[w] for w in adj[old] if w in comp) for old in keep]
        labels = [labels[old] for old in keep]
    return Graph(tuple(frozenset(s) for s in adj), tuple(labels))


def _largest_component(adj) -> set[int]:
    n = len(adj)
    seen = [False] * n
    best: set[int] = set()
    for start in range(n):
        if seen[start]:
            continue
        comp = {start}
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        if len(comp) > len(best):
            best = comp
    return best


def load_graph(path: str, *, largest_component: bool = False) -> Graph:
    """Load a graph file, picking the codec from the extension.

    .g6 / .graph6 -> graph6 (first non-empty line); anything else is treated
    as an edge list.
    """
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    if path.endswith((".g6", ".graph6")):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphFormatError(f"{path}: no graph6 line found")
        return parse_graph6(lines[0])
    return parse_edge_list(text, largest_component=largest_component)
