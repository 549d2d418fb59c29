"""Exclusion zones: exact checking and minimal-zone search.

A nonempty node set S is an exclusion zone when every candidate
configuration that intersects S elects a member of S under every tiebreak
branch. Zones are nested, so a unique minimal zone exists; the whole node
set is always a (trivial) zone.

Checking is fixed-parameter tractable in c = |V \\ S|: S fails to be a zone
iff some u in S is weakly minimal in the opening round of {u} union X for
some nonempty X subseteq V \\ S. Before enumerating the 2^c - 1 subsets, a
sound distance-domination fixpoint removes outside nodes that provably occur
in no witness, which is what makes reduction-style instances with large
complements checkable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .elections import (
    _scaled_shares,
    pairwise_contest,
    possible_winners,
    run_irv,
    Branch,
)
from .errors import BudgetExceededError

__all__ = [
    "ZoneCheckResult",
    "ZoneReport",
    "build_loss_graph",
    "loss_closure",
    "condorcet_positions",
    "is_exclusion_zone",
    "minimal_exclusion_zone",
    "all_exclusion_zones",
    "replay_witness",
]


@dataclass(frozen=True)
class ZoneCheckResult:
    is_zone: bool
    # For failures, the replayable triple: candidate configuration, the zone
    # member that is weakly minimal in its opening round, and that round's
    # exact shares. The configuration is {member} union a nonempty subset of
    # the complement.
    counterexample: tuple[tuple[int, ...], int, dict[int, Fraction]] | None
    configs_tested: int


@dataclass(frozen=True)
class ZoneReport:
    zone: frozenset[int]
    kind: str  # "minimal" | "trivial" | "exact"
    seed_winners: frozenset[int]
    condorcet_winners: frozenset[int]
    condorcet_losers: frozenset[int]
    candidates_checked: int


def build_loss_graph(dm) -> tuple[frozenset[int], ...]:
    """Out-edges u -> v whenever v's head-to-head share is >= u's.

    Any exclusion zone is closed under these edges: a node that ties or
    beats a zone member head-to-head can win a configuration intersecting
    the zone, so it must belong to the zone too.
    """
    n = len(dm)
    out: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            su, sv = pairwise_contest(dm, u, v)
            if su <= sv:
                out[u].add(v)
            if sv <= su:
                out[v].add(u)
    return tuple(frozenset(s) for s in out)


def loss_closure(losses, seed) -> frozenset[int]:
    """Smallest superset of seed closed under the loss-graph out-edges."""
    closed = set(seed)
    stack = list(closed)
    while stack:
        u = stack.pop()
        for v in losses[u]:
            if v not in closed:
                closed.add(v)
                stack.append(v)
    return frozenset(closed)


def condorcet_positions(dm) -> tuple[frozenset[int], frozenset[int]]:
    """(winners, losers) under the weak reading: ties count both ways.

    A winner takes share >= n/2 in every contest; a loser concedes share
    >= n/2 to every opponent. On an all-ties graph every node is both.
    """
    n = len(dm)
    never_loses = [True] * n
    never_wins = [True] * n
    for u in range(n):
        for v in range(u + 1, n):
            su, sv = pairwise_contest(dm, u, v)
            if su < sv:
                never_loses[u] = False
                never_wins[v] = False
            elif sv < su:
                never_loses[v] = False
                never_wins[u] = False
    winners = frozenset(u for u in range(n) if never_loses[u])
    losers = frozenset(u for u in range(n) if never_wins[u])
    return winners, losers


def _weakly_dominates(dm, u: int, w: int) -> bool:
    """Every node (candidate or not) is at most as far from u as from w.

    Then in any configuration containing both, each voter's contribution to
    u is at least its contribution to w: voters that reward w do so at their
    minimum distance, which u also attains.
    """
    for v in range(len(dm)):
        if v != u and v != w and dm[v][u] > dm[v][w]:
            return False
    return True


def _pruned_universe(dm, u: int, zone: frozenset[int]) -> list[int]:
    """Complement nodes that can still appear in a witness for u.

    A node w is discarded when (a) u weakly dominates it and (b) some node
    v* that is never a candidate in the remaining search (another zone
    member, or a previously discarded node) is strictly closer to u than to
    w and at least as close to u as to every remaining complement node. For
    any candidate set {u} | X with w in X, v* then votes for u with positive
    weight and for w with zero, so u strictly exceeds w and is not weakly
    minimal; no witness contains w. Discards feed back as new v* anchors
    until a fixpoint.
    """
    universe = sorted(v for v in range(len(dm)) if v not in zone and v != u)
    safe = set(zone) - {u}
    changed = True
    while changed:
        changed = False
        for w in list(universe):
            if not _weakly_dominates(dm, u, w):
                continue
            rest_min = {}
            for v in safe:
                best = min((dm[v][x] for x in universe if x != w), default=None)
                rest_min[v] = best
            for v in safe:
                du, dw = dm[v][u], dm[v][w]
                if du < dw and (rest_min[v] is None or du <= rest_min[v]):
                    universe.remove(w)
                    safe.add(w)
                    changed = True
                    break
    return universe


def _lex_subsets(items: list[int]):
    """Nonempty subsets in lexicographic order of their ascending tuples."""

    def rec(prefix: tuple[int, ...], start: int):
        for i in range(start, len(items)):
            cur = prefix + (items[i],)
            yield cur
            yield from rec(cur, i + 1)

    yield from rec((), 0)


def is_exclusion_zone(dm, zone, *, cap: int = 25) -> ZoneCheckResult:
    """Exact zone check; cap bounds the post-reduction complement size.

    The reported counterexample, when one exists, is the first in
    (ascending member, lexicographic complement subset) order; discarded
    complement nodes occur in no witness, so the reduction does not change
    which witness is first.
    """
    n = len(dm)
    s = frozenset(zone)
    if not s:
        raise ValueError("zone must be nonempty")
    for v in s:
        if not 0 <= v < n:
            raise ValueError(f"zone node {v} not a node (n={n})")
    tested = 0
    for u in sorted(s):
        universe = _pruned_universe(dm, u, s)
        if len(universe) > cap:
            raise BudgetExceededError(
                f"zone check needs {len(universe)} free complement nodes for "
                f"member {u}, above the cap of {cap}"
            )
        for subset in _lex_subsets(universe):
            cands = tuple(sorted((u,) + subset))
            shares, scale = _scaled_shares(dm, cands)
            tested += 1
            su = shares[cands.index(u)]
            if su == min(shares):
                exact = {c: Fraction(sh, scale) for c, sh in zip(cands, shares)}
                return ZoneCheckResult(False, (cands, u, exact), tested)
    return ZoneCheckResult(True, None, tested)


def replay_witness(dm, zone, counterexample) -> int:
    """Re-run a NotZone counterexample as an election; return an outside winner.

    Raises RuntimeError when no tiebreak branch elects anyone outside the
    zone, which would mean the counterexample is invalid.
    """
    config, _member, _shares = counterexample
    for target in sorted(set(config) - set(zone)):
        try:
            outcome = run_irv(dm, config, Branch(target), record_rounds=False)
        except ValueError:
            continue
        return outcome.winner
    raise RuntimeError("counterexample does not replay to an outside winner")


def _scc_condensation(losses, nodes):
    """Tarjan SCCs of the loss graph restricted to nodes; returns
    (list of SCC frozensets, out-edge sets between SCC indices)."""
    nodes = sorted(nodes)
    index = {}
    low = {}
    onstack = set()
    stack = []
    counter = [0]
    comp_of = {}
    comps: list[frozenset[int]] = []

    def strongconnect(v):
        work = [(v, iter(sorted(losses[v] & restriction)))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(sorted(losses[w] & restriction))))
                    advanced = True
                    break
                if w in onstack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                comps.append(frozenset(comp))

    restriction = frozenset(nodes)
    for v in nodes:
        if v not in index:
            strongconnect(v)
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    edges: list[set[int]] = [set() for _ in comps]
    for v in nodes:
        for w in losses[v] & restriction:
            if comp_of[v] != comp_of[w]:
                edges[comp_of[v]].add(comp_of[w])
    return comps, edges


def _closed_candidate_sets(dm, seed: frozenset[int]):
    """Loss-closed supersets of seed in ascending (size, node-tuple) order.

    Every exclusion zone contains every possible winner of the full-slate
    election and is loss-closed, so zones all occur in this stream.
    """
    n = len(dm)
    losses = build_loss_graph(dm)
    base = loss_closure(losses, seed)
    rest = sorted(set(range(n)) - base)
    comps, edges = _scc_condensation(losses, rest)
    k = len(comps)
    # Out-closure of each SCC within the remainder (adding an SCC forces
    # its reachable set; edges into `base` are already satisfied).
    reach: list[set[int]] = [set() for _ in range(k)]
    for i in range(k):
        seen = {i}
        stack = [i]
        while stack:
            a = stack.pop()
            for b in edges[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        reach[i] = seen
    candidates = []
    for mask in range(1 << k):
        chosen = {i for i in range(k) if mask >> i & 1}
        if any(not reach[i] <= chosen for i in chosen):
            continue
        nodes = set(base)
        for i in chosen:
            nodes |= comps[i]
        candidates.append(frozenset(nodes))
    candidates.sort(key=lambda z: (len(z), tuple(sorted(z))))
    return candidates, losses


def minimal_exclusion_zone(
    dm, *, cap: int = 25, node_budget: int = 200_000, max_candidates: int = 1 << 16
) -> ZoneReport:
    """Search loss-closed sets in ascending size order; first zone is minimal.

    Zones are nested, so the first closed set that passes the exact check
    equals the unique minimal zone.
    """
    n = len(dm)
    winners = possible_winners(dm, range(n), node_budget=node_budget)
    cw, cl = condorcet_positions(dm)
    candidates, _losses = _closed_candidate_sets(dm, winners)
    if len(candidates) > max_candidates:
        raise BudgetExceededError(
            f"minimal-zone search would test {len(candidates)} closed sets, "
            f"above the budget of {max_candidates}"
        )
    checked = 0
    for cand in candidates:
        checked += 1
        if is_exclusion_zone(dm, cand, cap=cap).is_zone:
            kind = "trivial" if len(cand) == n else "minimal"
            return ZoneReport(cand, kind, winners, cw, cl, checked)
    raise AssertionError("unreachable: the full node set is always a zone")


def all_exclusion_zones(dm, *, max_n: int = 7, cap: int = 25) -> list[frozenset[int]]:
    """Every exclusion zone by brute 2^n subset scan, ascending (size, nodes).

    Deliberately independent of the loss-graph search in
    minimal_exclusion_zone so the two can cross-check each other.
    """
    n = len(dm)
    if n > max_n:
        raise ValueError(
            f"n={n} too large for the exhaustive 2^n zone scan (max_n={max_n})"
        )
    zones = []
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            if is_exclusion_zone(dm, combo, cap=cap).is_zone:
                zones.append(frozenset(combo))
    return zones
