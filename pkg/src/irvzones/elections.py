"""Split-vote plurality shares and instant-runoff elections on graph metrics.

Every node is a voter; a subset of nodes stands as candidates. A voter
splits its single vote evenly across the candidates at minimum distance,
so shares are exact rationals that sum to the number of voters. Rounds
eliminate one weakly-minimal candidate at a time; which one is chosen by a
tiebreak policy.

All functions take a distance matrix (tuple of tuples, as produced by
graphs.all_pairs_distances) rather than a Graph, so alternative integer
metrics plug in unchanged.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError

__all__ = [
    "FixedOrder",
    "Seeded",
    "Branch",
    "Round",
    "ElectionOutcome",
    "plurality_shares",
    "pairwise_contest",
    "run_irv",
    "possible_winners",
]

# Above this many voter*candidate cells per round, share computation switches
# to a numpy screen with exact Fraction re-certification of near-minimal
# candidates. Results are identical; only speed differs.
_NUMPY_CUTOFF = 50_000


@dataclass(frozen=True)
class FixedOrder:
    """Eliminate the tied candidate appearing earliest in `order`."""

    order: tuple[int, ...]

    def __init__(self, order):
        object.__setattr__(self, "order", tuple(order))


@dataclass(frozen=True)
class Seeded:
    """Eliminate a uniformly random tied candidate, deterministic in `seed`."""

    seed: int


@dataclass(frozen=True)
class Branch:
    """Search tiebreak branches for one where `target` wins.

    With target=None, always eliminate the lowest-numbered tied candidate
    (the first DFS branch), giving a canonical deterministic outcome.
    """

    target: int | None = None


@dataclass(frozen=True)
class Round:
    candidates: tuple[int, ...]
    shares: dict[int, Fraction]
    tied: tuple[int, ...]
    eliminated: int


@dataclass(frozen=True)
class ElectionOutcome:
    winner: int
    rounds: tuple[Round, ...]

    @property
    def tiebreak_trace(self) -> list[tuple[tuple[int, ...], int]]:
        """(tied set, chosen elimination) for every round that needed a tiebreak."""
        return [(r.tied, r.eliminated) for r in self.rounds if len(r.tied) > 1]


def _validate_candidates(dm, candidates) -> tuple[int, ...]:
    cands = tuple(candidates)
    if not cands:
        raise ValueError("candidate set is empty")
    if len(set(cands)) != len(cands):
        raise ValueError("duplicate candidates")
    n = len(dm)
    for c in cands:
        if not 0 <= c < n:
            raise ValueError(f"candidate {c} not a node (n={n})")
    return tuple(sorted(cands))


def _scaled_shares(dm, cands: tuple[int, ...]) -> tuple[list[int], int]:
    """Integer shares scaled by lcm(1..k); exact and fast for small n."""
    k = len(cands)
    scale = math.lcm(*range(1, k + 1))
    shares = [0] * k
    for row in dm:
        best = min(row[c] for c in cands)
        hits = [i for i, c in enumerate(cands) if row[c] == best]
        w = scale // len(hits)
        for i in hits:
            shares[i] += w
    return shares, scale


def _fraction_shares(dm, cands: tuple[int, ...]) -> dict[int, Fraction]:
    n = len(dm)
    if n * len(cands) > _NUMPY_CUTOFF:
        return _fraction_shares_numpy(dm, cands)
    scaled, scale = _scaled_shares(dm, cands)
    return {c: Fraction(s, scale) for c, s in zip(cands, scaled)}


def _tie_counts_numpy(dm, cands):
    import numpy as np

    d = np.asarray(dm, dtype=np.int32)[:, list(cands)]
    mins = d.min(axis=1)
    ties = d == mins[:, None]
    kk = ties.sum(axis=1)
    return ties, kk


def _fraction_shares_numpy(dm, cands) -> dict[int, Fraction]:
    import numpy as np

    ties, kk = _tie_counts_numpy(dm, cands)
    out = {}
    for i, c in enumerate(cands):
        counts = np.bincount(kk[ties[:, i]])
        out[c] = sum(
            (Fraction(int(cnt), int(k)) for k, cnt in enumerate(counts) if k and cnt),
            Fraction(0),
        )
    return out


def _tied_min(dm, cands: tuple[int, ...]) -> tuple[int, ...]:
    """Candidates whose share equals the round minimum (weakly minimal set)."""
    n = len(dm)
    if n * len(cands) > _NUMPY_CUTOFF:
        import numpy as np

        ties, kk = _tie_counts_numpy(dm, cands)
        inv = 1.0 / kk
        float_shares = ties.T @ inv
        # Screen generously, then certify with exact arithmetic: float error
        # across n unit-fraction terms stays far below this slack.
        screen = float_shares.min() + 1e-6
        near = [i for i in range(len(cands)) if float_shares[i] <= screen]
        exact = {}
        for i in near:
            counts = np.bincount(kk[ties[:, i]])
            exact[i] = sum(
                (Fraction(int(c), int(k)) for k, c in enumerate(counts) if k and c),
                Fraction(0),
            )
        m = min(exact.values())
        return tuple(cands[i] for i in sorted(exact) if exact[i] == m)
    scaled, _ = _scaled_shares(dm, cands)
    m = min(scaled)
    return tuple(c for c, s in zip(cands, scaled) if s == m)


def plurality_shares(dm, candidates) -> dict[int, Fraction]:
    """Exact split-vote shares; values sum to the number of voters."""
    cands = _validate_candidates(dm, candidates)
    return _fraction_shares(dm, cands)


def pairwise_contest(dm, a: int, b: int) -> tuple[Fraction, Fraction]:
    """Head-to-head shares of a and b (in that order)."""
    if a == b:
        raise ValueError("pairwise contest needs two distinct nodes")
    shares = plurality_shares(dm, (a, b))
    return shares[a], shares[b]


def run_irv(dm, candidates, policy=None, *, record_rounds: bool = True) -> ElectionOutcome:
    """Run instant-runoff rounds until one candidate remains.

    The tiebreak policy picks which weakly-minimal candidate leaves when
    several tie for the lowest share. Branch(target) searches elimination
    branches and raises ValueError when no branch elects the target.
    """
    cands = _validate_candidates(dm, candidates)
    if policy is None:
        policy = Branch(None)
    if isinstance(policy, Branch) and policy.target is not None:
        if policy.target not in cands:
            raise ValueError(f"Branch target {policy.target} is not a candidate")
        return _run_branch_target(dm, cands, policy.target, record_rounds)
    rng = random.Random(policy.seed) if isinstance(policy, Seeded) else None
    if isinstance(policy, FixedOrder):
        missing = set(cands) - set(policy.order)
        if missing:
            raise ValueError(f"FixedOrder does not cover candidates {sorted(missing)}")
    rounds = []
    alive = cands
    while len(alive) > 1:
        tied = _tied_min(dm, alive)
        if len(tied) == 1:
            out = tied[0]
        elif isinstance(policy, FixedOrder):
            out = min(tied, key=policy.order.index)
        elif isinstance(policy, Seeded):
            out = rng.choice(tied)
        else:  # Branch(None): canonical first branch
            out = tied[0]
        if record_rounds:
            rounds.append(Round(alive, _fraction_shares(dm, alive), tied, out))
        alive = tuple(c for c in alive if c != out)
    return ElectionOutcome(alive[0], tuple(rounds))


def _run_branch_target(dm, cands, target, record_rounds) -> ElectionOutcome:
    dead_ends: set[tuple[int, ...]] = set()

    def search(alive: tuple[int, ...]):
        if alive == (target,):
            return []
        if alive in dead_ends:
            return None
        tied = _tied_min(dm, alive)
        options = [t for t in tied if t != target] if len(alive) > 1 else []
        for out in options:
            rest = tuple(c for c in alive if c != out)
            tail = search(rest)
            if tail is not None:
                rec = (
                    Round(alive, _fraction_shares(dm, alive), tied, out)
                    if record_rounds
                    else Round(alive, {}, tied, out)
                )
                return [rec] + tail
        dead_ends.add(alive)
        return None

    trace = search(cands)
    if trace is None:
        raise ValueError(f"no tiebreak branch elects candidate {target}")
    return ElectionOutcome(target, tuple(trace))


def possible_winners(dm, candidates=None, *, node_budget: int = 200_000) -> frozenset[int]:
    """All candidates that win under some tiebreak branch.

    Memoized DFS over surviving candidate sets. node_budget caps the number
    of distinct sets expanded; exceeding it raises BudgetExceededError rather
    than returning a partial answer.
    """
    if candidates is None:
        candidates = range(len(dm))
    cands = _validate_candidates(dm, candidates)
    memo: dict[tuple[int, ...], frozenset[int]] = {}

    def rec(alive: tuple[int, ...]) -> frozenset[int]:
        if len(alive) == 1:
            return frozenset(alive)
        hit = memo.get(alive)
        if hit is not None:
            return hit
        if len(memo) >= node_budget:
            raise BudgetExceededError(
                f"possible-winner search incomplete: more than {node_budget} "
                "candidate subsets expanded"
            )
        tied = _tied_min(dm, alive)
        out: frozenset[int] = frozenset()
        for t in tied:
            out |= rec(tuple(c for c in alive if c != t))
        memo[alive] = out
        return out

    return rec(cands)
