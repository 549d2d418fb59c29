"""Randomized approximation of minimal exclusion zones.

The returned set only ever contains nodes certified to belong to the minimal
zone: full-slate winners under random tiebreaks, escapees of sampled
elections, and everything those nodes reach in the pairwise loss graph.  The
stopping rule (a quiet streak of length ceil(log(2/delta) / (2 eps^2)))
yields a two-sided guarantee: the result is always a subset of the exact
minimal zone, and with probability at least 1 - delta it is a
(1 - eps)-approximate zone under the sampler's configuration distribution.

The sampler draws u uniformly from the working set, then an independent
uniform subset of the remaining nodes (possibly empty, giving a
one-candidate election).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ._seeds import stream_seed as _stream_seed
from .elections import Seeded, run_irv
from .zones import build_loss_graph, loss_closure


def quiet_streak_target(epsilon: float, delta: float) -> int:
    """Consecutive non-updating samples needed before stopping."""
    if not (0 < epsilon < 1 and 0 < delta < 1):
        raise ValueError("epsilon and delta must lie in (0, 1)")
    return math.ceil(math.log(2 / delta) / (2 * epsilon * epsilon))


@dataclass(frozen=True)
class ApproxZoneReport:
    zone: frozenset[int]
    epsilon: float
    delta: float
    iterations_run: int
    quiet_streak_target: int
    certified_trivial: bool
    rng_seed: int


@dataclass(frozen=True)
class ApproxCheckReport:
    passed: bool
    samples_run: int
    counterexample: tuple[int, ...] | None
    escaped_winner: int | None
    epsilon: float
    delta: float
    rng_seed: int


def _sample_config(rng: random.Random, pool: list[int], n: int) -> tuple[int, tuple[int, ...]]:
    """One node from the pool, plus a uniform subset of the other nodes."""
    u = rng.choice(pool)
    config = [u]
    for v in range(n):
        if v != u and rng.getrandbits(1):
            config.append(v)
    config.sort()
    return u, tuple(config)


def approx_minimal_zone(
    dm,
    *,
    epsilon: float = 0.1,
    delta: float = 0.1,
    seed: int = 0,
    use_loss_closure: bool = True,
    node_budget: int = 200_000,
) -> ApproxZoneReport:
    """Grow a certified subset of the minimal zone until samples go quiet.

    Every (dm, epsilon, delta, seed) tuple is fully reproducible: iteration k
    of the run consumes only a stream derived from (seed, k).  Disabling
    ``use_loss_closure`` skips the reachability expansion of newly added
    nodes; the result is still a certified subset, just slower to converge.
    """
    n = len(dm)
    target = quiet_streak_target(epsilon, delta)
    losses = build_loss_graph(dm)

    def expand(nodes):
        return loss_closure(losses, nodes) if use_loss_closure else frozenset(nodes)

    zone: set[int] = set()
    full = tuple(range(n))
    for i in range(n):
        rng = random.Random(_stream_seed(seed, i))
        outcome = run_irv(dm, full, Seeded(rng.getrandbits(63)))
        zone |= expand({outcome.winner})

    iterations = 0
    streak = 0
    counter = n
    while streak < target and len(zone) < n:
        rng = random.Random(_stream_seed(seed, counter))
        counter += 1
        iterations += 1
        _u, config = _sample_config(rng, sorted(zone), n)
        outcome = run_irv(dm, config, Seeded(rng.getrandbits(63)))
        if outcome.winner in zone:
            streak += 1
        else:
            zone |= expand({outcome.winner})
            streak = 0

    result = frozenset(zone)
    return ApproxZoneReport(
        zone=result,
        epsilon=epsilon,
        delta=delta,
        iterations_run=iterations,
        quiet_streak_target=target,
        certified_trivial=len(result) == n,
        rng_seed=seed,
    )


def check_approx_zone(
    dm,
    s,
    *,
    epsilon: float = 0.1,
    delta: float = 0.1,
    seed: int = 0,
) -> ApproxCheckReport:
    """Sample elections intersecting s; pass iff no winner escapes.

    Runs the same sampler as the zone search, restricted to drawing the
    anchored node from s.  The full node set passes without sampling; it is
    a zone outright.
    """
    n = len(dm)
    pool = sorted(set(s))
    if not pool:
        raise ValueError("cannot check an empty set")
    if any(not 0 <= v < n for v in pool):
        raise ValueError("set members must be node indices")
    target = quiet_streak_target(epsilon, delta)
    if len(pool) == n:
        return ApproxCheckReport(True, 0, None, None, epsilon, delta, seed)
    s_set = frozenset(pool)
    for i in range(target):
        rng = random.Random(_stream_seed(seed, i))
        _u, config = _sample_config(rng, pool, n)
        outcome = run_irv(dm, config, Seeded(rng.getrandbits(63)))
        if outcome.winner not in s_set:
            return ApproxCheckReport(
                False, i + 1, config, outcome.winner, epsilon, delta, seed
            )
    return ApproxCheckReport(True, target, None, None, epsilon, delta, seed)
