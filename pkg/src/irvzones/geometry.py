"""Monte-Carlo elections over continuous uniform-voter regions.

Voters are uniform over a region; each sample votes for its nearest
candidate under the scene metric (L1 or L2), splitting evenly on ties.
Share estimators accumulate integer weights (each sample distributes
lcm(1..k) units), so estimated shares always sum to exactly 1 and the
split bookkeeping is checkable after the fact.

Tie detection uses a small absolute tolerance on distances rather than
exact equality: under L1, candidate pairs with |dx| = |dy| tie on a
positive-measure region, and the two float evaluations of equal distances
can differ by a few ulps.  The tolerance band misclassifies only a
measure ~1e-12 sliver, far below any statistical resolution used here.

Elimination decisions are statistical: a candidate is eliminated only when
its share trails the runner-up-from-bottom by a configurable number of
standard errors, and anything closer reports Inconclusive instead of
silently guessing.  Genuine ties (symmetric configurations) are real and
must surface.

Sampling is batched with per-batch derived seeds; accumulation is an
integer sum, so results are reproducible for a fixed seed regardless of
how batches would be scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._seeds import stream_seed

Point = tuple[float, ...]

_TIE_TOL = 1e-12
_BATCH = 1 << 16


@dataclass(frozen=True)
class Rectangle:
    w: float
    h: float = 1.0

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError("rectangle sides must be positive")

    @property
    def dim(self) -> int:
        return 2

    @property
    def area(self) -> float:
        return self.w * self.h

    def center(self) -> Point:
        return (self.w / 2, self.h / 2)

    def corners(self) -> tuple[Point, ...]:
        return ((0.0, 0.0), (self.w, 0.0), (0.0, self.h), (self.w, self.h))

    def contains(self, pts: np.ndarray) -> np.ndarray:
        x, y = pts[:, 0], pts[:, 1]
        return (x >= 0) & (x <= self.w) & (y >= 0) & (y <= self.h)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return rng.random((k, 2)) * np.array([self.w, self.h])


@dataclass(frozen=True)
class Hyperrectangle:
    dims: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(float(d) for d in self.dims))
        if not self.dims or any(d <= 0 for d in self.dims):
            raise ValueError("hyperrectangle sides must be positive")

    @property
    def dim(self) -> int:
        return len(self.dims)

    @property
    def area(self) -> float:
        return math.prod(self.dims)

    def center(self) -> Point:
        return tuple(d / 2 for d in self.dims)

    def corners(self) -> tuple[Point, ...]:
        out = [()]
        for d in self.dims:
            out = [c + (v,) for c in out for v in (0.0, d)]
        return tuple(out)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        ok = np.ones(len(pts), dtype=bool)
        for i, d in enumerate(self.dims):
            ok &= (pts[:, i] >= 0) & (pts[:, i] <= d)
        return ok

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return rng.random((k, len(self.dims))) * np.array(self.dims)


@dataclass(frozen=True)
class FlagF:
    """Fixed flag shape: an 8 x 0.1 strip, a top-left 2-2 right triangle
    resting on the strip at x = 0, and a bottom-right 1-1 right triangle
    hanging below the strip at x = 8.  Total area 0.8 + 2 + 0.5 = 3.3.
    """

    # rejection-sampling bounding box
    BOX_LO = (0.0, -1.0)
    BOX_HI = (8.0, 2.1)

    @property
    def dim(self) -> int:
        return 2

    @property
    def area(self) -> float:
        return 3.3

    @property
    def top_triangle_area(self) -> float:
        return 2.0

    def center(self) -> Point:
        raise ValueError("flag shape has no designated center")

    def contains(self, pts: np.ndarray) -> np.ndarray:
        x, y = pts[:, 0], pts[:, 1]
        strip = (x >= 0) & (x <= 8) & (y >= 0) & (y <= 0.1)
        top = (x >= 0) & (y >= 0.1) & (x + y <= 2.1)
        bottom = (y <= 0) & (x <= 8) & (x + y >= 7)
        return strip | top | bottom

    def in_top_triangle(self, pts: np.ndarray) -> np.ndarray:
        x, y = pts[:, 0], pts[:, 1]
        return (x >= 0) & (y >= 0.1) & (x + y <= 2.1)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        lo = np.array(self.BOX_LO)
        span = np.array(self.BOX_HI) - lo
        chunks = []
        have = 0
        while have < k:
            # box area 24.8 vs flag area 3.3; overdraw to land near k accepts
            draw = max(1024, int((k - have) * 9))
            pts = rng.random((draw, 2)) * span + lo
            pts = pts[self.contains(pts)]
            chunks.append(pts)
            have += len(pts)
        return np.concatenate(chunks)[:k]


Region = Rectangle | Hyperrectangle | FlagF


@dataclass(frozen=True)
class Scene:
    region: Region
    metric_p: int = 2

    def __post_init__(self):
        if self.metric_p not in (1, 2):
            raise ValueError("metric_p must be 1 or 2")


@dataclass(frozen=True)
class MCShares:
    candidates: tuple[Point, ...]
    shares: tuple[float, ...]
    stderrs: tuple[float, ...]
    samples: int
    seed: int
    weight_counts: tuple[int, ...]
    weight_scale: int


@dataclass(frozen=True)
class MCOutcome:
    winner: Point | None
    eliminated: tuple[Point, ...]
    inconclusive_round: int | None
    rounds: tuple[MCShares, ...]

    @property
    def conclusive(self) -> bool:
        return self.winner is not None


def _distances(pts: np.ndarray, cands: np.ndarray, metric_p: int) -> np.ndarray:
    diff = pts[:, None, :] - cands[None, :, :]
    if metric_p == 1:
        return np.abs(diff).sum(axis=2)
    return (diff * diff).sum(axis=2)  # squared L2 orders identically


def _validate_candidates(scene: Scene, candidates) -> np.ndarray:
    cands = np.asarray([tuple(map(float, c)) for c in candidates], dtype=float)
    if cands.ndim != 2 or cands.shape[1] != scene.region.dim:
        raise ValueError(f"candidates must be {scene.region.dim}-dimensional points")
    if len({tuple(c) for c in cands.tolist()}) != len(cands):
        raise ValueError("candidates must be distinct")
    inside = scene.region.contains(cands)
    if not inside.all():
        bad = cands[~inside][0]
        raise ValueError(f"candidate {tuple(bad)} lies outside the region")
    return cands


def mc_vote_shares(scene: Scene, candidates, samples: int, seed: int = 0) -> MCShares:
    """Estimate split-plurality shares of the candidates among uniform voters.

    The tie tolerance for L2 applies to squared distances; comparisons only
    need the ordering, and squaring avoids an extra rounding step.
    """
    cands = _validate_candidates(scene, candidates)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    k = len(cands)
    scale = math.lcm(*range(1, k + 1))
    counts = np.zeros(k, dtype=np.int64)
    done = 0
    batch_index = 0
    while done < samples:
        take = min(_BATCH, samples - done)
        rng = np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), batch_index]))
        pts = scene.region.sample(rng, take)
        d = _distances(pts, cands, scene.metric_p)
        dmin = d.min(axis=1, keepdims=True)
        tied = d <= dmin + _TIE_TOL
        per = scale // tied.sum(axis=1)
        counts += (tied * per[:, None]).sum(axis=0, dtype=np.int64)
        done += take
        batch_index += 1
    total = scale * samples
    shares = counts / total
    stderrs = np.sqrt(shares * (1 - shares) / samples)
    return MCShares(
        candidates=tuple(tuple(c) for c in cands.tolist()),
        shares=tuple(shares.tolist()),
        stderrs=tuple(stderrs.tolist()),
        samples=samples,
        seed=seed,
        weight_counts=tuple(int(c) for c in counts),
        weight_scale=scale,
    )


def _diff_sigma(pa: float, pb: float, n: int) -> float:
    """Standard error of the difference of two shares from one sample set."""
    var = (pa + pb - (pa - pb) ** 2) / n
    return math.sqrt(max(var, 0.0))


def _eliminate_one(est: MCShares, margin_sigmas: float) -> int | None:
    """Index of the statistically separated minimum, or None on a tie."""
    order = sorted(range(len(est.shares)), key=lambda i: est.shares[i])
    a, b = order[0], order[1]
    gap = est.shares[b] - est.shares[a]
    if gap > margin_sigmas * _diff_sigma(est.shares[a], est.shares[b], est.samples):
        return a
    return None


def mc_irv_outcome(
    scene: Scene,
    candidates,
    samples: int,
    seed: int = 0,
    margin_sigmas: float = 3.0,
) -> MCOutcome:
    """Run IRV rounds on MC shares, eliminating only clear statistical minima.

    Each round resamples voters from a seed derived from (seed, round), so
    rounds are independent estimates.  The first round whose low pair is
    closer than the margin stops the run as Inconclusive (1-based round
    index); statistical ties are reported, never silently broken.
    """
    cands = [tuple(map(float, c)) for c in candidates]
    _validate_candidates(scene, cands)
    surviving = list(range(len(cands)))
    eliminated: list[Point] = []
    rounds: list[MCShares] = []
    round_no = 0
    while len(surviving) > 1:
        est = mc_vote_shares(
            scene,
            [cands[i] for i in surviving],
            samples,
            seed=stream_seed(seed, round_no),
        )
        rounds.append(est)
        loser = _eliminate_one(est, margin_sigmas)
        if loser is None:
            return MCOutcome(None, tuple(eliminated), round_no + 1, tuple(rounds))
        eliminated.append(cands[surviving[loser]])
        surviving.pop(loser)
        round_no += 1
    return MCOutcome(cands[surviving[0]], tuple(eliminated), None, tuple(rounds))


@dataclass(frozen=True)
class PairwiseCheck:
    anchor: Point
    opponent: Point
    anchor_share: float
    stderr: float
    ok: bool


@dataclass(frozen=True)
class HyperrectReport:
    dims: tuple[float, ...]
    metric_p: int
    opponents: int
    samples: int
    seed: int
    margin_sigmas: float
    center_checks: tuple[PairwiseCheck, ...]
    corner_checks: tuple[PairwiseCheck, ...]
    passed: bool


def verify_condorcet_hyperrect(
    dims,
    p: int,
    opponents: int,
    samples: int,
    seed: int = 0,
    *,
    margin_sigmas: float = 3.0,
) -> HyperrectReport:
    """Check the box center never statistically loses a head-to-head contest
    and the origin corner never statistically wins one, against random
    opponents.
    """
    region = Hyperrectangle(tuple(dims))
    scene = Scene(region, p)
    center = region.center()
    corner = tuple(0.0 for _ in region.dims)
    rng = np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), 0xA11C]))

    def draw_opponent(avoid: Point) -> Point:
        while True:
            pt = tuple((rng.random(region.dim) * np.array(region.dims)).tolist())
            if pt != avoid:
                return pt

    center_checks = []
    corner_checks = []
    counter = 0
    for _ in range(opponents):
        opp = draw_opponent(center)
        est = mc_vote_shares(scene, [center, opp], samples, seed=stream_seed(seed, counter))
        counter += 1
        ok = est.shares[0] >= 0.5 - margin_sigmas * est.stderrs[0]
        center_checks.append(PairwiseCheck(center, opp, est.shares[0], est.stderrs[0], ok))
    for _ in range(opponents):
        opp = draw_opponent(corner)
        est = mc_vote_shares(scene, [corner, opp], samples, seed=stream_seed(seed, counter))
        counter += 1
        ok = est.shares[0] <= 0.5 + margin_sigmas * est.stderrs[0]
        corner_checks.append(PairwiseCheck(corner, opp, est.shares[0], est.stderrs[0], ok))
    passed = all(c.ok for c in center_checks) and all(c.ok for c in corner_checks)
    return HyperrectReport(
        region.dims, p, opponents, samples, seed, margin_sigmas,
        tuple(center_checks), tuple(corner_checks), passed,
    )


@dataclass(frozen=True)
class ProjectionReport:
    dims: tuple[float, ...]
    metric_p: int
    plane_axes: tuple[int, int]
    full_shares: MCShares
    plane_shares: MCShares
    max_sigma_gap: float
    passed: bool


def verify_projection(
    dims,
    p: int,
    plane_axes,
    candidates,
    samples: int,
    seed: int = 0,
    *,
    margin_sigmas: float = 3.0,
) -> ProjectionReport:
    """Shares of a mid-plane configuration must match its 2-D projection.

    Every candidate must sit at the box midpoint in all non-plane axes;
    voters then order candidates exactly as their projections do, so the
    full-dimensional shares and the projected-rectangle shares estimate the
    same quantities.
    """
    region = Hyperrectangle(tuple(dims))
    a, b = plane_axes
    if a == b or not (0 <= a < region.dim and 0 <= b < region.dim):
        raise ValueError("plane_axes must be two distinct axis indices")
    cands = [tuple(map(float, c)) for c in candidates]
    for c in cands:
        if len(c) != region.dim:
            raise ValueError("candidates must match the hyperrectangle dimension")
        for i, coord in enumerate(c):
            if i not in (a, b) and coord != region.dims[i] / 2:
                raise ValueError(
                    f"candidate {c} is off the mid-plane on axis {i} "
                    f"(expected {region.dims[i] / 2})"
                )
    full = mc_vote_shares(Scene(region, p), cands, samples, seed=stream_seed(seed, 0))
    plane_region = Rectangle(region.dims[a], region.dims[b])
    projected = [(c[a], c[b]) for c in cands]
    plane = mc_vote_shares(Scene(plane_region, p), projected, samples, seed=stream_seed(seed, 1))
    gaps = []
    for pf, sf, p2, s2 in zip(full.shares, full.stderrs, plane.shares, plane.stderrs):
        sigma = math.sqrt(sf**2 + s2**2)
        gaps.append(abs(pf - p2) / sigma if sigma > 0 else 0.0)
    max_gap = max(gaps)
    return ProjectionReport(
        region.dims, p, (a, b), full, plane, max_gap, max_gap <= margin_sigmas
    )


@dataclass(frozen=True)
class FlagConfigResult:
    config: tuple[Point, ...]
    winner: Point | None
    inconclusive_round: int | None
    escaped: bool


@dataclass(frozen=True)
class FlagZoneReport:
    configs: int
    samples: int
    seed: int
    margin_sigmas: float
    conclusive: int
    inconclusive: int
    escapes: tuple[FlagConfigResult, ...]
    flag_area_estimate: float
    flag_area_sigma: float
    top_area_estimate: float
    top_area_sigma: float
    areas_ok: bool
    passed: bool


def _in_flag_zone(pt: Point) -> bool:
    return pt[0] - pt[1] <= 6.0


def verify_flag_zone(
    configs: int,
    samples: int,
    seed: int = 0,
    *,
    margin_sigmas: float = 3.0,
    area_samples: int = 1_000_000,
) -> FlagZoneReport:
    """Random elections on the flag shape never conclusively elect x - y > 6.

    Each configuration draws 2..6 uniform candidates in the flag, redrawing
    until at least one lands in the zone x - y <= 6.  A configuration counts
    as an escape only when the IRV outcome is conclusive at the margin and
    the winner violates the zone; statistical ties are tallied separately.
    Also re-estimates the flag and top-triangle areas from the rejection
    rate as a sampler self-check.
    """
    if configs < 1:
        raise ValueError("configs must be >= 1")
    flag = FlagF()
    scene = Scene(flag, 1)

    box_area = (flag.BOX_HI[0] - flag.BOX_LO[0]) * (flag.BOX_HI[1] - flag.BOX_LO[1])
    rng = np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), 0xF1A6]))
    lo = np.array(flag.BOX_LO)
    span = np.array(flag.BOX_HI) - lo
    box_pts = rng.random((area_samples, 2)) * span + lo
    inside = flag.contains(box_pts)
    p_flag = inside.mean()
    flag_area = box_area * p_flag
    flag_sigma = box_area * math.sqrt(p_flag * (1 - p_flag) / area_samples)
    p_top = flag.in_top_triangle(box_pts).mean()
    top_area = box_area * p_top
    top_sigma = box_area * math.sqrt(p_top * (1 - p_top) / area_samples)
    areas_ok = (
        abs(flag_area - flag.area) <= margin_sigmas * flag_sigma
        and abs(top_area - flag.top_triangle_area) <= margin_sigmas * top_sigma
    )

    conclusive = 0
    inconclusive = 0
    escapes: list[FlagConfigResult] = []
    for i in range(configs):
        crng = np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), 1, i]))
        while True:
            size = int(crng.integers(2, 7))
            pts = flag.sample(crng, size)
            config = [tuple(p) for p in pts.tolist()]
            if any(_in_flag_zone(p) for p in config):
                break
        outcome = mc_irv_outcome(
            scene, config, samples, seed=stream_seed(seed, i), margin_sigmas=margin_sigmas
        )
        if outcome.winner is None:
            inconclusive += 1
        else:
            conclusive += 1
            if not _in_flag_zone(outcome.winner):
                escapes.append(
                    FlagConfigResult(
                        tuple(config), outcome.winner, outcome.inconclusive_round, True
                    )
                )
    return FlagZoneReport(
        configs=configs,
        samples=samples,
        seed=seed,
        margin_sigmas=margin_sigmas,
        conclusive=conclusive,
        inconclusive=inconclusive,
        escapes=tuple(escapes),
        flag_area_estimate=float(flag_area),
        flag_area_sigma=float(flag_sigma),
        top_area_estimate=float(top_area),
        top_area_sigma=float(top_sigma),
        areas_ok=bool(areas_ok),
        passed=bool(areas_ok and not escapes),
    )
