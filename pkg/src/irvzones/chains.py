"""Condorcet chains: constructions and Monte-Carlo verification.

A chain is a sequence of candidate configurations in a region that walks
a possible IRV winner from the center (a Condorcet winner) to a corner
(a Condorcet loser).  Each step's designated winner appears in the next
step's configuration and must be eliminable there first; a chain that
verifies end-to-end witnesses that the region has no nontrivial
exclusion zone.

Verification is statistical.  Designated first eliminations are
confirmed one-sided at ``margin_sigmas`` standard errors of each share
difference.  Designated winners only need to be *reachable* under some
tiebreak sequence, so reachability explores every elimination order
whose candidate is within a wider band (``margin_sigmas + BAND_EXTRA``)
of the round minimum; exact ties, which several steps rely on, fall
inside that band.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ._seeds import stream_seed
from .geometry import (
    MCShares,
    Point,
    Rectangle,
    Scene,
    _diff_sigma,
    _validate_candidates,
    mc_vote_shares,
)

BAND_EXTRA = 2.0

_CHAIN_NAME_RE = re.compile(
    r"^\s*(square_l2|rect_l1|rect_l2)\s*(?:\(\s*([0-9]+(?:\.[0-9]+)?)\s*\))?\s*$"
)


@dataclass(frozen=True)
class ChainStep:
    """One configuration with its designated first elimination and winner.

    ``eliminated`` is set only when the construction claims a strict
    first elimination; tie-driven eliminations leave it None and rely on
    the reachability check.  ``tag`` names the construction the step
    instantiates.
    """

    points: tuple[Point, ...]
    winner: Point
    eliminated: Point | None
    tag: str

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("a step needs at least two candidates")
        if self.winner not in self.points:
            raise ValueError("winner must be one of the step's candidates")
        if self.eliminated is not None and self.eliminated not in self.points:
            raise ValueError("eliminated candidate must be one of the step's candidates")


@dataclass(frozen=True)
class ChainSpec:
    steps: tuple[ChainStep, ...]
    scene: Scene | None = None


@dataclass(frozen=True)
class StepReport:
    index: int
    tag: str
    shares: MCShares
    elimination_gap_sigmas: float | None
    elimination_confirmed: bool | None
    winner_reachable: bool
    passed: bool
    note: str


@dataclass(frozen=True)
class ChainReport:
    passed: bool
    steps: tuple[StepReport, ...]
    samples: int
    seed: int
    margin_sigmas: float


def _square_chain() -> ChainSpec:
    scene = Scene(Rectangle(1.0, 1.0), 2)
    x1 = 0.1  # cross offset; needs 1/2 - 1/sqrt(5) < x1 <= 0.16 for steps 1-2
    x2 = 0.18  # edge offset; needs 1/6 < x2 < 0.19 for steps 3-4
    center = scene.region.center()
    bottom = (0.5, x1)
    cross = ChainStep(
        (center, (x1, 0.5), (0.5, 1.0 - x1), (1.0 - x1, 0.5), bottom),
        winner=bottom,
        eliminated=center,
        tag="center-cross",
    )
    left_mid = (0.0, 0.5)
    sides = ChainStep(
        (bottom, left_mid, (1.0, 0.5)),
        winner=left_mid,
        eliminated=bottom,
        tag="side-midpoints",
    )
    top = (0.0, 1.0 - x2)
    triple = ChainStep(
        (left_mid, (0.0, x2), top),
        winner=top,
        eliminated=left_mid,
        tag="edge-triple",
    )
    corner = (1.0, 1.0)
    squeeze = ChainStep(
        (top, (0.0, 0.0), corner),
        winner=corner,
        eliminated=top,
        tag="corner-squeeze",
    )
    return ChainSpec((cross, sides, triple, squeeze), scene)


def _walk_pairs(steps: list[ChainStep], start: Point, half_width: float,
                eps: float, arm_y: "tuple[float, float] | None") -> Point:
    """Walk the winner from the center to the left edge midpoint.

    Each pair is a three-candidate wedge that eliminates the previous
    winner at x, handing the win to an arm at x - eps, followed by a
    two-candidate step pulling the win back down to the midline.  When
    ``arm_y`` is None the arm offsets scale with eps (the L1 wedge);
    otherwise they are the fixed heights given (the L2 wedge).
    """
    pairs = math.ceil(half_width / eps - 1e-9)
    prev = start
    for j in range(1, pairs + 1):
        x = half_width - (j - 1) * eps
        nxt = half_width - j * eps if j < pairs else 0.0  # land exactly on the edge
        step_eps = x - nxt
        if arm_y is None:
            top = (nxt, 0.5 + 2.0 * step_eps)
            bot = (nxt, 0.5 - 2.0 * step_eps)
        else:
            top = (nxt, arm_y[1])
            bot = (nxt, arm_y[0])
        steps.append(ChainStep((prev, top, bot), winner=top, eliminated=prev, tag="wedge-walk"))
        mid = (nxt, 0.5)
        steps.append(ChainStep((top, mid), winner=mid, eliminated=top, tag="wedge-advance"))
        prev = mid
    return prev


def _tie_triple(steps: list[ChainStep], prev: Point) -> Point:
    # three colinear edge candidates with exactly tied shares; the middle
    # (the previous winner) goes out by tiebreak and the top can win
    top = (0.0, 5.0 / 6.0)
    steps.append(
        ChainStep(((0.0, 1.0 / 6.0), prev, top), winner=top, eliminated=None, tag="left-edge-tie")
    )
    return top


def _rect_l1_chain(w: float) -> ChainSpec:
    scene = Scene(Rectangle(w, 1.0), 1)
    steps: list[ChainStep] = []
    # eps = 1/12 keeps the wedge candidate's share under 1/4 + eps^2/w for
    # every x, strictly below the arms' 3/8; wider wedges stop separating
    # once w exceeds roughly 1.9
    prev = _walk_pairs(steps, scene.region.center(), w / 2.0, 1.0 / 12.0, None)
    prev = _tie_triple(steps, prev)
    eps = 1.0 / (10.0 * w)
    step_y = 1.0 / (11.0 * w)
    j = 0
    while True:
        c = 1.0 - prev[1] - eps
        if c <= 1e-9:
            # final squeeze lands on the corner; implied eps' = 1 - prev_y
            # stays below the 1/(8w) validity bound because the previous
            # top candidate was within one step of the corner
            corner = (w, 1.0)
            steps.append(
                ChainStep((prev, (0.0, 0.0), corner), winner=corner,
                          eliminated=prev, tag="corner-squeeze")
            )
            break
        right = (w - c, 1.0)
        steps.append(
            ChainStep((prev, (0.0, c), right), winner=right,
                      eliminated=prev, tag="corner-squeeze")
        )
        top_left = (c, 1.0)
        steps.append(ChainStep((top_left, right), winner=top_left,
                               eliminated=None, tag="top-mirror"))
        j += 1
        prev = (0.0, 5.0 / 6.0 + j * step_y)
        steps.append(ChainStep((top_left, prev), winner=prev,
                               eliminated=top_left, tag="top-edge-step"))
    return ChainSpec(tuple(steps), scene)


def _rect_l2_chain(w: float) -> ChainSpec:
    scene = Scene(Rectangle(w, 1.0), 2)
    steps: list[ChainStep] = []
    # the wedge candidate's share stays under 1/3 because the bisectors
    # have slope 6*eps and cannot climb past y = 2/3 across the width
    prev = _walk_pairs(steps, scene.region.center(), w / 2.0, 1.0 / (80.0 * w),
                       (1.0 / 3.0, 2.0 / 3.0))
    prev = _tie_triple(steps, prev)
    eps = 1.0 / (8.0 * w * w + 5.0)
    i = 1
    while True:
        c = 1.0 / 6.0 - i * eps
        if c <= 1e-9:
            corner = (w, 1.0)
            steps.append(
                ChainStep((prev, (0.0, 0.0), corner), winner=corner,
                          eliminated=prev, tag="corner-squeeze")
            )
            break
        right = (w, 1.0 - c)
        steps.append(
            ChainStep((prev, (0.0, c), right), winner=right,
                      eliminated=prev, tag="corner-squeeze")
        )
        left = (0.0, 1.0 - c)
        steps.append(ChainStep((left, right), winner=left,
                               eliminated=None, tag="top-mirror"))
        prev = left
        i += 1
    return ChainSpec(tuple(steps), scene)


def builtin_chain(name: str, width: float | None = None) -> ChainSpec:
    """Build a named chain; rectangle names take a width, e.g. "rect_l1(2)"."""
    m = _CHAIN_NAME_RE.match(name)
    if m is None:
        raise ValueError(f"unknown chain name {name!r}")
    kind, wtext = m.groups()
    if wtext is not None:
        if width is not None:
            raise ValueError("width given both in the name and as an argument")
        width = float(wtext)
    if kind == "square_l2":
        if width not in (None, 1.0):
            raise ValueError("square_l2 takes no width")
        return _square_chain()
    if width is None:
        raise ValueError(f"{kind} needs a width, e.g. {kind}(2)")
    w = float(width)
    if w < 1.0:
        raise ValueError("width must be >= 1 (height is normalized to 1)")
    if kind == "rect_l2":
        if w == 1.0:
            return _square_chain()
        return _rect_l2_chain(w)
    return _rect_l1_chain(w)


def _validate_chain(scene: Scene, chain: ChainSpec) -> None:
    if not chain.steps:
        raise ValueError("chain has no steps")
    region = scene.region
    for step in chain.steps:
        _validate_candidates(scene, step.points)
    for k in range(1, len(chain.steps)):
        prev_winner = chain.steps[k - 1].winner
        step = chain.steps[k]
        if prev_winner not in step.points:
            raise ValueError(
                f"broken linkage into step {k + 1}: previous winner "
                f"{prev_winner} is not a candidate there"
            )
        if step.eliminated is not None and step.eliminated != prev_winner:
            raise ValueError(
                f"step {k + 1} designates an elimination that is not the previous winner"
            )
    center = region.center()
    first = chain.steps[0]
    if center not in first.points:
        raise ValueError("first configuration must contain the region center")
    if first.winner == center:
        raise ValueError("first step must hand the win to someone other than the center")
    if chain.steps[-1].winner not in region.corners():
        raise ValueError("last winner must be a corner of the region")


def _verify_step(scene: Scene, step: ChainStep, index: int, link: Point | None,
                 samples: int, step_seed: int, margin_sigmas: float) -> StepReport:
    pts = step.points
    n = len(pts)
    cache: dict[frozenset[int], MCShares] = {}

    def shares_of(sub: frozenset[int]) -> MCShares:
        if sub not in cache:
            idx = sorted(sub)
            mask = sum(1 << j for j in idx)
            cache[sub] = mc_vote_shares(
                scene, [pts[j] for j in idx], samples, stream_seed(step_seed, mask)
            )
        return cache[sub]

    band = margin_sigmas + BAND_EXTRA

    def eliminable(sub: frozenset[int], a: int) -> bool:
        est = shares_of(sub)
        idx = sorted(sub)
        sa = est.shares[idx.index(a)]
        smin = min(est.shares)
        if sa <= smin:
            return True
        sigma = max(_diff_sigma(sa, smin, samples), 1e-300)
        return (sa - smin) / sigma <= band

    memo: dict[frozenset[int], bool] = {}

    def reachable(sub: frozenset[int], target: int) -> bool:
        if sub == frozenset((target,)):
            return True
        if sub in memo:
            return memo[sub]
        ok = False
        for a in sorted(sub):
            if a == target:
                continue
            if eliminable(sub, a) and reachable(sub - {a}, target):
                ok = True
                break
        memo[sub] = ok
        return ok

    full = frozenset(range(n))
    est = shares_of(full)
    win_idx = pts.index(step.winner)
    note_parts: list[str] = []

    gap: float | None = None
    confirmed: bool | None = None
    if step.eliminated is not None:
        e_idx = pts.index(step.eliminated)
        gaps = []
        for b in range(n):
            if b == e_idx:
                continue
            sigma = max(_diff_sigma(est.shares[b], est.shares[e_idx], samples), 1e-300)
            gaps.append((est.shares[b] - est.shares[e_idx]) / sigma)
        gap = min(gaps)
        confirmed = gap > margin_sigmas
        if not confirmed:
            note_parts.append(
                "designated elimination contradicted"
                if gap < -margin_sigmas
                else "designated elimination inconclusive"
            )
        first_out = e_idx
    elif link is not None:
        first_out = pts.index(link)
    else:
        first_out = None

    if first_out is None:
        reach = reachable(full, win_idx)
    elif step.eliminated is None and not eliminable(full, first_out):
        reach = False
        note_parts.append("previous winner is not statistically eliminable")
    else:
        reach = reachable(full - {first_out}, win_idx)
    if first_out is not None and not reach and "eliminable" not in " ".join(note_parts):
        note_parts.append("designated winner unreachable")
    elif first_out is None and not reach:
        note_parts.append("designated winner unreachable")

    passed = reach and (confirmed is None or confirmed)
    return StepReport(
        index=index,
        tag=step.tag,
        shares=est,
        elimination_gap_sigmas=gap,
        elimination_confirmed=confirmed,
        winner_reachable=reach,
        passed=passed,
        note="; ".join(note_parts),
    )


def verify_chain(scene: Scene, chain: ChainSpec, samples: int = 1_000_000,
                 seed: int = 0, margin_sigmas: float = 3.0) -> ChainReport:
    """Statistically verify a chain; structural defects raise ValueError.

    Per step: a designated elimination must sit below every other
    candidate by ``margin_sigmas`` share-difference standard errors, and
    the designated winner must be reachable once the previous winner is
    gone.  Endpoint and linkage conditions are checked structurally
    before any sampling.
    """
    _validate_chain(scene, chain)
    reports = []
    ok = True
    for i, step in enumerate(chain.steps):
        link = chain.steps[i - 1].winner if i > 0 else None
        rep = _verify_step(scene, step, i, link, samples, stream_seed(seed, i), margin_sigmas)
        reports.append(rep)
        ok = ok and rep.passed
    return ChainReport(
        passed=ok,
        steps=tuple(reports),
        samples=samples,
        seed=seed,
        margin_sigmas=margin_sigmas,
    )


def _format_point(p: Point) -> str:
    return ",".join(repr(float(x)) for x in p)


def _parse_point(text: str, lineno: int) -> Point:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"line {lineno}: bad point {text!r}") from None
    if len(parts) < 2:
        raise ValueError(f"line {lineno}: bad point {text!r}")
    return parts


def chain_to_text(chain: ChainSpec) -> str:
    """Serialize a chain (with its scene) to the line-oriented format."""
    if chain.scene is None:
        raise ValueError("chain has no scene attached")
    region = chain.scene.region
    if not isinstance(region, Rectangle):
        raise ValueError("only rectangle chains serialize to text")
    lines = [
        f"region rectangle {region.w!r} {region.h!r}",
        f"metric {chain.scene.metric_p}",
    ]
    for step in chain.steps:
        pts = ";".join(_format_point(p) for p in step.points)
        elim = "none" if step.eliminated is None else _format_point(step.eliminated)
        win = _format_point(step.winner)
        lines.append(f"step tag={step.tag} points={pts} eliminated={elim} winner={win}")
    return "\n".join(lines) + "\n"


def parse_chain(text: str) -> ChainSpec:
    """Parse the line-oriented chain format back into a ChainSpec."""
    region: Rectangle | None = None
    metric: int | None = None
    steps: list[ChainStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "region":
            if len(fields) != 4 or fields[1] != "rectangle":
                raise ValueError(f"line {lineno}: expected 'region rectangle <w> <h>'")
            region = Rectangle(float(fields[2]), float(fields[3]))
        elif kind == "metric":
            if len(fields) != 2 or fields[1] not in ("1", "2"):
                raise ValueError(f"line {lineno}: expected 'metric 1' or 'metric 2'")
            metric = int(fields[1])
        elif kind == "step":
            parts = dict(
                f.split("=", 1) for f in fields[1:] if "=" in f
            )
            missing = {"tag", "points", "eliminated", "winner"} - parts.keys()
            if missing:
                raise ValueError(f"line {lineno}: step missing {sorted(missing)}")
            points = tuple(
                _parse_point(p, lineno) for p in parts["points"].split(";") if p
            )
            elim = (
                None
                if parts["eliminated"] == "none"
                else _parse_point(parts["eliminated"], lineno)
            )
            winner = _parse_point(parts["winner"], lineno)
            steps.append(ChainStep(points, winner=winner, eliminated=elim, tag=parts["tag"]))
        else:
            raise ValueError(f"line {lineno}: unknown directive {kind!r}")
    if region is None or metric is None:
        raise ValueError("chain text must declare a region and a metric")
    return ChainSpec(tuple(steps), Scene(region, metric))
