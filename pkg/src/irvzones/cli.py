"""Command-line entry point with machine-readable reporting.

Every subcommand prints one report to stdout (JSON by default, CSV for the
census) and signals its verdict through the exit code:

* 0  success / the assertion holds
* 1  the assertion fails (NotZone, a failed statistical check, an
     unreachable tiebreak target, a family-oracle mismatch)
* 2  usage or input error
* 3  a configured budget was exceeded before an answer was reached

Runs are reproducible: the RNG seed defaults to a fixed constant, and worker
count never changes any output byte.  With ``--format json`` errors go to
stderr as one-line JSON objects so scripts can parse failures too.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .approx import approx_minimal_zone, check_approx_zone
from .chains import builtin_chain, parse_chain, verify_chain
from .elections import Branch, FixedOrder, Seeded, pairwise_contest, run_irv
from .enumeration import zone_census
from .errors import (
    BudgetExceededError,
    DisconnectedGraphError,
    GraphFormatError,
    MalformedInstanceError,
)
from .families import FAMILY_KINDS, build_family, family_zone, is_all_pairwise_ties
from .gadget import has_exact_cover, parse_rx3c, rx3c_gadget, validate_rx3c
from .geometry import (
    MCShares,
    verify_condorcet_hyperrect,
    verify_flag_zone,
    verify_projection,
)
from .graphs import Graph, all_pairs_distances, load_graph, to_graph6
from .zones import (
    ZoneCheckResult,
    all_exclusion_zones,
    is_exclusion_zone,
    minimal_exclusion_zone,
    replay_witness,
)

__all__ = ["run_cli", "main"]

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_SEED = 0

# census sizes available without --extended; larger rows take hours
_CENSUS_DESK = {"graphs": 7, "trees": 12}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit on bad input."""

    def error(self, message):
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers


def _split_csv(text: str) -> list[str]:
    parts = [t.strip() for t in text.split(",")]
    if any(not t for t in parts):
        raise _UsageError(f"empty item in comma-separated list {text!r}")
    return parts


def _node_indices(g: Graph, text: str) -> list[int]:
    try:
        return [g.index_of(t) for t in _split_csv(text)]
    except KeyError as exc:
        raise _UsageError(str(exc.args[0])) from None


def _label(g: Graph, idx: int):
    lab = g.labels[idx]
    return int(lab) if lab.isdigit() else lab


def _labels(g: Graph, idxs) -> list:
    return [_label(g, i) for i in sorted(idxs)]


def _floats_csv(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in _split_csv(text))
    except ValueError:
        raise _UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _ints_csv(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in _split_csv(text))
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}") from None


def _points_arg(text: str) -> list[tuple[float, ...]]:
    """Parse "x,y;x,y;..." into coordinate tuples."""
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            pts.append(_floats_csv(chunk))
    if not pts:
        raise _UsageError(f"no points in {text!r}")
    return pts


def _parse_range(text: str) -> list[int]:
    """Parse "3..7" or "8" into an inclusive integer list."""
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError:
        raise _UsageError(f"expected N or LO..HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise _UsageError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def _parse_policy(g: Graph, text: str | None, seed: int):
    """Map a --tiebreak string to a policy object plus its description."""
    if text is None or text == "lowest":
        return Branch(None), "lowest"
    if text == "seeded":
        return Seeded(seed), f"seeded:{seed}"
    if text.startswith("order:"):
        order = _node_indices(g, text[len("order:"):])
        return FixedOrder(order), text
    if text.startswith("target:"):
        label = text[len("target:"):].strip()
        try:
            return Branch(g.index_of(label)), text
        except KeyError as exc:
            raise _UsageError(str(exc.args[0])) from None
    raise _UsageError(
        f"bad --tiebreak {text!r}; expected lowest, seeded, order:a,b,..., or target:a"
    )


def _load(args) -> Graph:
    try:
        return load_graph(args.graph, largest_component=args.largest_component)
    except OSError as exc:
        raise _UsageError(f"cannot read {args.graph}: {exc.strerror or exc}") from None


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


# ---------------------------------------------------------------------------
# payload helpers


def _frac(x: Fraction) -> str:
    return str(x)


def _round_payload(g: Graph, rnd) -> dict:
    return {
        "candidates": [_label(g, c) for c in rnd.candidates],
        "shares": {g.labels[c]: _frac(rnd.shares[c]) for c in sorted(rnd.shares)},
        "tied": [_label(g, c) for c in rnd.tied],
        "eliminated": _label(g, rnd.eliminated),
    }


def _zone_check_payload(g: Graph, dm, zone, res: ZoneCheckResult) -> dict:
    payload = {
        "verdict": "IsZone" if res.is_zone else "NotZone",
        "set": _labels(g, zone),
        "configs_tested": res.configs_tested,
        "counterexample": None,
    }
    if res.is_zone:
        payload["kind"] = "trivial" if len(set(zone)) == g.n else "exact"
    else:
        config, member, shares = res.counterexample
        winner = replay_witness(dm, set(zone), res.counterexample)
        payload["counterexample"] = {
            "candidates": [_label(g, c) for c in config],
            "member": _label(g, member),
            "shares": {g.labels[c]: _frac(shares[c]) for c in sorted(shares)},
            "replay_winner": _label(g, winner),
            "replay_tiebreak": f"target:{g.labels[winner]}",
        }
    return payload


def _shares_payload(est: MCShares) -> dict:
    return {
        "candidates": [list(p) for p in est.candidates],
        "shares": list(est.shares),
        "stderrs": list(est.stderrs),
        "samples": est.samples,
        "seed": est.seed,
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_irv(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    cands = _node_indices(g, args.candidates)
    policy, desc = _parse_policy(g, args.tiebreak, args.seed)
    try:
        outcome = run_irv(dm, cands, policy)
    except ValueError as exc:
        if "no tiebreak branch elects" in str(exc):
            target = g.labels[policy.target]
            payload = {
                "winner": None,
                "tiebreak": desc,
                "rounds": [],
                "note": f"no tiebreak branch elects {target}",
            }
            return payload, EXIT_VERDICT
        raise
    payload = {
        "winner": _label(g, outcome.winner),
        "tiebreak": desc,
        "rounds": [_round_payload(g, r) for r in outcome.rounds],
    }
    return payload, EXIT_OK


def _cmd_pairwise(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    pair = _node_indices(g, args.pair)
    if len(pair) != 2 or pair[0] == pair[1]:
        raise _UsageError("--pair needs exactly two distinct node labels")
    a, b = pair
    sa, sb = pairwise_contest(dm, a, b)
    winner = None if sa == sb else _label(g, a if sa > sb else b)
    payload = {
        "a": _label(g, a),
        "b": _label(g, b),
        "share_a": _frac(sa),
        "share_b": _frac(sb),
        "winner": winner,
    }
    return payload, EXIT_OK


def _cmd_check_zone(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    zone = _node_indices(g, args.set)
    res = is_exclusion_zone(dm, zone, cap=args.budget_c)
    payload = _zone_check_payload(g, dm, zone, res)
    return payload, EXIT_OK if res.is_zone else EXIT_VERDICT


def _cmd_min_zone(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    report = minimal_exclusion_zone(dm, cap=args.budget_c, node_budget=args.node_budget)
    payload = {
        "zone": _labels(g, report.zone),
        "kind": report.kind,
        "seed_winners": _labels(g, report.seed_winners),
        "condorcet_winners": _labels(g, report.condorcet_winners),
        "condorcet_losers": _labels(g, report.condorcet_losers),
        "candidates_checked": report.candidates_checked,
    }
    return payload, EXIT_OK


def _cmd_all_zones(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    zones = all_exclusion_zones(dm, max_n=args.max_n, cap=args.budget_c)
    ordered = sorted(zones, key=lambda z: (len(z), sorted(z)))
    payload = {"count": len(ordered), "zones": [_labels(g, z) for z in ordered]}
    return payload, EXIT_OK


def _cmd_approx_zone(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    report = approx_minimal_zone(
        dm,
        epsilon=args.epsilon,
        delta=args.delta,
        seed=args.seed,
        node_budget=args.node_budget,
    )
    payload = {
        "zone": _labels(g, report.zone),
        "epsilon": report.epsilon,
        "delta": report.delta,
        "iterations_run": report.iterations_run,
        "quiet_streak_target": report.quiet_streak_target,
        "certified_trivial": report.certified_trivial,
        "seed": report.rng_seed,
    }
    return payload, EXIT_OK


def _cmd_check_approx(args):
    g = _load(args)
    dm = all_pairs_distances(g)
    zone = _node_indices(g, args.set)
    report = check_approx_zone(
        dm, zone, epsilon=args.epsilon, delta=args.delta, seed=args.seed
    )
    counterexample = None
    if report.counterexample is not None:
        counterexample = {
            "candidates": [_label(g, c) for c in report.counterexample],
            "escaped_winner": _label(g, report.escaped_winner),
        }
    payload = {
        "passed": report.passed,
        "set": _labels(g, zone),
        "samples_run": report.samples_run,
        "epsilon": report.epsilon,
        "delta": report.delta,
        "seed": report.rng_seed,
        "counterexample": counterexample,
    }
    return payload, EXIT_OK if report.passed else EXIT_VERDICT


def _cmd_family(args):
    g = build_family(args.kind, args.param)
    dm = all_pairs_distances(g)
    zone = family_zone(args.kind, args.param)
    payload = {
        "kind": args.kind,
        "param": args.param,
        "n": g.n,
        "graph6": to_graph6(g),
        "zone": _labels(g, zone),
        "trivial": len(zone) == g.n,
        "all_pairwise_ties": is_all_pairwise_ties(dm),
    }
    code = EXIT_OK
    if args.check:
        report = minimal_exclusion_zone(
            dm, cap=args.budget_c, node_budget=args.node_budget
        )
        agrees = report.zone == zone
        payload["check"] = {"exact_zone": _labels(g, report.zone), "agrees": agrees}
        code = EXIT_OK if agrees else EXIT_VERDICT
    return payload, code


def _cmd_census(args):
    sizes = _parse_range(args.n)
    if args.source is None and not args.extended:
        limit = _CENSUS_DESK[args.kind]
        over = [k for k in sizes if k > limit]
        if over:
            raise _UsageError(
                f"{args.kind} census for n={over[0]} takes hours; pass --extended"
            )
    rows = []
    for k in sizes:
        row = zone_census(
            args.kind,
            k,
            cap=args.budget_c,
            node_budget=args.node_budget,
            workers=args.threads,
            source=args.source,
        )
        rows.append(
            {
                "n": row.n,
                "universe": row.universe_count,
                "nontrivial": row.nontrivial_count,
                "two_node": row.two_node_count,
            }
        )
    return {"kind": args.kind, "rows": rows}, EXIT_OK


def _cmd_gadget(args):
    items, sets = parse_rx3c(_read_text(args.instance))
    n = validate_rx3c(items, sets)
    cover = has_exact_cover(items, sets)
    payload = {
        "n": n,
        "items": len(items),
        "sets": len(sets),
        "has_exact_cover": cover,
    }
    if args.cover_only:
        return payload, EXIT_OK
    g, (s1, s2) = rx3c_gadget(items, sets)
    payload.update(
        {
            "nodes": g.n,
            "s1": g.labels[s1],
            "s2": g.labels[s2],
            "graph6": to_graph6(g),
        }
    )
    code = EXIT_OK
    if args.check:
        dm = all_pairs_distances(g)
        res = is_exclusion_zone(dm, {s1, s2}, cap=args.budget_c)
        payload["zone_check"] = _zone_check_payload(g, dm, {s1, s2}, res)
        # an exact cover must break the zone and a cover-free instance must keep it
        consistent = cover == (not res.is_zone)
        payload["consistent"] = consistent
        code = EXIT_OK if consistent else EXIT_VERDICT
    return payload, code


def _cmd_geo_verify_chain(args):
    name = args.chain
    if os.sep in name or os.path.exists(name):
        chain = parse_chain(_read_text(name))
        if args.width is not None:
            raise _UsageError("--width applies to builtin chain names only")
    else:
        chain = builtin_chain(name, width=args.width)
    scene = chain.scene
    report = verify_chain(
        scene, chain, samples=args.samples, seed=args.seed,
        margin_sigmas=args.margin_sigmas,
    )
    region = scene.region
    payload = {
        "passed": report.passed,
        "samples": report.samples,
        "seed": report.seed,
        "margin_sigmas": report.margin_sigmas,
        "region": {"type": "rectangle", "w": region.w, "h": region.h},
        "metric_p": scene.metric_p,
        "steps": [
            {
                "index": s.index,
                "tag": s.tag,
                "passed": s.passed,
                "winner_reachable": s.winner_reachable,
                "elimination_confirmed": s.elimination_confirmed,
                "elimination_gap_sigmas": s.elimination_gap_sigmas,
                "note": s.note,
                "candidates": [list(p) for p in s.shares.candidates],
                "shares": list(s.shares.shares),
                "stderrs": list(s.shares.stderrs),
            }
            for s in report.steps
        ],
    }
    return payload, EXIT_OK if report.passed else EXIT_VERDICT


def _cmd_geo_verify_flag(args):
    report = verify_flag_zone(
        args.configs,
        args.samples,
        args.seed,
        margin_sigmas=args.margin_sigmas,
        area_samples=args.area_samples,
    )
    payload = {
        "passed": report.passed,
        "configs": report.configs,
        "samples": report.samples,
        "seed": report.seed,
        "margin_sigmas": report.margin_sigmas,
        "conclusive": report.conclusive,
        "inconclusive": report.inconclusive,
        "escapes": [
            {
                "config": [list(p) for p in e.config],
                "winner": None if e.winner is None else list(e.winner),
                "inconclusive_round": e.inconclusive_round,
            }
            for e in report.escapes
        ],
        "flag_area": report.flag_area_estimate,
        "flag_area_sigma": report.flag_area_sigma,
        "top_area": report.top_area_estimate,
        "top_area_sigma": report.top_area_sigma,
        "areas_ok": report.areas_ok,
    }
    return payload, EXIT_OK if report.passed else EXIT_VERDICT


def _cmd_geo_verify_condorcet(args):
    report = verify_condorcet_hyperrect(
        _floats_csv(args.dims),
        args.p,
        args.opponents,
        args.samples,
        args.seed,
        margin_sigmas=args.margin_sigmas,
    )

    def checks(group):
        return [
            {
                "anchor": list(c.anchor),
                "opponent": list(c.opponent),
                "share": c.anchor_share,
                "stderr": c.stderr,
                "ok": c.ok,
            }
            for c in group
        ]

    payload = {
        "passed": report.passed,
        "dims": list(report.dims),
        "metric_p": report.metric_p,
        "opponents": report.opponents,
        "samples": report.samples,
        "seed": report.seed,
        "margin_sigmas": report.margin_sigmas,
        "center_checks": checks(report.center_checks),
        "corner_checks": checks(report.corner_checks),
    }
    return payload, EXIT_OK if report.passed else EXIT_VERDICT


def _cmd_geo_verify_projection(args):
    axes = _ints_csv(args.plane_axes)
    if len(axes) != 2:
        raise _UsageError("--plane-axes needs exactly two axis indices")
    report = verify_projection(
        _floats_csv(args.dims),
        args.p,
        axes,
        _points_arg(args.candidates),
        args.samples,
        args.seed,
        margin_sigmas=args.margin_sigmas,
    )
    payload = {
        "passed": report.passed,
        "dims": list(report.dims),
        "metric_p": report.metric_p,
        "plane_axes": list(report.plane_axes),
        "max_sigma_gap": report.max_sigma_gap,
        "full_shares": _shares_payload(report.full_shares),
        "plane_shares": _shares_payload(report.plane_shares),
    }
    return payload, EXIT_OK if report.passed else EXIT_VERDICT


_GEO_COMMANDS = {
    "verify-chain": _cmd_geo_verify_chain,
    "verify-flag": _cmd_geo_verify_flag,
    "verify-condorcet": _cmd_geo_verify_condorcet,
    "verify-projection": _cmd_geo_verify_projection,
}

_COMMANDS = {
    "irv": _cmd_irv,
    "pairwise": _cmd_pairwise,
    "check-zone": _cmd_check_zone,
    "min-zone": _cmd_min_zone,
    "all-zones": _cmd_all_zones,
    "approx-zone": _cmd_approx_zone,
    "check-approx": _cmd_check_approx,
    "family": _cmd_family,
    "census": _cmd_census,
    "gadget": _cmd_gadget,
}


# ---------------------------------------------------------------------------
# parser construction


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv", "text"), default=None,
        help="output format (default: csv for census, json otherwise)",
    )
    common.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"RNG seed, fixed default {DEFAULT_SEED} for reproducibility",
    )
    common.add_argument(
        "--threads", type=int, default=1,
        help="worker processes for the census; results are identical at any count",
    )

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument(
        "--graph", required=True, metavar="FILE",
        help="input graph, graph6 (.g6) or edge list (.edges), by extension",
    )
    graph_in.add_argument(
        "--largest-component", action="store_true",
        help="keep only the largest component of a disconnected edge list",
    )

    budgets = argparse.ArgumentParser(add_help=False)
    budgets.add_argument(
        "--budget-c", type=int, default=25, metavar="C",
        help="max free complement nodes per zone member (default 25)",
    )
    budgets.add_argument(
        "--node-budget", type=int, default=200_000,
        help="node budget for tiebreak-branch searches (default 200000)",
    )

    approx_opts = argparse.ArgumentParser(add_help=False)
    approx_opts.add_argument("--epsilon", type=float, default=0.1,
                             help="escape-probability bound (default 0.1)")
    approx_opts.add_argument("--delta", type=float, default=0.1,
                             help="failure-probability bound (default 0.1)")

    mc_opts = argparse.ArgumentParser(add_help=False)
    mc_opts.add_argument("--margin-sigmas", type=float, default=3.0,
                         help="statistical decision margin (default 3.0)")

    parser = _Parser(
        prog="irvzones",
        description="Elimination-election exclusion zones on graphs and metric regions.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("irv", parents=[common, graph_in],
                       help="run one election on a graph")
    p.add_argument("--candidates", required=True,
                   help="comma-separated node labels")
    p.add_argument("--tiebreak", default=None,
                   help="lowest | seeded | order:a,b,... | target:a (default lowest)")

    p = sub.add_parser("pairwise", parents=[common, graph_in],
                       help="head-to-head contest between two nodes")
    p.add_argument("--pair", required=True, help="two node labels, e.g. 3,4")

    p = sub.add_parser("check-zone", parents=[common, graph_in, budgets],
                       help="exact exclusion-zone check for a node set")
    p.add_argument("--set", required=True, help="comma-separated node labels")

    sub.add_parser("min-zone", parents=[common, graph_in, budgets],
                   help="minimal exclusion zone of a graph")

    p = sub.add_parser("all-zones", parents=[common, graph_in, budgets],
                       help="every exclusion zone of a small graph")
    p.add_argument("--max-n", type=int, default=7,
                   help="refuse graphs larger than this (default 7)")

    sub.add_parser("approx-zone", parents=[common, graph_in, budgets, approx_opts],
                   help="randomized inner approximation of the minimal zone")

    p = sub.add_parser("check-approx", parents=[common, graph_in, approx_opts],
                       help="randomized spot-check that a set holds its winners")
    p.add_argument("--set", required=True, help="comma-separated node labels")

    p = sub.add_parser("family", parents=[common, budgets],
                       help="closed-form zone of a named graph family")
    p.add_argument("--kind", required=True, choices=FAMILY_KINDS)
    p.add_argument("--param", required=True, type=int,
                   help="n, leaves per hub, or height, per the kind")
    p.add_argument("--check", action="store_true",
                   help="also run the exact search and compare")

    p = sub.add_parser("census", parents=[common, budgets],
                       help="count zones across all graphs or trees of size n")
    p.add_argument("--kind", required=True, choices=("graphs", "trees"))
    p.add_argument("--n", required=True, help="size or inclusive range, e.g. 8 or 3..7")
    p.add_argument("--extended", action="store_true",
                   help="allow sizes beyond the desk-scale limits (hours)")
    p.add_argument("--source", metavar="FILE", default=None,
                   help="read graphs from a graph6 file instead of enumerating")

    p = sub.add_parser("gadget", parents=[common, budgets],
                       help="hardness gadget for a restricted exact-cover instance")
    p.add_argument("--instance", required=True, metavar="FILE",
                   help="instance file ('-' for stdin): first line n, then 3n lines "
                        "of three item labels")
    p.add_argument("--cover-only", action="store_true",
                   help="only decide exact coverability; skip the gadget")
    p.add_argument("--check", action="store_true",
                   help="check {s1,s2} and compare with the cover verdict")

    geo = sub.add_parser("geo", parents=[],
                         help="Monte-Carlo checks in continuous preference regions")
    geosub = geo.add_subparsers(dest="geo_command", required=True, metavar="CHECK")

    p = geosub.add_parser("verify-chain", parents=[common, mc_opts],
                          help="verify a winner chain step by step")
    p.add_argument("--chain", required=True,
                   help="builtin name (square_l2, rect_l1(W), rect_l2(W)) or a file")
    p.add_argument("--width", type=float, default=None,
                   help="rectangle width when not given in the name")
    p.add_argument("--samples", type=int, default=1_000_000,
                   help="voter samples per configuration (default 1000000)")

    p = geosub.add_parser("verify-flag", parents=[common, mc_opts],
                          help="random-configuration escape check for the flag shape")
    p.add_argument("--configs", type=int, default=10_000,
                   help="random configurations to test (default 10000)")
    p.add_argument("--samples", type=int, default=20_000,
                   help="voter samples per elimination round (default 20000)")
    p.add_argument("--area-samples", type=int, default=1_000_000,
                   help="samples for the area estimates (default 1000000)")

    p = geosub.add_parser("verify-condorcet", parents=[common, mc_opts],
                          help="box center beats all, origin corner beats none")
    p.add_argument("--dims", required=True, help="box side lengths, e.g. 2,1,1")
    p.add_argument("--p", type=int, default=2, choices=(1, 2), help="metric exponent")
    p.add_argument("--opponents", type=int, default=16,
                   help="random opponents per anchor (default 16)")
    p.add_argument("--samples", type=int, default=200_000,
                   help="voter samples per contest (default 200000)")

    p = geosub.add_parser("verify-projection", parents=[common, mc_opts],
                          help="mid-plane shares match their 2-D projection")
    p.add_argument("--dims", required=True, help="box side lengths, e.g. 2,1,1")
    p.add_argument("--p", type=int, default=2, choices=(1, 2), help="metric exponent")
    p.add_argument("--plane-axes", required=True, help="two axis indices, e.g. 0,1")
    p.add_argument("--candidates", required=True,
                   help="semicolon-separated points, e.g. 0.2,0.5,0.5;1,0.5,0.5")
    p.add_argument("--samples", type=int, default=200_000,
                   help="voter samples per estimate (default 200000)")

    return parser


def _check_budgets(args) -> None:
    positive = ("threads", "budget_c", "node_budget", "samples", "configs",
                "area_samples", "opponents", "max_n")
    for name in positive:
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise _UsageError(f"--{name.replace('_', '-')} must be positive")
    for name in ("epsilon", "delta"):
        value = getattr(args, name, None)
        if value is not None and not 0.0 < value < 1.0:
            raise _UsageError(f"--{name} must be strictly between 0 and 1")
    value = getattr(args, "margin_sigmas", None)
    if value is not None and value <= 0.0:
        raise _UsageError("--margin-sigmas must be positive")


# ---------------------------------------------------------------------------
# rendering


def _render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _render_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    rows = payload.get("rows")
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        keys = list(rows[0].keys())
        writer.writerow(keys)
        for row in rows:
            writer.writerow([row[k] for k in keys])
        return buf.getvalue()
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        writer.writerow([key, value])
    return buf.getvalue()


def _render_text(payload: dict) -> str:
    lines = []
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


_RENDERERS = {"json": _render_json, "csv": _render_csv, "text": _render_text}


def _scan_format(argv: list[str]) -> str:
    """Best-effort format detection for errors raised before parsing finishes."""
    for i, tok in enumerate(argv):
        if tok.startswith("--format="):
            cand = tok.split("=", 1)[1]
        elif tok == "--format" and i + 1 < len(argv):
            cand = argv[i + 1]
        else:
            continue
        if cand in _RENDERERS:
            return cand
    return "csv" if argv[:1] == ["census"] else "json"


def _emit_error(fmt: str, exc_type: str, message: str, code: int) -> None:
    if fmt == "json":
        blob = {"error": {"type": exc_type, "message": message, "exit_code": code}}
        sys.stderr.write(json.dumps(blob) + "\n")
    else:
        sys.stderr.write(f"error ({exc_type}): {message}\n")


# ---------------------------------------------------------------------------
# entry points


def run_cli(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    fmt = _scan_format(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _emit_error(fmt, "UsageError", str(exc), EXIT_USAGE)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if args.format is not None:
        fmt = args.format
    elif args.command == "census":
        fmt = "csv"
    else:
        fmt = "json"

    if args.command == "geo":
        handler = _GEO_COMMANDS[args.geo_command]
    else:
        handler = _COMMANDS[args.command]

    try:
        _check_budgets(args)
        payload, code = handler(args)
    except _UsageError as exc:
        _emit_error(fmt, "UsageError", str(exc), EXIT_USAGE)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        _emit_error(fmt, "BudgetExceededError", str(exc), EXIT_BUDGET)
        return EXIT_BUDGET
    except (GraphFormatError, DisconnectedGraphError, MalformedInstanceError) as exc:
        _emit_error(fmt, type(exc).__name__, str(exc), EXIT_USAGE)
        return EXIT_USAGE
    except ValueError as exc:
        _emit_error(fmt, "ValueError", str(exc), EXIT_USAGE)
        return EXIT_USAGE
    except KeyError as exc:
        _emit_error(fmt, "KeyError", str(exc.args[0] if exc.args else exc), EXIT_USAGE)
        return EXIT_USAGE

    sys.stdout.write(_RENDERERS[fmt](payload))
    return code


def main() -> None:
    raise SystemExit(run_cli())
