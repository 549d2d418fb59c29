"""Monte-Carlo share estimation over continuous regions.

Closed-form expectations used below (unit square, candidate offsets x):
  - center cross: center at (1/2, 1/2), four others at distance x from the
    edges; center share is ((1 - 2x)/2)^2 = x^2 - x + 1/4, the rest split
    evenly.  Holds for any L_p.  The center stops being the minimum at
    x = 1/2 - 1/sqrt(5).
  - side midpoint (L2): b = (1/2, x) vs (0, 1/2) and (1, 1/2) gives
    v(b) = (1 - 2x^2)^2 / (4 - 8x).
  - edge triple (any L_p): (0, 1/2) vs (0, x) and (0, 1 - x) gives 1/2 - x.
  - corner squeeze (L2): t = (0, 1 - x) vs (0, 0) and (1, 1) gives
    v(t) = 1/4 + 3x/8 - x^3/8 and v((0,0)) = 3/8 - x/4 - x^2/8.
All MC runs are seeded, so these tests are deterministic.
"""

import math

import numpy as np
import pytest

from irvzones.geometry import (
    FlagF,
    Hyperrectangle,
    Rectangle,
    Scene,
    mc_irv_outcome,
    mc_vote_shares,
    verify_condorcet_hyperrect,
    verify_flag_zone,
    verify_projection,
)

SQUARE = Scene(Rectangle(1.0, 1.0), 2)


def diff_sigma(pa, pb, n):
    return math.sqrt((pa + pb - (pa - pb) ** 2) / n)


def test_rectangle_region():
    r = Rectangle(2.0, 0.5)
    assert r.area == 1.0
    assert r.center() == (1.0, 0.25)
    assert set(r.corners()) == {(0, 0), (2, 0), (0, 0.5), (2, 0.5)}
    pts = np.array([(0.0, 0.0), (2.0, 0.5), (2.1, 0.2), (1.0, -0.1)])
    assert r.contains(pts).tolist() == [True, True, False, False]
    sample = r.sample(np.random.default_rng(0), 500)
    assert r.contains(sample).all()
    with pytest.raises(ValueError):
        Rectangle(0.0, 1.0)


def test_hyperrectangle_region():
    h = Hyperrectangle((1, 2, 3))
    assert h.dims == (1.0, 2.0, 3.0)
    assert h.dim == 3 and h.area == 6.0
    assert len(h.corners()) == 8
    assert h.contains(np.array([h.center()])).all()
    with pytest.raises(ValueError):
        Hyperrectangle(())
    with pytest.raises(ValueError):
        Hyperrectangle((1.0, -2.0))


def test_flag_region():
    f = FlagF()
    assert f.area == 3.3
    assert f.top_triangle_area == 2.0
    pts = np.array(
        [
            (4.0, 0.05),  # strip
            (0.5, 1.0),  # top triangle
            (7.8, -0.5),  # bottom triangle
            (5.0, 1.0),  # above the strip, past the top hypotenuse
            (7.5, -0.8),  # below the bottom hypotenuse
            (8.5, 0.05),  # past the strip
        ]
    )
    assert f.contains(pts).tolist() == [True, True, True, False, False, False]
    assert f.in_top_triangle(pts).tolist() == [False, True, False, False, False, False]
    sample = f.sample(np.random.default_rng(1), 400)
    assert len(sample) == 400 and f.contains(sample).all()
    with pytest.raises(ValueError):
        f.center()


def test_scene_validates_metric():
    with pytest.raises(ValueError):
        Scene(Rectangle(1.0), 3)


def test_share_weights_account_exactly():
    est = mc_vote_shares(SQUARE, [(0.2, 0.2), (0.8, 0.8), (0.5, 0.9)], 12_345)
    assert est.weight_scale == math.lcm(1, 2, 3)
    assert sum(est.weight_counts) == 12_345 * est.weight_scale
    assert math.isclose(sum(est.shares), 1.0, abs_tol=1e-12)


def test_shares_deterministic_across_batches():
    cands = [(0.3, 0.4), (0.7, 0.6)]
    a = mc_vote_shares(SQUARE, cands, 70_000, seed=5)
    b = mc_vote_shares(SQUARE, cands, 70_000, seed=5)
    assert a == b
    assert a.weight_counts != mc_vote_shares(SQUARE, cands, 70_000, seed=6).weight_counts


def test_single_candidate_takes_all():
    est = mc_vote_shares(SQUARE, [(0.4, 0.4)], 100)
    assert est.shares == (1.0,) and est.weight_counts == (100,)


def test_l1_tie_plateau_splits_evenly():
    # (0.25, 0.25) vs (0.75, 0.75) under L1 tie on the two off-diagonal
    # corner squares, 12.5% of the area; splitting keeps both at 1/2.
    scene = Scene(Rectangle(1.0, 1.0), 1)
    est = mc_vote_shares(scene, [(0.25, 0.25), (0.75, 0.75)], 100_000)
    assert sum(est.weight_counts) == 100_000 * 2
    assert abs(est.shares[0] - 0.5) <= 5 * est.stderrs[0]


def test_four_corner_symmetry():
    corners = SQUARE.region.corners()
    est = mc_vote_shares(SQUARE, corners, 80_000)
    assert est.weight_scale == math.lcm(1, 2, 3, 4)
    for share, err in zip(est.shares, est.stderrs):
        assert abs(share - 0.25) <= 5 * err


def test_candidate_validation():
    with pytest.raises(ValueError, match="distinct"):
        mc_vote_shares(SQUARE, [(0.5, 0.5), (0.5, 0.5)], 10)
    with pytest.raises(ValueError, match="outside"):
        mc_vote_shares(SQUARE, [(1.5, 0.5)], 10)
    with pytest.raises(ValueError, match="dimensional"):
        mc_vote_shares(SQUARE, [(0.5, 0.5, 0.5)], 10)
    with pytest.raises(ValueError, match="samples"):
        mc_vote_shares(SQUARE, [(0.5, 0.5)], 0)


@pytest.mark.parametrize("p", [1, 2])
def test_center_cross_share_formula(p):
    x = 0.1
    config = [(0.5, 0.5), (x, 0.5), (0.5, x), (1 - x, 0.5), (0.5, 1 - x)]
    est = mc_vote_shares(Scene(Rectangle(1.0, 1.0), p), config, 120_000)
    center = x * x - x + 0.25
    expected = [center] + [(1 - center) / 4] * 4
    for share, err, want in zip(est.shares, est.stderrs, expected):
        assert abs(share - want) <= 5 * err


def test_side_midpoint_share_formula():
    x = 0.1
    est = mc_vote_shares(SQUARE, [(0.5, x), (0.0, 0.5), (1.0, 0.5)], 120_000)
    want = (1 - 2 * x * x) ** 2 / (4 - 8 * x)
    assert abs(est.shares[0] - want) <= 5 * est.stderrs[0]
    assert abs(est.shares[1] - (1 - want) / 2) <= 5 * est.stderrs[1]


def test_edge_triple_share_formula():
    x = 0.18
    est = mc_vote_shares(SQUARE, [(0.0, 0.5), (0.0, x), (0.0, 1 - x)], 120_000)
    assert abs(est.shares[0] - (0.5 - x)) <= 5 * est.stderrs[0]


def test_corner_squeeze_share_formula():
    x = 0.18
    est = mc_vote_shares(SQUARE, [(0.0, 1 - x), (0.0, 0.0), (1.0, 1.0)], 120_000)
    v_t = 0.25 + 3 * x / 8 - x**3 / 8
    v_corner = 0.375 - x / 4 - x * x / 8
    assert abs(est.shares[0] - v_t) <= 5 * est.stderrs[0]
    assert abs(est.shares[1] - v_corner) <= 5 * est.stderrs[1]


def test_center_elimination_boundary_bracket():
    # the center's share crosses the even split at x = 1/2 - 1/sqrt(5);
    # 0.005 on either side separates cleanly at this sample count
    boundary = 0.5 - 1 / math.sqrt(5)
    n = 400_000

    def run(x):
        config = [(0.5, 0.5), (x, 0.5), (0.5, x), (1 - x, 0.5), (0.5, 1 - x)]
        est = mc_vote_shares(SQUARE, config, n)
        return est.shares[0], min(est.shares[1:])

    center, arm = run(boundary - 0.005)
    assert center - arm > 3 * diff_sigma(center, arm, n)
    center, arm = run(boundary + 0.005)
    assert arm - center > 3 * diff_sigma(center, arm, n)


def test_irv_outcome_center_out_then_symmetric_tie():
    x = 0.1
    config = [(0.5, 0.5), (x, 0.5), (0.5, x), (1 - x, 0.5), (0.5, 1 - x)]
    out = mc_irv_outcome(SQUARE, config, 50_000)
    assert out.eliminated == ((0.5, 0.5),)
    assert out.winner is None and not out.conclusive
    assert out.inconclusive_round == 2
    assert len(out.rounds) == 2


def test_irv_outcome_conclusive_two_way():
    out = mc_irv_outcome(SQUARE, [(0.2, 0.5), (0.9, 0.5)], 20_000)
    assert out.winner == (0.2, 0.5)
    assert out.eliminated == ((0.9, 0.5),)
    assert len(out.rounds) == 1


def test_irv_outcome_reports_outright_tie():
    out = mc_irv_outcome(SQUARE, [(0.25, 0.5), (0.75, 0.5)], 20_000)
    assert out.winner is None and out.inconclusive_round == 1


def test_hyperrect_condorcet_center_and_corner():
    report = verify_condorcet_hyperrect((1.0, 1.0, 1.0), 2, opponents=4, samples=20_000)
    assert report.passed
    assert len(report.center_checks) == len(report.corner_checks) == 4
    assert all(c.anchor == (0.5, 0.5, 0.5) for c in report.center_checks)
    assert all(c.anchor == (0.0, 0.0, 0.0) for c in report.corner_checks)


def test_projection_matches_plane():
    cands = [(0.2, 0.3, 0.5), (0.7, 0.8, 0.5), (0.5, 0.5, 0.5)]
    report = verify_projection((1.0, 1.0, 1.0), 1, (0, 1), cands, 30_000)
    assert report.passed and report.max_sigma_gap <= 3.0
    assert report.plane_shares.candidates == ((0.2, 0.3), (0.7, 0.8), (0.5, 0.5))


def test_projection_validation():
    with pytest.raises(ValueError, match="mid-plane"):
        verify_projection((1.0, 1.0, 1.0), 1, (0, 1), [(0.2, 0.3, 0.4)], 10)
    with pytest.raises(ValueError, match="axis"):
        verify_projection((1.0, 1.0), 1, (0, 0), [(0.2, 0.3)], 10)
    with pytest.raises(ValueError, match="dimension"):
        verify_projection((1.0, 1.0, 1.0), 1, (0, 1), [(0.2, 0.3)], 10)


def test_flag_zone_smoke():
    report = verify_flag_zone(8, 4_000, area_samples=200_000)
    assert report.passed and report.areas_ok
    assert report.escapes == ()
    assert report.conclusive + report.inconclusive == 8
    assert abs(report.flag_area_estimate - 3.3) <= 3 * report.flag_area_sigma
    assert abs(report.top_area_estimate - 2.0) <= 3 * report.top_area_sigma


def test_flag_zone_validates_configs():
    with pytest.raises(ValueError):
        verify_flag_zone(0, 100)
