"""Closed-form family zones against the generic search."""

import pytest

from irvzones.families import (
    FAMILY_KINDS,
    build_family,
    family_zone,
    is_all_pairwise_ties,
)
from irvzones.graphs import all_pairs_distances
from irvzones.zones import minimal_exclusion_zone


def test_build_shapes():
    assert build_family("path", 5).edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]
    c5 = build_family("cycle", 5)
    assert c5.m == 5 and all(c5.degree(v) == 2 for v in range(5))
    k4 = build_family("complete", 4)
    assert k4.m == 6
    b2 = build_family("bistar", 2)
    assert b2.n == 6 and b2.degree(0) == b2.degree(1) == 3
    t2 = build_family("perfect_binary_tree", 2)
    assert t2.n == 7 and t2.degree(0) == 2 and t2.degree(6) == 1


def test_param_validation():
    with pytest.raises(ValueError):
        build_family("cycle", 2)
    with pytest.raises(ValueError):
        build_family("bistar", 0)
    with pytest.raises(ValueError):
        build_family("nonesuch", 3)
    with pytest.raises(ValueError):
        family_zone("nonesuch", 3)


def test_path_zone_formula_frozen():
    # interval [ceil(n/6 + 1/2), n - ceil(n/6 + 1/2) + 1] as 0-based indices
    expected = {
        1: [0],
        2: [0, 1],
        3: [0, 1, 2],
        4: [1, 2],
        5: [1, 2, 3],
        6: [1, 2, 3, 4],
        7: [1, 2, 3, 4, 5],
        8: [1, 2, 3, 4, 5, 6],
        9: [1, 2, 3, 4, 5, 6, 7],
        10: [2, 3, 4, 5, 6, 7],
        12: [2, 3, 4, 5, 6, 7, 8, 9],
    }
    for n, zone in expected.items():
        assert sorted(family_zone("path", n)) == zone


def test_family_zone_matches_search():
    cases = [("path", n) for n in range(3, 13)]
    cases += [("bistar", k) for k in (1, 2, 3, 4)]
    cases += [("perfect_binary_tree", h) for h in (0, 1, 2)]
    for kind, param in cases:
        g = build_family(kind, param)
        dm = all_pairs_distances(g)
        assert family_zone(kind, param) == minimal_exclusion_zone(dm).zone, (kind, param)


def test_vertex_transitive_families_are_all_ties():
    for kind in ("cycle", "complete"):
        for n in range(3, 8):
            dm = all_pairs_distances(build_family(kind, n))
            assert is_all_pairwise_ties(dm)
            assert family_zone(kind, n) == frozenset(range(n))


def test_all_ties_fails_off_family(path6_dm):
    assert not is_all_pairwise_ties(path6_dm)


def test_bistar_zone_is_the_hub_pair():
    for k in (1, 2, 3, 4):
        assert family_zone("bistar", k) == frozenset({0, 1})


def test_binary_tree_zone_by_height_parity():
    assert family_zone("perfect_binary_tree", 0) == frozenset({0})
    assert family_zone("perfect_binary_tree", 1) == frozenset({0, 1, 2})
    assert family_zone("perfect_binary_tree", 2) == frozenset({0, 1, 2})
    assert family_zone("perfect_binary_tree", 3) == frozenset(range(15))
    assert family_zone("perfect_binary_tree", 4) == frozenset(range(15))


def test_family_kinds_exhaustive():
    assert set(FAMILY_KINDS) == {
        "path", "cycle", "complete", "bistar", "perfect_binary_tree",
    }
