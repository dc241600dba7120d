import random
from itertools import combinations
from math import comb

import pytest

from tricount.empty_triangles import enumerate_empty
from tricount.errors import InvalidInput
from tricount.geom import Location, orient, point_in_triangle

from conftest import CONVEX5, TRI_PLUS_CENTER, convex_points, random_points


def brute_empty(S):
    out = set()
    for a, b, c in combinations(S, 3):
        if orient(a, b, c) == 0:
            continue
        if all(point_in_triangle(p, (a, b, c)) is Location.OUTSIDE for p in S if p not in (a, b, c)):
            out.add(frozenset((a, b, c)))
    return out


def test_examples():
    assert len(enumerate_empty([(0, 0), (2, 0), (0, 2)])) == 1
    assert len(enumerate_empty(TRI_PLUS_CENTER)) == 3
    u = enumerate_empty(CONVEX5)
    assert len(u) == 10 == len(brute_empty(CONVEX5))


def test_boundary_point_disqualifies():
    # (1, 0) sits on the edge of the big triangle
    u = enumerate_empty([(0, 0), (2, 0), (0, 2), (1, 0)])
    assert frozenset({(0, 0), (2, 0), (0, 2)}) not in u.as_point_sets()
    assert len(u) == 2


def test_invalid_inputs():
    with pytest.raises(InvalidInput):
        enumerate_empty([(0, 0), (1, 1)])
    with pytest.raises(InvalidInput):
        enumerate_empty([(0, 0), (1, 1), (0, 0)])


@pytest.mark.parametrize("n", [5, 7, 9])
def test_convex_position_all_triples(n):
    assert len(enumerate_empty(convex_points(n))) == comb(n, 3)


@pytest.mark.parametrize("seed", range(5))
def test_matches_brute_force_and_is_order_independent(seed):
    S = random_points(9, seed)
    u = enumerate_empty(S)
    assert u.as_point_sets() == brute_empty(S)
    for t in u:
        assert t.i < t.j < t.k
        tri = u.coords(t)
        assert all(point_in_triangle(p, tri) is Location.OUTSIDE for p in S if p not in tri)
    shuffled = list(S)
    random.Random(seed).shuffle(shuffled)
    assert enumerate_empty(shuffled).as_point_sets() == u.as_point_sets()
    assert len(u) <= comb(len(S), 3)
