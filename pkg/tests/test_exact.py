from itertools import combinations

import pytest

from tricount.errors import CapacityExceeded, InvalidInput, NoTriangulation
from tricount.exact import (
    EdgeSpace,
    Triangulation,
    catalan,
    count_maximal_in_cell,
    count_triangulations,
    enumerate_triangulations,
    flips,
    hull_boundary_size,
    initial_triangulation,
    is_maximal_in_cell,
)
from tricount.geom import Cell, Crossing, segment_in_cell, segments_cross
from tricount.oracle import brute_force_oracle

from conftest import CONVEX5, GRID3, TRI_PLUS_CENTER, convex_points, random_points

SQUARE = [(0, 0), (2, 0), (2, 2), (0, 2)]


def catalan_by_formula(m):
    # closed form, independent of the recurrence in the package
    from math import comb
    return comb(2 * m, m) // (m + 1)


def test_catalan():
    assert catalan(0) == 1
    assert catalan(2) == 2
    assert catalan(4) == 14
    assert [catalan(m) for m in range(15)] == [catalan_by_formula(m) for m in range(15)]
    with pytest.raises(InvalidInput):
        catalan(-1)


def test_initial_triangulation():
    assert initial_triangulation([(0, 0), (1, 0), (0, 1)]).edges == {(0, 1), (0, 2), (1, 2)}
    sq = initial_triangulation(SQUARE)
    assert len(sq) == 5
    assert sq == initial_triangulation(SQUARE)
    assert len(initial_triangulation(CONVEX5)) == 7
    with pytest.raises(NoTriangulation):
        initial_triangulation([(0, 0), (1, 1), (2, 2)])


def test_flips_examples():
    ac = Triangulation(frozenset({(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)}))
    (bd,) = flips(ac, SQUARE)
    assert bd.edges == {(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)}
    assert flips(initial_triangulation([(0, 0), (1, 0), (0, 1)]), [(0, 0), (1, 0), (0, 1)]) == []
    fan = Triangulation(frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2), (0, 3)}))
    assert len(flips(fan, CONVEX5)) == 2


def test_flip_neighbors_match_brute_force():
    # oracle: every other triangulation differing in exactly one edge
    S = random_points(8, 3)
    space = EdgeSpace(tuple(S))
    all_t = [t.edges for t in enumerate_triangulations(S)]
    for t in all_t[:30]:
        expected = {u for u in all_t if len(t - u) == 1}
        got = {f.edges for f in flips(Triangulation(t), S)}
        assert got == expected
    assert space.edges


@pytest.mark.parametrize("n", range(4, 11))
def test_convex_catalan(n):
    assert count_triangulations(convex_points(n)) == catalan(n - 2)


def test_small_examples():
    assert count_triangulations(TRI_PLUS_CENTER) == 1
    assert count_triangulations(convex_points(6)) == 14
    assert count_triangulations(GRID3) == brute_force_oracle(GRID3)
    five = SQUARE + [(1, 1)]
    assert count_triangulations(five) == brute_force_oracle(five)


def test_oracle_examples():
    assert brute_force_oracle(CONVEX5) == 5
    assert brute_force_oracle(TRI_PLUS_CENTER) == 1
    with pytest.raises(CapacityExceeded):
        brute_force_oracle(random_points(13, 0))


def test_cap_is_an_error_not_truncation():
    with pytest.raises(CapacityExceeded):
        count_triangulations(convex_points(9), cap=100)


@pytest.mark.parametrize("seed", range(8))
def test_oracle_equivalence_and_edge_identity(seed):
    S = random_points(8, seed)
    h = hull_boundary_size(S)
    ts = [t.edges for t in enumerate_triangulations(S)]
    assert len(ts) == len(set(ts)) == brute_force_oracle(S)
    assert all(len(t) == 3 * len(S) - 3 - h for t in ts)
    assert {t.edges for t in enumerate_triangulations(S, variant=1)} == set(ts)


def test_collinear_hull_points():
    S = [(0, 0), (1, 0), (2, 0), (1, 2)]
    assert hull_boundary_size(S) == 4
    ts = list(enumerate_triangulations(S))
    assert len(ts) == 1 and len(ts[0]) == 3 * 4 - 3 - 4


def test_permutation_and_translation_invariance():
    S = random_points(9, 11)
    c = count_triangulations(S)
    assert count_triangulations(S[::-1]) == c
    assert count_triangulations([(x + 10**9, y - 7) for x, y in S]) == c


# --- cells -----------------------------------------------------------------


def test_maximal_in_bounding_box():
    S = random_points(7, 5)
    xs, ys = [p[0] for p in S], [p[1] for p in S]
    box = Cell.from_rings([(min(xs), min(ys)), (max(xs), min(ys)), (max(xs), max(ys)), (min(xs), max(ys))])
    t = initial_triangulation(S)
    assert is_maximal_in_cell(t, box, S)
    some = next(iter(t.edges - {e for e in t.edges if e in _hull_edges(S)}))
    assert not is_maximal_in_cell(Triangulation(t.edges - {some}), box, S)
    assert count_maximal_in_cell(box, S) == count_triangulations(S)


def _hull_edges(S):
    from tricount.geom import convex_hull
    h = convex_hull(S)
    return {tuple(sorted((h[i], h[(i + 1) % len(h)]))) for i in range(len(h))}


def test_count_maximal_small_cells():
    tri = Cell.from_rings([(0, 0), (4, 0), (0, 4)])
    assert count_maximal_in_cell(tri, [(0, 0), (4, 0), (0, 4), (9, 9)]) == 1
    sq = Cell.from_rings(SQUARE)
    assert count_maximal_in_cell(sq, SQUARE + [(5, 5)]) == 2
    # two or fewer points: a single (possibly empty) partial triangulation
    assert count_maximal_in_cell(sq, [(1, 1), (7, 7), (8, 9)]) == 1


def _exhaustive_maximal_in_cell(Q, S):
    # oracle: enumerate every non-crossing subset of in-cell candidate edges
    pts = [p for p in S if not _outside(p, Q)]
    cands = []
    for a, b in combinations(pts, 2):
        if any(_on_open(p, a, b) for p in pts):
            continue
        if segment_in_cell((a, b), Q):
            cands.append((a, b))
    ok = lambda u, v: segments_cross(u, v) in (Crossing.DISJOINT, Crossing.SHARE_ENDPOINT_ONLY)
    count = 0
    m = len(cands)
    for mask in range(1 << m):
        chosen = [cands[i] for i in range(m) if mask >> i & 1]
        if not all(ok(u, v) for u, v in combinations(chosen, 2)):
            continue
        if all(mask >> i & 1 or any(not ok(cands[i], u) for u in chosen) for i in range(m)):
            count += 1
    return count


def _sampled_in(a, b, Q, samples=200):
    from fractions import Fraction
    return not any(_outside((a[0] + Fraction(k, samples) * (b[0] - a[0]),
                             a[1] + Fraction(k, samples) * (b[1] - a[1])), Q)
                   for k in range(samples + 1))


def _outside(p, Q):
    from tricount.geom import Location, point_in_polygon
    return point_in_polygon(p, Q) is Location.OUTSIDE


def _on_open(p, a, b):
    from tricount.geom import in_open_segment
    return in_open_segment(p, a, b)


def test_clipped_cell_fragments_match_exhaustive():
    # a cell cutting through a triangulation, in the spirit of a partition crossing triangles
    S = [(0, 0), (6, 0), (3, 5), (2, 2), (5, 3), (1, 4)]
    Q = Cell.from_rings([(0, 0), (6, 0), (5, 3), (1, 3)])
    assert count_maximal_in_cell(Q, S) == _exhaustive_maximal_in_cell(Q, S)
    sq = Cell.from_rings(SQUARE)
    assert _exhaustive_maximal_in_cell(sq, SQUARE) == 2


def test_is_maximal_in_clipped_cell():
    S = [(0, 0), (6, 0), (3, 5), (2, 2)]
    Q = Cell.from_rings([(0, 0), (6, 0), (6, 3), (0, 3)])
    # the fragment {(0,1)} leaves (0,3)/(1,3) addable inside Q
    assert not is_maximal_in_cell(Triangulation(frozenset({(0, 1)})), Q, S)
    full = Triangulation(frozenset({(0, 1), (0, 3), (1, 3)}))
    assert is_maximal_in_cell(full, Q, S)
    with pytest.raises(InvalidInput):
        is_maximal_in_cell(Triangulation(frozenset({(0, 2)})), Q, S)


@pytest.mark.parametrize("seed", range(4))
def test_fragment_restriction_property(seed):
    S = random_points(7, seed)
    Q = Cell.from_rings([(0, 0), (20, 0), (14, 28), (0, 20)])
    for t in list(enumerate_triangulations(S))[:40]:
        for i, j in t.edges:
            # kept/dropped decision agrees with dense sampling of the edge
            assert segment_in_cell((S[i], S[j]), Q) == _sampled_in(S[i], S[j], Q)
    assert count_maximal_in_cell(Q, S) == _exhaustive_maximal_in_cell(Q, S)
