"""Balanced cheap cuts: a verifier and an exhaustive searcher over fixed candidate families.

A cut is a simple polygon with few edges.  Given weighted triangles, the
triangles whose closure meets the polygon's boundary are *destroyed*; the rest
lie strictly inside or strictly outside.  A cut is balanced and alpha-cheap
with at most ``l`` edges when the destroyed weight is at most ``alpha`` of the
total and neither side keeps more than two thirds of it.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

from .dp import build_dp_points, interiors_overlap
from .empty_triangles import EmptyTriangle, TriangleUniverse, enumerate_empty
from .errors import CapacityExceeded, InvalidInput, InvariantViolation
from .geom import (
    Cell,
    Crossing,
    Location,
    _canonical_ring,
    fmt_rational,
    orient,
    point_in_polygon,
    point_in_triangle,
    rat,
    ring_is_simple,
    segments_cross,
    signed_area2,
)

TWO_THIRDS = Fraction(2, 3)
DEFAULT_MAX_CANDIDATES = 200_000


class WeightedTriangle(NamedTuple):
    tri: tuple
    weight: Fraction


class Side(str, enum.Enum):
    DESTROYED = "destroyed"
    INSIDE = "inside"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class CutPolygon:
    vertices: tuple

    def __post_init__(self):
        ring = tuple(rat(v) for v in self.vertices)
        if len(ring) < 3 or signed_area2(ring) == 0 or not ring_is_simple(ring):
            raise InvalidInput("cut polygon must be simple with positive area")
        object.__setattr__(self, "vertices", _canonical_ring(ring, ccw=True))

    @property
    def edge_count(self) -> int:
        return len(self.vertices)

    def edges(self) -> Iterator[tuple]:
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[i], vs[(i + 1) % len(vs)]

    def to_json(self) -> list:
        return [[fmt_rational(v.x), fmt_rational(v.y)] for v in self.vertices]


@dataclass(frozen=True)
class CutReport:
    cut: CutPolygon
    destroyed_weight: Fraction
    inside_weight: Fraction
    outside_weight: Fraction
    clauses: dict
    sides: tuple = field(default=(), repr=False)

    @property
    def verdict(self) -> bool:
        return all(self.clauses.values())

    def to_json(self) -> dict:
        return {
            "cut": self.cut.to_json(),
            "edges": self.cut.edge_count,
            "destroyed_weight": fmt_rational(self.destroyed_weight),
            "inside_weight": fmt_rational(self.inside_weight),
            "outside_weight": fmt_rational(self.outside_weight),
            "clauses": dict(self.clauses),
            "verdict": self.verdict,
        }


def weighted(triangles: Iterable, weights: Iterable | None = None) -> list:
    """Pair triangles with weights (unit weights by default), checking both."""
    tris = [tuple(rat(v) for v in t) for t in triangles]
    ws = [Fraction(1)] * len(tris) if weights is None else [Fraction(w) for w in weights]
    if len(ws) != len(tris):
        raise InvalidInput("one weight per triangle is required")
    for t, w in zip(tris, ws):
        if len(t) != 3 or orient(*t) == 0:
            raise InvalidInput(f"degenerate triangle {t!r}")
        if w < 0:
            raise InvalidInput("weights must be non-negative")
    if not tris or sum(ws) == 0:
        raise InvalidInput("total weight must be positive")
    return [WeightedTriangle(t, w) for t, w in zip(tris, ws)]


def _as_weighted(T: Sequence) -> list:
    if T and isinstance(T[0], WeightedTriangle):
        return list(T)
    return weighted([t for t, _ in T], [w for _, w in T])


def _closures_meet(a: tuple, b: tuple) -> bool:
    if any(point_in_triangle(v, b) is not Location.OUTSIDE for v in a):
        return True
    if any(point_in_triangle(v, a) is not Location.OUTSIDE for v in b):
        return True
    ea = [(a[i], a[(i + 1) % 3]) for i in range(3)]
    eb = [(b[i], b[(i + 1) % 3]) for i in range(3)]
    return any(segments_cross(s, t) is not Crossing.DISJOINT for s in ea for t in eb)


def check_disjoint(T: Sequence, allow_shared_boundary: bool = False) -> None:
    """Raise InvalidInput unless the triangles are pairwise non-touching.

    With ``allow_shared_boundary`` only overlapping interiors are rejected,
    which admits the faces of a triangulation.
    """
    cells = [Cell.from_rings(t.tri) for t in T] if allow_shared_boundary else None
    for i, j in combinations(range(len(T)), 2):
        if allow_shared_boundary:
            bad = interiors_overlap(cells[i], cells[j])
        else:
            bad = _closures_meet(T[i].tri, T[j].tri)
        if bad:
            raise InvalidInput(f"triangles {i} and {j} touch or overlap")


def classify(tri: tuple, cut: CutPolygon) -> Side:
    # contact with the boundary polyline, including a single shared point, destroys
    if any(point_in_triangle(v, tri) is not Location.OUTSIDE for v in cut.vertices):
        return Side.DESTROYED
    tri_edges = [(tri[i], tri[(i + 1) % 3]) for i in range(3)]
    for e in cut.edges():
        if any(segments_cross(e, s) is not Crossing.DISJOINT for s in tri_edges):
            return Side.DESTROYED
    c = rat(sum(v.x for v in tri) / 3, sum(v.y for v in tri) / 3)
    inside = point_in_polygon(c, cut.vertices) is Location.INTERIOR
    return Side.INSIDE if inside else Side.OUTSIDE


def verify_cut(cut: CutPolygon, T: Sequence, alpha, l: int,
               allow_shared_boundary: bool = False) -> CutReport:
    """Check the four clauses for ``cut`` against weighted triangles ``T``.

    ``T`` holds WeightedTriangle values or ``(triangle, weight)`` pairs.
    """
    if not isinstance(cut, CutPolygon):
        cut = CutPolygon(tuple(cut))
    T = _as_weighted(T)
    check_disjoint(T, allow_shared_boundary)
    return _report(cut, T, Fraction(alpha), l)


# --- search ------------------------------------------------------------------


def basic_points_of(T: Sequence) -> frozenset:
    """Basic DP points induced by the given triangles."""
    coords = sorted({v for t in T for v in t.tri})
    index = {p: i for i, p in enumerate(coords)}
    tris = tuple(EmptyTriangle(*sorted(index[v] for v in t.tri)) for t in T)
    return build_dp_points(TriangleUniverse(tuple(coords), tris)).basic


def rectangle_candidates(points: Iterable) -> Iterator[CutPolygon]:
    """Axis-parallel rectangles whose four corners are all in ``points``, in canonical order."""
    by_x: dict = {}
    for p in points:
        by_x.setdefault(p.x, set()).add(p.y)
    xs = sorted(by_x)
    for xa, xb in combinations(xs, 2):
        ys = sorted(by_x[xa] & by_x[xb])
        for ya, yb in combinations(ys, 2):
            yield CutPolygon(((xa, ya), (xb, ya), (xb, yb), (xa, yb)))


def polygon_candidates(points: Iterable, l: int) -> Iterator[CutPolygon]:
    """Convex polygons with 3 to min(l, 6) vertices from ``points``, smallest first."""
    pts = sorted(points)
    for m in range(3, min(l, 6) + 1):
        for combo in combinations(pts, m):
            ring = _convex_order(combo)
            if ring is not None:
                yield CutPolygon(ring)


def _convex_order(pts: tuple) -> tuple | None:
    # counter-clockwise order around the lowest point; None unless strictly convex
    start = min(pts, key=lambda p: (p.y, p.x))
    rest = [p for p in pts if p != start]
    for p in rest:
        if any(q != p and orient(start, p, q) == 0 for q in rest):
            return None
    rest.sort(key=functools.cmp_to_key(lambda a, b: -orient(start, a, b)))
    ring = [start] + rest
    m = len(ring)
    if all(orient(ring[i], ring[(i + 1) % m], ring[(i + 2) % m]) > 0 for i in range(m)):
        return tuple(ring)
    return None


def search_cut(T: Sequence, alpha, l: int, family: str = "rectangles",
               allow_shared_boundary: bool = True, points: Sequence | None = None,
               max_candidates: int = DEFAULT_MAX_CANDIDATES) -> CutReport | None:
    """First verified cut in canonical candidate order, or None when the family is exhausted.

    Candidate vertices are the basic DP points of the input set ``points``
    when given, otherwise those induced by ``T`` alone.
    """
    T = _as_weighted(T)
    total = sum(t.weight for t in T)
    if any(3 * t.weight > total for t in T):
        raise InvalidInput("a triangle carries more than one third of the total weight")
    check_disjoint(T, allow_shared_boundary)
    if points is not None:
        pool = build_dp_points(enumerate_empty(points)).basic
    else:
        pool = basic_points_of(T)
    if family == "rectangles":
        cands = rectangle_candidates(pool)
    elif family == "polygons":
        cands = polygon_candidates(pool, l)
    else:
        raise InvalidInput(f"unknown candidate family {family!r}")
    alpha = Fraction(alpha)
    for seen, cut in enumerate(cands, 1):
        if seen > max_candidates:
            raise CapacityExceeded(f"more than {max_candidates} cut candidates")
        if cut.edge_count > l:
            continue
        # disjointness was checked once above
        report = _report(cut, T, alpha, l)
        if report.verdict:
            return report
    return None


def _report(cut: CutPolygon, T: list, alpha: Fraction, l: int) -> CutReport:
    total = sum(t.weight for t in T)
    sums = {s: Fraction(0) for s in Side}
    sides = []
    for t in T:
        s = classify(t.tri, cut)
        sides.append(s)
        sums[s] += t.weight
    destroyed, inside, outside = (sums[s] / total for s in Side)
    if destroyed + inside + outside != 1:
        raise InvariantViolation("weight classes do not partition the total")
    clauses = {
        "edges_at_most_l": cut.edge_count <= l,
        "destroyed_at_most_alpha": destroyed <= alpha,
        "inside_at_most_two_thirds": inside <= TWO_THIRDS,
        "outside_at_most_two_thirds": outside <= TWO_THIRDS,
    }
    return CutReport(cut, destroyed, inside, outside, clauses, tuple(sides))


def triangulation_faces(S: Sequence, t) -> list:
    """Unit-weight faces of a triangulation given as index-pair edges."""
    from .exact import EdgeSpace

    space = EdgeSpace(tuple(S))
    faces = space.faces_of(space.to_mask(t.edges))
    # faces_of yields every empty triangle whose three edges are present
    return weighted([tuple(S[i] for i in f) for f in faces])
