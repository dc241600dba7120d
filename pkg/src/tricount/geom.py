"""Exact planar predicates over integer and rational coordinates.

Every geometric decision in the package goes through this module.  Inputs
may be :class:`Point` (ints), :class:`RatPoint` (``Fraction``) or any pair
indexable as ``p[0], p[1]`` holding ints or Fractions; arithmetic is exact
in all cases.  Floats are rejected by :func:`rat`.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateTriangle, InvalidInput


class Point(NamedTuple):
    x: int
    y: int


class RatPoint(NamedTuple):
    x: Fraction
    y: Fraction

    def __str__(self) -> str:
        return f"({fmt_rational(self.x)}, {fmt_rational(self.y)})"


def _exact(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (Rational, str)):
        raise InvalidInput(f"coordinate {v!r} is not an exact rational")
    return Fraction(v)


def rat(x, y=None) -> RatPoint:
    """Build a canonical RatPoint from ints, Fractions, ``"p/q"`` strings or a pair."""
    if y is None:
        x, y = x
    return RatPoint(_exact(x), _exact(y))


def fmt_rational(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class Segment(NamedTuple):
    a: RatPoint
    b: RatPoint


def segment(a, b) -> Segment:
    a, b = rat(a), rat(b)
    if a == b:
        raise InvalidInput("segment endpoints coincide")
    return Segment(a, b)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(p, q, r) -> int:
    """Sign of ``(q - p) x (r - p)``: +1 left turn, -1 right turn, 0 collinear."""
    c = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (c > 0) - (c < 0)


def on_segment(p, a, b) -> bool:
    """True iff ``p`` lies on the closed segment ``ab``."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def in_open_segment(p, a, b) -> bool:
    return on_segment(p, a, b) and p != a and p != b


class Crossing(enum.Enum):
    DISJOINT = "disjoint"
    SHARE_ENDPOINT_ONLY = "share_endpoint_only"
    PROPER_CROSS = "proper_cross"
    OVERLAP_OR_TOUCH_INTERIOR = "overlap_or_touch_interior"


def segments_cross(s1, s2) -> Crossing:
    a, b = s1
    c, d = s2
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return Crossing.PROPER_CROSS
    if o1 == 0 and o2 == 0:
        # collinear: compare projections on the dominant axis
        ax = 0 if a[0] != b[0] else 1
        lo1, hi1 = sorted((a[ax], b[ax]))
        lo2, hi2 = sorted((c[ax], d[ax]))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return Crossing.DISJOINT
        if lo < hi:
            return Crossing.OVERLAP_OR_TOUCH_INTERIOR
        return Crossing.SHARE_ENDPOINT_ONLY
    shared = {a, b} & {c, d}
    touches = [p for p, (u, v) in ((c, s1), (d, s1), (a, s2), (b, s2))
               if on_segment(p, u, v)]
    if not touches:
        return Crossing.DISJOINT
    if all(p in shared for p in touches):
        return Crossing.SHARE_ENDPOINT_ONLY
    return Crossing.OVERLAP_OR_TOUCH_INTERIOR


def line_intersection(a, b, c, d) -> RatPoint | None:
    """Intersection of the supporting lines of ``ab`` and ``cd`` (None if parallel)."""
    den = (b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0])
    if den == 0:
        return None
    t = Fraction((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0]), 1) / den
    return RatPoint(Fraction(a[0]) + t * (b[0] - a[0]), Fraction(a[1]) + t * (b[1] - a[1]))


def segment_intersection_point(s1, s2) -> RatPoint | None:
    """The unique common point of two non-collinear closed segments, if any."""
    a, b = s1
    c, d = s2
    p = line_intersection(a, b, c, d)
    if p is None or not on_segment(p, a, b) or not on_segment(p, c, d):
        return None
    return p


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def point_in_triangle(p, t) -> Location:
    a, b, c = t
    s = orient(a, b, c)
    if s == 0:
        raise DegenerateTriangle(f"triangle {t!r} has zero area")
    o = (orient(a, b, p) * s, orient(b, c, p) * s, orient(c, a, p) * s)
    if min(o) < 0:
        return Location.OUTSIDE
    if 0 in o:
        return Location.BOUNDARY
    return Location.INTERIOR


def signed_area2(ring: Sequence) -> Fraction:
    """Twice the signed area of a closed ring (positive when counter-clockwise)."""
    total = 0
    m = len(ring)
    for i in range(m):
        p, q = ring[i], ring[(i + 1) % m]
        total += p[0] * q[1] - p[1] * q[0]
    return Fraction(total)


def _canonical_ring(ring, ccw: bool) -> tuple:
    pts = [rat(p) for p in ring]
    # drop repeated closing vertex
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if (signed_area2(pts) > 0) != ccw:
        pts.reverse()
    i = pts.index(min(pts))
    return tuple(pts[i:] + pts[:i])


def _ring_edges(ring):
    m = len(ring)
    for i in range(m):
        yield ring[i], ring[(i + 1) % m]


def ring_is_simple(ring) -> bool:
    m = len(ring)
    if m < 3 or len(set(ring)) != m:
        return False
    edges = list(_ring_edges(ring))
    for i in range(m):
        for j in range(i + 1, m):
            rel = segments_cross(edges[i], edges[j])
            adjacent = j == i + 1 or (i == 0 and j == m - 1)
            if adjacent:
                if rel is not Crossing.SHARE_ENDPOINT_ONLY:
                    return False
            elif rel is not Crossing.DISJOINT:
                return False
    return True


@dataclass(frozen=True)
class Cell:
    """Closed polygonal region: CCW outer ring, CW holes, and the input points it holds."""

    outer: tuple
    holes: tuple = ()
    contained_points: tuple = ()
    _key: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_rings(cls, outer: Iterable, holes: Iterable = (), contained_points=()) -> "Cell":
        o = _canonical_ring(outer, ccw=True)
        hs = tuple(sorted(_canonical_ring(h, ccw=False) for h in holes))
        key = (o, hs)
        return cls(o, hs, tuple(sorted(contained_points)), key)

    def with_points(self, points: Sequence) -> "Cell":
        """Copy with ``contained_points`` set to the indices of ``points`` in the closure."""
        idx = tuple(i for i, p in enumerate(points)
                    if point_in_polygon(p, self) is not Location.OUTSIDE)
        return Cell(self.outer, self.holes, idx, self.key)

    @property
    def key(self) -> tuple:
        return self._key or (self.outer, self.holes)

    @property
    def key_hex(self) -> str:
        text = ";".join(",".join(str(p) for p in ring) for ring in (self.outer, *self.holes))
        return hashlib.sha1(text.encode()).hexdigest()[:16]

    @property
    def rings(self) -> tuple:
        return (self.outer, *self.holes)

    @property
    def vertex_count(self) -> int:
        return sum(len(r) for r in self.rings)

    @property
    def area(self) -> Fraction:
        return sum((signed_area2(r) for r in self.rings), Fraction(0)) / 2

    def edges(self):
        for r in self.rings:
            yield from _ring_edges(r)

    def is_valid(self) -> bool:
        if signed_area2(self.outer) <= 0 or not ring_is_simple(self.outer):
            return False
        for h in self.holes:
            if not ring_is_simple(h) or signed_area2(h) >= 0:
                return False
            if any(point_in_polygon(v, Cell(self.outer)) is not Location.INTERIOR for v in h):
                return False
            if any(segments_cross(e, f) is not Crossing.DISJOINT
                   for e in _ring_edges(h) for f in _ring_edges(self.outer)):
                return False
        for i, h in enumerate(self.holes):
            for g in self.holes[i + 1:]:
                if any(segments_cross(e, f) is not Crossing.DISJOINT
                       for e in _ring_edges(h) for f in _ring_edges(g)):
                    return False
                if (point_in_polygon(g[0], Cell(h[::-1])) is not Location.OUTSIDE
                        or point_in_polygon(h[0], Cell(g[::-1])) is not Location.OUTSIDE):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "key": self.key_hex,
            "outer": [[fmt_rational(p[0]), fmt_rational(p[1])] for p in self.outer],
            "holes": [[[fmt_rational(p[0]), fmt_rational(p[1])] for p in h] for h in self.holes],
            "contained_points": list(self.contained_points),
        }


def point_in_polygon(p, poly) -> Location:
    """Classify ``p`` against a closed region; points inside a hole are outside."""
    rings = poly.rings if isinstance(poly, Cell) else (tuple(poly),)
    inside = False
    px, py = p[0], p[1]
    for ring in rings:
        m = len(ring)
        for i in range(m):
            a, b = ring[i], ring[(i + 1) % m]
            if on_segment(p, a, b):
                return Location.BOUNDARY
            # half-open crossing rule on the horizontal ray to +x
            if (a[1] > py) != (b[1] > py):
                xint = a[0] + Fraction(py - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
                if xint > px:
                    inside = not inside
    return Location.INTERIOR if inside else Location.OUTSIDE


def _boundary_params(a, b, poly) -> list:
    """Parameters ``t`` in [0, 1] where ``a + t (b - a)`` touches the region boundary."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = dx * dx + dy * dy
    ts = set()
    for c, d in poly.edges():
        o1, o2 = orient(a, b, c), orient(a, b, d)
        if o1 == 0 and o2 == 0:
            for q in (c, d):
                t = Fraction((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / norm
                if 0 <= t <= 1:
                    ts.add(t)
            continue
        if o1 * o2 > 0:
            continue
        den = dx * (d[1] - c[1]) - dy * (d[0] - c[0])
        if den == 0:
            continue
        t = Fraction((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / den
        if 0 <= t <= 1:
            ts.add(t)
    return sorted(ts)


def segment_in_cell(s, poly) -> bool:
    """True iff the closed segment lies in the closed region (boundary contact allowed)."""
    a, b = s
    ts = _boundary_params(a, b, poly)
    ts = sorted({Fraction(0), Fraction(1), *ts})
    dx, dy = b[0] - a[0], b[1] - a[1]

    def at(t):
        return (a[0] + t * dx, a[1] + t * dy)

    for t in ts:
        if point_in_polygon(at(t), poly) is Location.OUTSIDE:
            return False
    for t0, t1 in zip(ts, ts[1:]):
        if point_in_polygon(at((t0 + t1) / 2), poly) is Location.OUTSIDE:
            return False
    return True


def convex_hull(points: Sequence) -> list:
    """Indices of hull vertices in CCW order; collinear boundary points are excluded."""
    order = sorted(range(len(points)), key=lambda i: (points[i][0], points[i][1]))
    if len(order) <= 2:
        return order

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient(points[out[-2]], points[out[-1]], points[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower, upper = chain(order), chain(reversed(order))
    return lower[:-1] + upper[:-1]


def all_collinear(points: Sequence) -> bool:
    if len(points) < 3:
        return True
    a = points[0]
    b = next((p for p in points[1:] if p != a), None)
    if b is None:
        return True
    return all(orient(a, b, p) == 0 for p in points)
