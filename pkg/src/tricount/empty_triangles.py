"""The triangle universe: all triangles on input points with no other input point in them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Sequence

from .errors import InvalidInput
from .geom import Location, Point, orient, point_in_triangle


class EmptyTriangle(NamedTuple):
    i: int
    j: int
    k: int


@dataclass(frozen=True)
class TriangleUniverse:
    points: tuple
    triangles: tuple

    def __len__(self) -> int:
        return len(self.triangles)

    def __iter__(self):
        return iter(self.triangles)

    def coords(self, t: EmptyTriangle) -> tuple:
        return (self.points[t.i], self.points[t.j], self.points[t.k])

    def as_point_sets(self) -> set:
        """Triangles as frozensets of coordinates, independent of input order."""
        return {frozenset(self.coords(t)) for t in self.triangles}


def as_points(S: Sequence) -> tuple:
    pts = []
    for p in S:
        x, y = p
        if isinstance(x, bool) or isinstance(y, bool) or not isinstance(x, int) or not isinstance(y, int):
            raise InvalidInput(f"point {p!r} does not have integer coordinates")
        pts.append(Point(x, y))
    if len(set(pts)) != len(pts):
        raise InvalidInput("duplicate points in input")
    return tuple(pts)


def enumerate_empty(S: Sequence) -> TriangleUniverse:
    pts = as_points(S)
    if len(pts) < 3:
        raise InvalidInput("need at least 3 points")
    out = []
    n = len(pts)
    for i, j, k in combinations(range(n), 3):
        t = (pts[i], pts[j], pts[k])
        if orient(*t) == 0:
            continue
        # any other point on the closed triangle disqualifies it
        if all(point_in_triangle(pts[m], t) is Location.OUTSIDE
               for m in range(n) if m not in (i, j, k)):
            out.append(EmptyTriangle(i, j, k))
    return TriangleUniverse(pts, tuple(out))
