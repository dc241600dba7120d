"""Exact triangulation counting by flip-graph traversal.

Triangulations are handled internally as bitmasks over the candidate edges
of a point set (pairs of points whose open segment holds no other point).
Two candidate edges conflict iff they cross properly, so a triangulation is
a maximal conflict-free mask.  The flip graph is connected, which makes a
BFS from any seed triangulation exhaustive.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .empty_triangles import as_points, enumerate_empty
from .errors import CapacityExceeded, InvalidInput, NoTriangulation
from .geom import (
    Cell,
    Crossing,
    Location,
    all_collinear,
    in_open_segment,
    orient,
    point_in_polygon,
    segment_in_cell,
    segments_cross,
)

DEFAULT_MAX_TRIANGULATIONS = int(os.environ.get("TRICOUNT_MAX_TRIANGULATIONS", 10**7))


def catalan(m: int) -> int:
    if m < 0:
        raise InvalidInput("catalan index must be >= 0")
    c = [1]
    for i in range(m):
        c.append(sum(c[j] * c[i - j] for j in range(i + 1)))
    return c[m]


@dataclass(frozen=True)
class Triangulation:
    """A set of index pairs ``(i, j)``, ``i < j``, over the point tuple it was built for."""

    edges: frozenset

    def __len__(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list:
        return sorted(self.edges)


# A partial triangulation is structurally the same object; maximality is what differs.
PartialTriangulation = Triangulation


class EdgeSpace:
    """Candidate edges, conflict masks and the flip table for one point set."""

    def __init__(self, points: Sequence):
        self.points = tuple(points)
        pts = self.points
        n = len(pts)
        self.edges = [
            (i, j) for i, j in combinations(range(n), 2)
            if not any(in_open_segment(pts[m], pts[i], pts[j]) for m in range(n))
        ]
        self.index = {e: k for k, e in enumerate(self.edges)}
        m = len(self.edges)
        self.conflict = [0] * m
        for a in range(m):
            i, j = self.edges[a]
            sa = (pts[i], pts[j])
            for b in range(a + 1, m):
                k, l = self.edges[b]
                rel = segments_cross(sa, (pts[k], pts[l]))
                if rel is Crossing.PROPER_CROSS or rel is Crossing.OVERLAP_OR_TOUCH_INTERIOR:
                    self.conflict[a] |= 1 << b
                    self.conflict[b] |= 1 << a
        self.faces = []
        if n >= 3 and not all_collinear(pts):
            self.faces = list(enumerate_empty(pts).triangles)
        self._build_flip_table()

    def bit(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return 1 << self.index[(i, j)]

    def _build_flip_table(self) -> None:
        pts = self.points
        sides: dict = {}
        for t in self.faces:
            for a, b, c in ((t.i, t.j, t.k), (t.j, t.k, t.i), (t.i, t.k, t.j)):
                e = self.index[(min(a, b), max(a, b))]
                s = orient(pts[a], pts[b], pts[c]) if a < b else orient(pts[b], pts[a], pts[c])
                sides.setdefault(e, ([], []))[0 if s > 0 else 1].append(c)
        self.flip_table = [[] for _ in self.edges]
        for e, (left, right) in sides.items():
            a, b = self.edges[e]
            for c in left:
                for d in right:
                    if orient(pts[c], pts[d], pts[a]) * orient(pts[c], pts[d], pts[b]) >= 0:
                        continue
                    need = self.bit(a, c) | self.bit(b, c) | self.bit(a, d) | self.bit(b, d)
                    self.flip_table[e].append((need, self.bit(c, d)))

    def greedy(self, order: Sequence[int]) -> int:
        mask = 0
        for e in order:
            if not self.conflict[e] & mask:
                mask |= 1 << e
        return mask

    def seed(self, variant: int = 0) -> int:
        """A deterministic triangulation: greedy insertion by length (or reversed)."""
        pts = self.points

        def length2(e):
            i, j = self.edges[e]
            return ((pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2, e)

        order = sorted(range(len(self.edges)), key=length2)
        if variant % 2:
            order.reverse()
        return self.greedy(order)

    def flips(self, mask: int) -> list:
        out = []
        m = mask
        while m:
            low = m & -m
            e = low.bit_length() - 1
            m ^= low
            for need, new in self.flip_table[e]:
                if mask & need == need:
                    out.append((mask ^ low) | new)
        return out

    def bfs(self, start: int, cap: int | None = None) -> Iterator[int]:
        cap = DEFAULT_MAX_TRIANGULATIONS if cap is None else cap
        seen = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            yield cur
            for nxt in self.flips(cur):
                if nxt not in seen:
                    if len(seen) >= cap:
                        raise CapacityExceeded(f"more than {cap} triangulations")
                    seen.add(nxt)
                    queue.append(nxt)

    def to_edges(self, mask: int) -> frozenset:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.edges[low.bit_length() - 1])
            mask ^= low
        return frozenset(out)

    def to_mask(self, edges) -> int:
        mask = 0
        for i, j in edges:
            if (min(i, j), max(i, j)) not in self.index:
                raise InvalidInput(f"({i}, {j}) is not an edge candidate")
            mask |= self.bit(i, j)
        return mask

    def faces_of(self, mask: int) -> list:
        return [t for t in self.faces
                if mask & (self.bit(t.i, t.j) | self.bit(t.j, t.k) | self.bit(t.i, t.k))
                == (self.bit(t.i, t.j) | self.bit(t.j, t.k) | self.bit(t.i, t.k))]


def _space(S: Sequence) -> EdgeSpace:
    pts = as_points(S)
    if len(pts) < 3:
        raise InvalidInput("need at least 3 points")
    if all_collinear(pts):
        raise NoTriangulation("all points are collinear")
    return EdgeSpace(pts)


def initial_triangulation(S: Sequence, variant: int = 0) -> Triangulation:
    space = _space(S)
    return Triangulation(space.to_edges(space.seed(variant)))


def flips(t: Triangulation, S: Sequence) -> list:
    space = _space(S)
    return [Triangulation(space.to_edges(m)) for m in space.flips(space.to_mask(t.edges))]


def enumerate_triangulations(S: Sequence, cap: int | None = None,
                             variant: int = 0) -> Iterator[Triangulation]:
    space = _space(S)
    for mask in space.bfs(space.seed(variant), cap):
        yield Triangulation(space.to_edges(mask))


def count_triangulations(S: Sequence, cap: int | None = None, variant: int = 0) -> int:
    space = _space(S)
    return sum(1 for _ in space.bfs(space.seed(variant), cap))


def hull_boundary_size(S: Sequence) -> int:
    """Number of input points on the convex hull boundary, collinear ones included."""
    from .geom import convex_hull

    pts = as_points(S)
    hull = [pts[i] for i in convex_hull(pts)]
    return sum(1 for p in pts if point_in_polygon(p, hull) is Location.BOUNDARY)


# --- partial triangulations inside a cell ---------------------------------


def _cell_points(Q: Cell, pts: tuple) -> list:
    if Q.contained_points:
        return list(Q.contained_points)
    return [i for i, p in enumerate(pts) if point_in_polygon(p, Q) is not Location.OUTSIDE]


def is_maximal_in_cell(pt: Triangulation, Q: Cell, S: Sequence) -> bool:
    pts = as_points(S)
    inside = set(_cell_points(Q, pts))
    for i, j in pt.edges:
        if i not in inside or j not in inside:
            raise InvalidInput(f"edge ({i}, {j}) uses a point outside the cell")
        if not segment_in_cell((pts[i], pts[j]), Q):
            raise InvalidInput(f"edge ({i}, {j}) is not contained in the cell")
    used = [(pts[i], pts[j]) for i, j in pt.edges]
    existing = {(min(e), max(e)) for e in pt.edges}
    sub = sorted(inside)
    for i, j in combinations(sub, 2):
        if (i, j) in existing:
            continue
        if any(in_open_segment(pts[m], pts[i], pts[j]) for m in sub):
            continue
        s = (pts[i], pts[j])
        if not segment_in_cell(s, Q):
            continue
        if all(segments_cross(s, u) in (Crossing.DISJOINT, Crossing.SHARE_ENDPOINT_ONLY)
               for u in used):
            return False
    return True


def maximal_fragments(Q: Cell, S: Sequence, cap: int | None = None) -> set:
    """Distinct maximal-within-``Q`` fragments, as frozensets of global index pairs."""
    pts = as_points(S)
    idx = _cell_points(Q, pts)
    sub = [pts[i] for i in idx]
    if len(sub) <= 2 or all_collinear(sub):
        space = EdgeSpace(sub)
        mask = sum(1 << e for e, (i, j) in enumerate(space.edges)
                   if segment_in_cell((sub[i], sub[j]), Q))
        return {frozenset((idx[i], idx[j]) for i, j in space.to_edges(mask))}
    space = EdgeSpace(sub)
    incell = 0
    for e, (i, j) in enumerate(space.edges):
        if segment_in_cell((sub[i], sub[j]), Q):
            incell |= 1 << e
    fragments = {mask & incell for mask in space.bfs(space.seed(), cap)}
    in_edges = [e for e in range(len(space.edges)) if incell >> e & 1]
    keep = set()
    for f in fragments:
        if all(f >> e & 1 or space.conflict[e] & f for e in in_edges):
            keep.add(frozenset((idx[i], idx[j]) for i, j in space.to_edges(f)))
    return keep


def count_maximal_in_cell(Q: Cell, S: Sequence, cap: int | None = None) -> int:
    return len(maximal_fragments(Q, S, cap))
