"""DP points, DP cells, cell catalogs and balanced partitions.

Three cell families are available:

``triquad``
    triangles and convex quadrilaterals with corners at basic DP points;
    a cell is partitioned by a chord between two DP points on its boundary
    or by a fan from one interior DP point to its corners.
``binary-cut``
    convex cells produced by recursively cutting the bounding box in two.
    Cuts run along a vertical line through an input point's x-coordinate or
    along a segment between two input points lying on the cell boundary.
``exhaustive``
    every triangle and convex quadrilateral over the input points and box
    corners; partitions are found by direct search over catalog tuples.
    Only meant for validation on very small inputs.

All cells are closed: an input point on a cell boundary belongs to the cell,
and is charged to every touching part when the two-thirds balance rule is
applied.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .empty_triangles import TriangleUniverse
from .errors import CapacityExceeded, InvalidInput, InvariantViolation
from .geom import (
    Cell,
    Crossing,
    Location,
    RatPoint,
    in_open_segment,
    on_segment,
    orient,
    point_in_polygon,
    rat,
    segment_in_cell,
    segment_intersection_point,
    segments_cross,
    signed_area2,
)


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


DEFAULT_MAX_DP_POINTS = _env_int("TRICOUNT_MAX_DP_POINTS", 200_000)
DEFAULT_MAX_CELLS = _env_int("TRICOUNT_MAX_CELLS", 200_000)
DEFAULT_MAX_PARTITIONS = _env_int("TRICOUNT_MAX_PARTITIONS", 2_000_000)


class CellFamily(str, enum.Enum):
    TRIQUAD = "triquad"
    BINARY_CUT = "binary-cut"
    EXHAUSTIVE = "exhaustive"


class DPMode(str, enum.Enum):
    BASIC_ONLY = "basic_only"
    BASIC_AND_ADDITIONAL = "basic_and_additional"


@dataclass(frozen=True)
class DPPointSet:
    basic: frozenset
    additional: frozenset
    box: tuple  # (xmin, ymin, xmax, ymax)

    @property
    def all(self) -> frozenset:
        return self.basic | self.additional

    def __len__(self) -> int:
        return len(self.all)


def bounding_box(points: Sequence) -> tuple:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs), min(ys), max(xs), max(ys))


def box_cell(box: tuple, points: Sequence = ()) -> Cell:
    x0, y0, x1, y1 = box
    if x0 == x1 or y0 == y1:
        raise InvalidInput("bounding box has zero area")
    cell = Cell.from_rings([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    return cell.with_points(points) if points else cell


def build_dp_points(T: TriangleUniverse, mode: DPMode | str = DPMode.BASIC_ONLY,
                    cap: int | None = None) -> DPPointSet:
    mode = DPMode(mode)
    cap = DEFAULT_MAX_DP_POINTS if cap is None else cap
    if not len(T):
        raise InvalidInput("triangle universe is empty")
    corners = {T.points[v] for t in T for v in t}
    box = bounding_box(list(corners))
    x0, y0, x1, y1 = box
    edges = {tuple(sorted(((t[a]), (t[b])))) for t in T for a, b in ((0, 1), (1, 2), (0, 2))}
    edge_segs = [(T.points[i], T.points[j]) for i, j in edges]
    basic = {rat(x0, y0), rat(x1, y0), rat(x1, y1), rat(x0, y1)}
    for c in sorted({p[0] for p in corners}):
        basic.add(rat(c, y0))
        basic.add(rat(c, y1))
        for a, b in edge_segs:
            lo, hi = sorted((a[0], b[0]))
            if not lo <= c <= hi:
                continue
            if a[0] == b[0]:
                basic.add(rat(a))
                basic.add(rat(b))
            else:
                t = Fraction(c - a[0], b[0] - a[0])
                basic.add(rat(c, a[1] + t * (b[1] - a[1])))
        if len(basic) > cap:
            raise CapacityExceeded(f"more than {cap} DP points")
    additional = set()
    if mode is DPMode.BASIC_AND_ADDITIONAL:
        pts = sorted(basic)
        segs = list(combinations(pts, 2))
        for s1, s2 in combinations(segs, 2):
            if segments_cross(s1, s2) is Crossing.PROPER_CROSS:
                p = segment_intersection_point(s1, s2)
                if p not in basic:
                    additional.add(p)
                    if len(basic) + len(additional) > cap:
                        raise CapacityExceeded(f"more than {cap} DP points")
    return DPPointSet(frozenset(basic), frozenset(additional), box)


# --- containment and partition checks -----------------------------------------


def interior_point(cell: Cell) -> RatPoint:
    """Some point strictly inside the region."""
    ys = sorted({v[1] for r in cell.rings for v in r})
    for lo, hi in zip(ys, ys[1:]):
        y = (Fraction(lo) + Fraction(hi)) / 2
        xs = []
        for a, b in cell.edges():
            if (a[1] > y) != (b[1] > y):
                xs.append(Fraction(a[0]) + (y - a[1]) * Fraction(b[0] - a[0]) / (b[1] - a[1]))
        xs.sort()
        for xa, xb in zip(xs[::2], xs[1::2]):
            if xa < xb:
                return RatPoint((xa + xb) / 2, y)
    raise InvalidInput("cell has no interior")


def cell_contains(a: Cell, b: Cell) -> bool:
    """True iff closure(b) is a subset of closure(a)."""
    if not all(segment_in_cell(e, a) for e in b.edges()):
        return False
    if point_in_polygon(interior_point(b), a) is Location.OUTSIDE:
        return False
    for h in a.holes:
        if point_in_polygon(interior_point(Cell(h[::-1])), b) is Location.INTERIOR:
            return False
    return True


def _boundary_pieces_inside(a: Cell, b: Cell) -> bool:
    """Does any piece of a's boundary run through the interior of b?"""
    for p, q in a.edges():
        dx, dy = q[0] - p[0], q[1] - p[1]
        ts = {Fraction(0), Fraction(1)}
        for c, d in b.edges():
            rel = segments_cross((p, q), (c, d))
            if rel is Crossing.DISJOINT:
                continue
            for r in (c, d):
                if on_segment(r, p, q):
                    ts.add(_param(p, dx, dy, r))
            x = segment_intersection_point((p, q), (c, d))
            if x is not None:
                ts.add(_param(p, dx, dy, x))
        ts = sorted(ts)
        for t0, t1 in zip(ts, ts[1:]):
            t = (t0 + t1) / 2
            if point_in_polygon((p[0] + t * dx, p[1] + t * dy), b) is Location.INTERIOR:
                return True
    return False


def _param(p, dx, dy, r) -> Fraction:
    if dx:
        return Fraction(r[0] - p[0]) / dx
    return Fraction(r[1] - p[1]) / dy


def _bbox(cell: Cell) -> tuple:
    xs = [v[0] for v in cell.outer]
    ys = [v[1] for v in cell.outer]
    return min(xs), min(ys), max(xs), max(ys)


def interiors_overlap(a: Cell, b: Cell) -> bool:
    ax0, ay0, ax1, ay1 = _bbox(a)
    bx0, by0, bx1, by1 = _bbox(b)
    if ax1 <= bx0 or bx1 <= ax0 or ay1 <= by0 or by1 <= ay0:
        return False
    if point_in_polygon(interior_point(a), b) is Location.INTERIOR:
        return True
    if point_in_polygon(interior_point(b), a) is Location.INTERIOR:
        return True
    return _boundary_pieces_inside(a, b) or _boundary_pieces_inside(b, a)


def balance_limit(m: int) -> int | None:
    """Largest admissible part population for a parent holding ``m`` points."""
    return None if m < 3 else (2 * m) // 3


@dataclass(frozen=True)
class Partition:
    parts: tuple

    @property
    def keys(self) -> tuple:
        return tuple(p.key for p in self.parts)


def verify_partition(Q: Cell, parts: Sequence[Cell], k: int) -> None:
    """Raise InvariantViolation unless ``parts`` is a balanced partition of ``Q``."""
    if not 2 <= len(parts) <= k:
        raise InvariantViolation(f"partition has {len(parts)} parts, k = {k}")
    if sum((p.area for p in parts), Fraction(0)) != Q.area:
        raise InvariantViolation("part areas do not sum to the parent area")
    for p in parts:
        if not cell_contains(Q, p):
            raise InvariantViolation("part is not contained in the parent")
    for p, q in combinations(parts, 2):
        if interiors_overlap(p, q):
            raise InvariantViolation("parts overlap")
    lim = balance_limit(len(Q.contained_points))
    if lim is not None and any(len(p.contained_points) > lim for p in parts):
        raise InvariantViolation("part holds more than two thirds of the points")
    covered = set().union(*(p.contained_points for p in parts))
    if covered != set(Q.contained_points):
        raise InvariantViolation("input points not covered by the parts")


def is_balanced(Q: Cell, parts: Sequence[Cell]) -> bool:
    lim = balance_limit(len(Q.contained_points))
    return lim is None or all(len(p.contained_points) <= lim for p in parts)


# --- convex helpers -----------------------------------------------------------


def _is_convex(ring) -> bool:
    m = len(ring)
    return all(orient(ring[i], ring[(i + 1) % m], ring[(i + 2) % m]) > 0 for i in range(m))


def split_convex(ring: tuple, p: RatPoint, q: RatPoint) -> tuple | None:
    """Split a CCW convex ring along chord ``pq`` (both on the boundary)."""
    pts = []
    m = len(ring)
    for i in range(m):
        a, b = ring[i], ring[(i + 1) % m]
        pts.append(a)
        for r in sorted((x for x in (p, q) if in_open_segment(x, a, b)),
                        key=lambda x: abs(x[0] - a[0]) + abs(x[1] - a[1])):
            pts.append(r)
    if p not in pts or q not in pts:
        return None
    i, j = pts.index(p), pts.index(q)
    if i > j:
        i, j = j, i
    first = pts[i:j + 1]
    second = pts[j:] + pts[:i + 1]
    if len(first) < 3 or len(second) < 3:
        return None
    if signed_area2(first) <= 0 or signed_area2(second) <= 0:
        return None
    return tuple(first), tuple(second)


# --- catalogs -----------------------------------------------------------------


@dataclass
class Catalog:
    """Cells in containment order plus the balanced partitions found for each."""

    cells: list
    partitions: dict = field(default_factory=dict)
    family: CellFamily = CellFamily.BINARY_CUT
    root: Cell | None = None

    def index(self) -> dict:
        return {c.key: c for c in self.cells}

    @property
    def partition_count(self) -> int:
        return sum(len(v) for v in self.partitions.values())

    def to_json(self) -> dict:
        pos = {c.key: i for i, c in enumerate(self.cells)}
        return {
            "family": self.family.value,
            "cells": [dict(c.to_json(), index=i, area=str(c.area)) for i, c in enumerate(self.cells)],
            "partitions": {
                self.cells[pos[key]].key_hex: [[self.cells[pos[k]].key_hex for k in part]
                                               for part in parts]
                for key, parts in sorted(self.partitions.items(), key=lambda kv: pos[kv[0]])
            },
        }


def containment_order(cells: Sequence[Cell]) -> list:
    """Sort so that every cell precedes the cells containing it.

    A proper closed subset has strictly smaller area, so ascending area is a
    valid topological order; ties are broken by the canonical key.
    """
    return sorted(cells, key=lambda c: (c.area, c.key))


class _Builder:
    def __init__(self, dps: DPPointSet, S: Sequence, k: int, family: CellFamily,
                 max_cells: int, max_partitions: int):
        if k < 3:
            raise InvalidInput("k must be at least 3")
        self.dps = dps
        self.S = tuple(S)
        self.k = k
        self.family = family
        self.max_cells = max_cells
        self.max_partitions = max_partitions
        self.cells: dict = {}
        self.dp_all = dps.all
        self.xs = sorted({p[0] for p in self.S})
        self.n_partitions = 0
        self._edges = None

    def make(self, outer, holes=()) -> Cell:
        c = Cell.from_rings(outer, holes)
        hit = self.cells.get(c.key)
        if hit is not None:
            return hit
        c = c.with_points(self.S)
        if len(self.cells) >= self.max_cells:
            raise CapacityExceeded(f"more than {self.max_cells} cells")
        self.cells[c.key] = c
        return c

    def count_partition(self) -> None:
        self.n_partitions += 1
        if self.n_partitions > self.max_partitions:
            raise CapacityExceeded(f"more than {self.max_partitions} partitions")

    def boundary_dp_points(self, Q: Cell) -> list:
        out = []
        for p in self.dp_all:
            if any(on_segment(p, a, b) for a, b in Q.edges()):
                out.append(p)
        return sorted(out)

    def interior_dp_points(self, Q: Cell) -> list:
        return sorted(p for p in self.dp_all if point_in_polygon(p, Q) is Location.INTERIOR)

    @property
    def input_edges(self) -> list:
        if self._edges is None:
            S = self.S
            self._edges = [
                (rat(S[i]), rat(S[j])) for i, j in combinations(range(len(S)), 2)
                if not any(in_open_segment(S[m], S[i], S[j]) for m in range(len(S)))
            ]
        return self._edges

    # chord candidates ------------------------------------------------------

    def _chords_binary(self, Q: Cell) -> list:
        ring = Q.outer
        xmin = min(v[0] for v in ring)
        xmax = max(v[0] for v in ring)
        chords = []
        for c in self.xs:
            if not xmin < c < xmax:
                continue
            hits = set()
            for a, b in Q.edges():
                if (a[0] - c) * (b[0] - c) <= 0 and a[0] != b[0]:
                    t = Fraction(c - a[0]) / (b[0] - a[0])
                    hits.add(RatPoint(Fraction(c), a[1] + t * (b[1] - a[1])))
            if len(hits) == 2:
                p, q = sorted(hits)
                if p in self.dp_all and q in self.dp_all:
                    chords.append((p, q))
        on_boundary = [p for p in map(rat, self.S)
                       if point_in_polygon(p, Q) is Location.BOUNDARY]
        bset = set(on_boundary)
        for p, q in self.input_edges:
            if p in bset and q in bset:
                mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
                if point_in_polygon(mid, Q) is Location.INTERIOR:
                    chords.append((p, q))
        return chords

    def _chords_triquad(self, Q: Cell) -> list:
        bpts = self.boundary_dp_points(Q)
        chords = []
        for p, q in combinations(bpts, 2):
            mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
            if point_in_polygon(mid, Q) is Location.INTERIOR:
                chords.append((p, q))
        return chords

    # partition generators ----------------------------------------------------

    def partitions(self, Q: Cell) -> Iterator[Partition]:
        if self.family is CellFamily.EXHAUSTIVE:
            yield from self._exhaustive_partitions(Q)
            return
        seen = set()
        limit = min(self.k, 4) if self.family is CellFamily.TRIQUAD else self.k
        chords = (self._chords_binary(Q) if self.family is CellFamily.BINARY_CUT
                  else self._chords_triquad(Q))
        for p, q in chords:
            rings = split_convex(Q.outer, p, q)
            if rings is None or any(len(r) > limit for r in rings):
                continue
            yield from self._emit(Q, [self._peek(r) for r in rings], seen)
        if self.family is CellFamily.TRIQUAD and len(Q.outer) <= self.k:
            ring = Q.outer
            for c in self.interior_dp_points(Q):
                tris = [(c, ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
                yield from self._emit(Q, [self._peek(t) for t in tris], seen)

    def _peek(self, ring) -> Cell:
        c = Cell.from_rings(ring)
        return self.cells.get(c.key) or c.with_points(self.S)

    def _emit(self, Q: Cell, parts: list, seen: set) -> Iterator[Partition]:
        if not is_balanced(Q, parts):
            return
        key = tuple(sorted(p.key for p in parts))
        if key in seen:
            return
        seen.add(key)
        self.count_partition()
        parts = [self.make(p.outer, p.holes) for p in parts]
        yield Partition(tuple(sorted(parts, key=lambda c: c.key)))

    # exhaustive ------------------------------------------------------------------

    def exhaustive_catalog(self, root: Cell) -> list:
        pool = sorted({rat(p) for p in self.S} | set(root.outer))
        for size in range(3, min(self.k, 4) + 1):
            for combo in combinations(pool, size):
                ring = _convex_ring(combo)
                if ring is not None:
                    self.make(ring)
        return list(self.cells.values())

    def _exhaustive_partitions(self, Q: Cell) -> Iterator[Partition]:
        target = Q.area
        inside = [c for c in self.cells.values()
                  if c.key != Q.key and c.area < target and cell_contains(Q, c)]
        inside.sort(key=lambda c: (-c.area, c.key))
        lim = balance_limit(len(Q.contained_points))
        if lim is not None:
            inside = [c for c in inside if len(c.contained_points) <= lim]
        first_vertex = Q.outer[0]
        overlap_memo: dict = {}

        def disjoint(a, b):
            key = (a.key, b.key)
            if key not in overlap_memo:
                overlap_memo[key] = not interiors_overlap(a, b)
            return overlap_memo[key]

        found = []

        def rec(start, chosen, area):
            if area == target:
                if len(chosen) >= 2 and any(first_vertex in c.outer for c in chosen):
                    found.append(tuple(chosen))
                return
            slots = self.k - len(chosen)
            if slots == 0:
                return
            for i in range(start, len(inside)):
                c = inside[i]
                if area + c.area * slots < target:
                    break
                if area + c.area > target:
                    continue
                if all(disjoint(c, d) for d in chosen):
                    chosen.append(c)
                    rec(i + 1, chosen, area + c.area)
                    chosen.pop()

        rec(0, [], Fraction(0))
        for parts in found:
            self.count_partition()
            yield Partition(tuple(sorted(parts, key=lambda c: c.key)))


def _convex_ring(points) -> tuple | None:
    """CCW convex ring through all ``points`` (None if they are not in convex position)."""
    from .geom import convex_hull

    pts = list(points)
    hull = convex_hull(pts)
    if len(hull) != len(pts):
        return None
    ring = tuple(pts[i] for i in hull)
    return ring if _is_convex(ring) else None


def build_cell_catalog(dps: DPPointSet, S: Sequence, k: int,
                       family: CellFamily | str = CellFamily.BINARY_CUT,
                       delta: int | None = None, max_cells: int | None = None,
                       max_partitions: int | None = None) -> Catalog:
    """Cells reachable from the bounding box, sorted by containment.

    Cells holding more than ``delta`` points are expanded through their
    balanced partitions; smaller cells are leaves.  ``delta=None`` expands
    every cell with at least three points.
    """
    family = CellFamily(family)
    b = _Builder(dps, S, k, family,
                 DEFAULT_MAX_CELLS if max_cells is None else max_cells,
                 DEFAULT_MAX_PARTITIONS if max_partitions is None else max_partitions)
    root = b.make(box_cell(dps.box).outer)
    threshold = 2 if delta is None else delta
    partitions: dict = {}
    if family is CellFamily.EXHAUSTIVE:
        if len(S) > 8:
            raise CapacityExceeded("the exhaustive family is limited to 8 points")
        b.exhaustive_catalog(root)
        for cell in containment_order(list(b.cells.values())):
            if len(cell.contained_points) > threshold:
                partitions[cell.key] = [p.keys for p in b.partitions(cell)]
    else:
        stack = [root]
        done = set()
        while stack:
            cell = stack.pop()
            if cell.key in done or len(cell.contained_points) <= threshold:
                continue
            done.add(cell.key)
            parts = list(b.partitions(cell))
            partitions[cell.key] = [p.keys for p in parts]
            stack.extend(c for p in parts for c in p.parts if c.key not in done)
    cells = containment_order(list(b.cells.values()))
    return Catalog(cells, partitions, family, root)


def enumerate_partitions(Q: Cell, catalog: Catalog, k: int) -> Iterator[Partition]:
    """Balanced partitions of ``Q`` into at most ``k`` catalog cells, each verified."""
    idx = catalog.index()
    for keys in catalog.partitions.get(Q.key, ()):
        if len(keys) > k or any(key not in idx for key in keys):
            continue
        parts = [idx[key] for key in keys]
        verify_partition(Q, parts, k)
        yield Partition(tuple(parts))


def generate_partitions(Q: Cell, dps: DPPointSet, S: Sequence, k: int,
                        family: CellFamily | str = CellFamily.TRIQUAD) -> list:
    """Partitions of an arbitrary cell under a family, without building a catalog."""
    b = _Builder(dps, S, k, CellFamily(family), DEFAULT_MAX_CELLS, DEFAULT_MAX_PARTITIONS)
    Q = Q.with_points(S)
    if b.family is CellFamily.EXHAUSTIVE:
        b.exhaustive_catalog(Q)
    out = list(b.partitions(Q))
    for p in out:
        verify_partition(Q, p.parts, k)
    return out
