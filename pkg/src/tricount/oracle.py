"""Independent brute-force triangulation counter.

Counts maximal sets of pairwise non-crossing segments directly, by an
include/exclude search over the candidate segments.  It shares nothing with
the flip-graph engine except the predicates in :mod:`tricount.geom`, so the
two counts can be compared as independent routes.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .errors import CapacityExceeded, InvalidInput
from .geom import Crossing, on_segment, segments_cross

MAX_ORACLE_POINTS = 12


def brute_force_oracle(S: Sequence) -> int:
    pts = [tuple(p) for p in S]
    n = len(pts)
    if n > MAX_ORACLE_POINTS:
        raise CapacityExceeded(f"oracle is limited to {MAX_ORACLE_POINTS} points, got {n}")
    if n < 3 or len(set(pts)) != n:
        raise InvalidInput("need at least 3 distinct points")

    segs = []
    for i, j in combinations(range(n), 2):
        blocked = any(m not in (i, j) and on_segment(pts[m], pts[i], pts[j]) for m in range(n))
        if not blocked:
            segs.append((pts[i], pts[j]))
    m = len(segs)
    bad = [0] * m
    for a, b in combinations(range(m), 2):
        if segments_cross(segs[a], segs[b]) not in (Crossing.DISJOINT, Crossing.SHARE_ENDPOINT_ONLY):
            bad[a] |= 1 << b
            bad[b] |= 1 << a
    later = [((1 << m) - 1) ^ ((1 << (k + 1)) - 1) for k in range(m)]

    def search(k: int, chosen: int, blocked: int, pending: tuple) -> int:
        # pending: skipped segments not yet crossed by any chosen segment
        if k == m:
            return 1 if not pending else 0
        if blocked >> k & 1:
            return search(k + 1, chosen, blocked, pending)
        total = 0
        # take segment k
        nb = blocked | bad[k]
        still = tuple(u for u in pending if not bad[u] >> k & 1)
        live = later[k] & ~nb
        if all(bad[u] & live for u in still):
            total += search(k + 1, chosen | 1 << k, nb, still)
        # skip segment k: something later must cross it
        live = later[k] & ~blocked
        if bad[k] & live:
            pend = pending + (k,)
            if all(bad[u] & live for u in pend):
                total += search(k + 1, chosen, blocked, pend)
        return total

    return search(0, 0, 0, ())
