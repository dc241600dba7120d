import math
import random

import pytest


def convex_points(n, radius=1000):
    # integer points on a circle; no three collinear at this radius for n <= 16
    return [(round(radius * math.cos(2 * math.pi * i / n)),
             round(radius * math.sin(2 * math.pi * i / n))) for i in range(n)]


def random_points(n, seed, span=None):
    rng = random.Random(seed)
    span = span or 4 * n
    pts = []
    seen = set()
    while len(pts) < n:
        p = (rng.randint(0, span), rng.randint(0, span))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return pts


GRID3 = [(x, y) for y in range(3) for x in range(3)]
TRI_PLUS_CENTER = [(0, 0), (4, 0), (0, 4), (1, 1)]
CONVEX5 = [(0, 0), (4, 0), (6, 3), (2, 6), (-2, 3)]


@pytest.fixture
def grid3():
    return list(GRID3)
