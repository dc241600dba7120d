"""Point-set files and seeded generators."""

from __future__ import annotations

import json
import math
import random
from pathlib import Path
from typing import Sequence

from .empty_triangles import as_points
from .errors import InvalidInput
from .geom import all_collinear, convex_hull

FORMAT_VERSION = 1
COORD_LIMIT = 10 ** 6
GENERATORS = ("convex", "grid", "random")


def parse_points(text: str) -> tuple:
    """Parse whitespace text ("x y" per line, '#' comments) or JSON."""
    body = text.lstrip()
    if body.startswith("[") or body.startswith("{"):
        try:
            data = json.loads(body)
        except json.JSONDecodeError as e:
            raise InvalidInput(f"bad JSON point file: {e}") from None
        if isinstance(data, dict):
            data = data.get("points")
        if not isinstance(data, list):
            raise InvalidInput("JSON point file must be an array of [x, y] or hold one under 'points'")
        raw = data
    else:
        raw = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidInput(f"line {lineno}: expected 'x y'")
            try:
                raw.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise InvalidInput(f"line {lineno}: coordinates must be integers") from None
    pts = []
    for p in raw:
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise InvalidInput(f"bad point record {p!r}")
        pts.append(tuple(p))
    return as_points(pts)


def read_points(path: str | Path) -> tuple:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e.strerror}") from None
    return parse_points(text)


def format_points(points: Sequence, fmt: str = "text") -> str:
    pts = as_points(points)
    if fmt == "json":
        return json.dumps({"version": FORMAT_VERSION, "n": len(pts),
                           "points": [[p.x, p.y] for p in pts]}) + "\n"
    if fmt != "text":
        raise InvalidInput(f"unknown point format {fmt!r}")
    lines = [f"# tricount points v{FORMAT_VERSION} n={len(pts)}"]
    lines += [f"{p.x} {p.y}" for p in pts]
    return "\n".join(lines) + "\n"


def gen_convex(n: int, seed: int = 0) -> list:
    """Integer points in strictly convex position, jittered around a circle."""
    rng = random.Random(seed)
    jitter = [rng.random() * 0.5 for _ in range(n)]
    radius = max(1000, 10 * n * n)
    while radius <= COORD_LIMIT:
        pts = [(round(radius * math.cos(2 * math.pi * (i + jitter[i]) / n)),
                round(radius * math.sin(2 * math.pi * (i + jitter[i]) / n))) for i in range(n)]
        if len(set(pts)) == n and len(convex_hull(pts)) == n:
            return pts
        radius *= 2
    raise InvalidInput(f"cannot place {n} strictly convex points within the coordinate limit")


def gen_grid(n: int, seed: int = 0) -> list:
    side = math.isqrt(n - 1) + 1
    return [(i % side, i // side) for i in range(n)]


def gen_random(n: int, seed: int = 0) -> list:
    """Distinct uniform points in [0, 4n]^2, redrawn if they all fall on a line."""
    rng = random.Random(seed)
    span = 4 * n
    while True:
        seen: dict = {}
        while len(seen) < n:
            p = (rng.randint(0, span), rng.randint(0, span))
            seen.setdefault(p, None)
        pts = list(seen)
        if not all_collinear(pts):
            return pts


def generate(kind: str, n: int, seed: int = 0) -> list:
    if n < 3:
        raise InvalidInput("generators need n >= 3")
    try:
        fn = {"convex": gen_convex, "grid": gen_grid, "random": gen_random}[kind]
    except KeyError:
        raise InvalidInput(f"unknown generator {kind!r}") from None
    return fn(n, seed)
