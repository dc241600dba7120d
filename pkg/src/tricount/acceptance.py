"""The acceptance criteria as runnable checks.

Each ``criterion_N`` returns a :class:`Result` with a pass flag and a short
detail string carrying the measured numbers.  ``run_all`` drives them for the
``tricount accept`` command and the acceptance test module.
"""

from __future__ import annotations

import io
import math
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from statistics import median
from typing import Callable

from .approx import DPConfig, approx_count, log2_ratio
from .cuts import CutPolygon, search_cut, triangulation_faces, verify_cut
from .errors import InvalidInput
from .exact import (
    catalan,
    count_triangulations,
    enumerate_triangulations,
    hull_boundary_size,
    initial_triangulation,
)
from .io import format_points, generate
from .oracle import brute_force_oracle

RANDOM_SEEDS = 50


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict, repr=False)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} -- {self.detail}"


def suite() -> list:
    """(label, points) pairs: convex n=4..10, the 3x3 grid, a triangle with its centre, and random sets."""
    out = [(f"convex{n}", generate("convex", n)) for n in range(4, 11)]
    out.append(("grid3x3", generate("grid", 9)))
    out.append(("tri+center", [(0, 0), (4, 0), (0, 4), (1, 1)]))
    # n cycles through 5..10 so every size is covered several times
    out += [(f"random{5 + s % 6}-s{s}", generate("random", 5 + s % 6, s)) for s in range(RANDOM_SEEDS)]
    return out


def criterion_1() -> Result:
    from .cli import main

    got, slow = {}, []
    with tempfile.TemporaryDirectory() as tmp:
        for n in range(4, 11):
            path = Path(tmp) / f"convex{n}.txt"
            path.write_text(format_points(generate("convex", n)))
            buf = io.StringIO()
            clock = time.perf_counter()
            main(["exact", str(path)], out=buf)
            if time.perf_counter() - clock >= 10:
                slow.append(n)
            got[n] = int(buf.getvalue())
    expected = {n: catalan(n - 2) for n in range(4, 11)}
    ok = got == expected and not slow and [expected[n] for n in range(4, 11)] == [2, 5, 14, 42, 132, 429, 1430]
    return Result(1, "Catalan conformance", ok, f"counts {[got[n] for n in range(4, 11)]}, slow runs {slow}")


def criterion_2() -> Result:
    clock = time.perf_counter()
    cases = [(label, S) for label, S in suite() if label.startswith("random") or label == "grid3x3"]
    bad = [label for label, S in cases if count_triangulations(S) != brute_force_oracle(S)]
    secs = time.perf_counter() - clock
    ok = not bad and len(cases) >= RANDOM_SEEDS + 1 and secs < 300
    return Result(2, "oracle equivalence", ok, f"{len(cases)} sets, mismatches {bad}, {secs:.1f}s")


def criterion_3() -> Result:
    bad, total = [], 0
    for label, S in suite():
        expected = 3 * len(S) - 3 - hull_boundary_size(S)
        first = [t.edges for t in enumerate_triangulations(S, variant=0)]
        second = {t.edges for t in enumerate_triangulations(S, variant=1)}
        total += len(first)
        if any(len(t) != expected for t in first) or set(first) != second or len(first) != len(second):
            bad.append(label)
    return Result(3, "flip-graph well-formedness", not bad,
                  f"{total} triangulations checked, failures {bad}")


def criterion_4() -> Result:
    bad = []
    for label, S in suite():
        value, _, _ = approx_count(S, DPConfig(k=4, delta=len(S)))
        if value != count_triangulations(S):
            bad.append(label)
    return Result(4, "base-case saturation", not bad, f"{len(suite())} instances, failures {bad}")


def ratio_runs() -> list:
    runs = []
    for n in (8, 10, 12):
        for seed in range(3):
            S = generate("random", n, seed)
            exact = count_triangulations(S)
            for delta in (4, 5, 6):
                value, _, stats = approx_count(S, DPConfig(k=4, delta=delta))
                r = log2_ratio(value, exact)
                runs.append({"n": n, "seed": seed, "delta": delta, "exact": exact, "approx": value,
                             "scaled": abs(r) / (n * math.log2(n)) if value else math.inf})
    return runs


def criterion_5() -> Result:
    runs = ratio_runs()
    scaled = [r["scaled"] for r in runs]
    ok = len(runs) >= 20 and all(r["approx"] > 0 for r in runs) and max(scaled) <= 1.0
    detail = (f"{len(runs)} runs, |log2 ratio|/(n log2 n): min {min(scaled):.3f} "
              f"median {median(scaled):.3f} max {max(scaled):.3f}")
    return Result(5, "approximation sanity", ok, detail, {"runs": runs})


ROW = [((0, 0), (1, 0), (0, 1)), ((3, 0), (4, 0), (3, 1)), ((6, 0), (7, 0), (6, 1))]


def cut_configurations() -> list:
    """Nine constructed (name, check) pairs; each check returns True when the verifier behaves as specified."""
    third = Fraction(1, 3)
    unit = [(t, 1) for t in ROW]
    middle = CutPolygon(((2, -1), (5, -1), (5, 2), (2, 2)))

    def report(cut, T=unit, alpha=third, l=4):
        return verify_cut(cut, T, alpha, l)

    def touching():
        T = [(((0, 0), (2, 0), (0, 2)), 1), (((2, 0), (4, 0), (3, 2)), 1), (ROW[2], 1)]
        try:
            verify_cut(middle, T, third, 4)
        except InvalidInput:
            return True
        return False

    def partitioned(r):
        return r.destroyed_weight + r.inside_weight + r.outside_weight == 1

    return [
        ("box around the middle triangle", lambda: (r := report(middle)).verdict
         and (r.destroyed_weight, r.inside_weight, r.outside_weight) == (0, third, 2 * third)),
        ("cut crossing two of three", lambda: not (r := report(CutPolygon(
            ((0, Fraction(1, 4)), (4, Fraction(1, 4)), (4, 2), (0, 2))))).verdict
         and r.destroyed_weight == 2 * third),
        ("cut containing everything", lambda: not (r := report(CutPolygon(
            ((-1, -1), (8, -1), (8, 2), (-1, 2))))).verdict and r.inside_weight == 1),
        ("touching triangles rejected", touching),
        ("hexagon over the edge budget", lambda: not report(CutPolygon(
            ((2, 0), (3, -1), (4, -1), (5, 0), (4, 2), (3, 2)))).clauses["edges_at_most_l"]),
        ("single-point contact destroys", lambda: (r := report(CutPolygon(
            ((1, 0), (5, -1), (5, 2), (2, 2))))).destroyed_weight == third and r.verdict),
        ("scaling weights keeps the verdict", lambda: report(middle).to_json()
         == report(middle, [(t, 7) for t in ROW]).to_json()),
        ("inside weight exactly two thirds", lambda: report(middle, list(zip(ROW, (1, 4, 1)))).verdict
         and not report(middle, list(zip(ROW, (1, 5, 1)))).verdict),
        ("empty region leaves all outside", lambda: partitioned(r := report(CutPolygon(
            ((10, 10), (12, 10), (12, 12), (10, 12))))) and r.outside_weight == 1 and not r.verdict),
    ]


def criterion_6() -> Result:
    failed = [name for name, check in cut_configurations() if not check()]
    found, total, unverified = 0, 0, []
    for label, S in suite():
        if len(S) < 9:
            continue
        total += 1
        faces = triangulation_faces(S, initial_triangulation(S))
        r = search_cut(faces, 0.5, 4, points=S)
        if r is None:
            continue
        found += 1
        if not verify_cut(r.cut, faces, 0.5, 4, allow_shared_boundary=True).verdict:
            unverified.append(label)
    rate = found / total if total else 0.0
    ok = not failed and rate >= 0.9 and not unverified
    return Result(6, "cut verifier and search", ok,
                  f"9 configurations, failures {failed}; cuts found on {found}/{total} "
                  f"instances with n >= 9 ({rate:.0%}), unverified {unverified}")


def criterion_7() -> Result:
    from .cli import main

    mismatched = []
    with tempfile.TemporaryDirectory() as tmp:
        files = {}
        for kind, n, seed in (("convex", 7, 0), ("random", 10, 1), ("grid", 9, 0)):
            path = Path(tmp) / f"{kind}{n}.txt"
            path.write_text(format_points(generate(kind, n, seed)))
            files[kind] = str(path)
        commands = [
            ["exact", files["convex"], "--json"],
            ["approx", files["random"], "--json", "--delta", "5"],
            ["approx", files["grid"], "--json", "--delta", "4", "--family", "triquad"],
            ["base", files["random"], "--approx", "--delta", "5"],
            ["audit", files["random"], "--delta", "5"],
            ["catalog", files["random"], "--delta", "5"],
            ["gen", "random", "12", "--seed", "3", "--format", "json"],
            ["bench", "--n", "8", "9", "--seed", "0", "1", "--delta", "4"],
        ]
        for cmd in commands:
            outputs = set()
            for threads in ("1", "4", "1"):
                buf = io.StringIO()
                extra = [] if cmd[0] in ("gen", "exact") else ["--threads", threads]
                main(cmd + extra, out=buf)
                outputs.add(buf.getvalue())
            if len(outputs) != 1:
                mismatched.append(" ".join(cmd[:1]))
    return Result(7, "determinism", not mismatched,
                  f"{len(commands)} commands x threads 1/4/1, mismatches {mismatched}")


def loglog_slope(ns: list, values: list) -> float:
    xs = [math.log(n) for n in ns]
    ys = [math.log(max(v, 1)) for v in values]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


def criterion_8() -> Result:
    ns = (8, 10, 12)
    cells, parts = [], []
    for n in ns:
        c, p = [], []
        for seed in range(3):
            _, _, stats = approx_count(generate("random", n, seed), DPConfig(k=4, delta=4))
            c.append(stats.cells)
            p.append(stats.partitions)
        cells.append(median(c))
        parts.append(median(p))
    sc, sp = loglog_slope(list(ns), cells), loglog_slope(list(ns), parts)
    ok = sc < 8 and sp < 8
    return Result(8, "runtime profile", ok,
                  f"median cells {cells}, partitions {parts}, log-log slopes {sc:.2f} / {sp:.2f}")


CRITERIA: dict[int, Callable[[], Result]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
}


def run_all(only=None) -> list:
    return [CRITERIA[i]() for i in sorted(only or CRITERIA)]
