"""Command-line harness: exact and approximate counts, base estimates, audits and benchmarks."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .approx import Caps, DPConfig, approx_count, log2_ratio, ratio_audit
from .base import estimate_base, sanity_bounds
from .cuts import search_cut, triangulation_faces
from .dp import CellFamily, DPMode, build_cell_catalog, build_dp_points
from .empty_triangles import enumerate_empty
from .errors import CapacityExceeded, InvalidInput, TricountError
from .exact import count_triangulations, hull_boundary_size, initial_triangulation
from .io import GENERATORS, format_points, generate, read_points

ENVELOPE = 1.0  # bound on |log2(approx/exact)| / (n log2 n) used by audit verdicts

EPILOG = """\
caps can also be set through environment variables (flags win):
  TRICOUNT_MAX_TRIANGULATIONS  flip-graph enumeration cap
  TRICOUNT_MAX_CELLS           DP cell catalog cap
  TRICOUNT_MAX_PARTITIONS      DP partition cap
  TRICOUNT_MAX_DP_POINTS       DP point cap

exit codes: 0 ok, 2 invalid input, 3 capacity exceeded, 4 internal invariant violated
"""


def dumps(obj, compact: bool = False) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2)


def _json_float(v: float | None):
    if v is None or math.isfinite(v):
        return v
    return str(v)


# --- argument groups -----------------------------------------------------------


def add_caps(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("caps")
    g.add_argument("--max-triangulations", type=int)
    g.add_argument("--max-cells", type=int)
    g.add_argument("--max-partitions", type=int)
    g.add_argument("--max-dp-points", type=int)


def add_dp(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("dynamic program")
    g.add_argument("--k", type=int, default=4, help="max vertices per cell (default 4)")
    g.add_argument("--delta", type=int, default=6, help="base-case point threshold (default 6)")
    g.add_argument("--family", choices=[f.value for f in CellFamily], default=CellFamily.BINARY_CUT.value)
    g.add_argument("--dp-mode", choices=[m.value for m in DPMode], default=DPMode.BASIC_ONLY.value)
    g.add_argument("--threads", type=int, default=1, help="worker threads for base cases")
    add_caps(p)


def caps_of(args) -> Caps:
    return Caps.from_env(max_triangulations=args.max_triangulations, max_cells=args.max_cells,
                         max_partitions=args.max_partitions, max_dp_points=args.max_dp_points)


def config_of(args) -> DPConfig:
    if args.threads < 1:
        raise InvalidInput("--threads must be at least 1")
    return DPConfig(k=args.k, delta=args.delta, family=args.family, caps=caps_of(args),
                    dp_mode=args.dp_mode, threads=args.threads)


# --- commands ----------------------------------------------------------------------


def cmd_exact(args, out) -> int:
    pts = read_points(args.file)
    clock = time.perf_counter()
    count = count_triangulations(pts, caps_of(args).max_triangulations)
    h = hull_boundary_size(pts)
    if args.json:
        doc = {"n": len(pts), "count": str(count), "hull": h, "edges": 3 * len(pts) - 3 - h}
        if args.timings:
            doc["seconds"] = time.perf_counter() - clock
        print(dumps(doc), file=out)
    else:
        print(count, file=out)
    return 0


def cmd_approx(args, out) -> int:
    pts = read_points(args.file)
    cfg = config_of(args)
    value, table, stats = approx_count(pts, cfg)
    if args.json:
        print(dumps({"count": str(value), "config": cfg.to_json(),
                     "stats": stats.to_json(args.timings)}), file=out)
    else:
        print(value, file=out)
        for key, v in stats.to_json(args.timings).items():
            print(f"{key}: {v}", file=out)
    return 0


def cmd_base(args, out) -> int:
    pts = read_points(args.file)
    if not 0 < args.epsilon < 0.5:
        raise InvalidInput("--epsilon must lie in (0, 1/2)")
    if args.count is not None:
        lam, source = int(args.count), "given"
    elif args.approx:
        lam, source = approx_count(pts, config_of(args))[0], "approx"
    else:
        lam, source = count_triangulations(pts, caps_of(args).max_triangulations), "exact"
    est = estimate_base(lam, len(pts), args.epsilon)
    doc = est.to_json()
    doc["source"] = source
    doc["sanity"] = sanity_bounds(est.base)
    print(dumps(doc), file=out)
    return 0


def cmd_gen(args, out) -> int:
    text = format_points(generate(args.kind, args.n, args.seed), args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return 0


def fact2_check(pts: Sequence, alpha: float = 0.5, l: int = 4) -> dict:
    """Search a balanced cheap cut on the faces of one triangulation of ``pts``."""
    faces = triangulation_faces(pts, initial_triangulation(pts))
    doc = {"faces": len(faces), "alpha": str(alpha), "l": l, "family": "rectangles"}
    if 3 * max(f.weight for f in faces) > sum(f.weight for f in faces):
        doc["status"] = "skipped: fewer than three faces"
        return doc
    report = search_cut(faces, alpha, l, points=pts)
    doc["status"] = "found" if report else "not_found"
    doc["report"] = report.to_json() if report else None
    return doc


def bench_row(kind: str, n: int, seed: int, pts: Sequence, cfg: DPConfig,
              with_exact: bool = True, timings: bool = False) -> dict:
    clock = time.perf_counter()
    exact = count_triangulations(pts, cfg.caps.max_triangulations) if with_exact else None
    t_exact = time.perf_counter() - clock
    value, table, stats = approx_count(pts, cfg)
    ratio = log2_ratio(value, exact) / len(pts) if exact else None
    row = {
        "generator": kind, "n": n, "seed": seed,
        "exact": None if exact is None else str(exact),
        "approx": str(value),
        "log2_ratio_per_n": _json_float(ratio),
        "config": cfg.to_json(),
        "cells": stats.cells, "partitions": stats.partitions,
        "evaluated_cells": stats.evaluated_cells, "base_cells": stats.base_cells,
        "warnings": stats.warnings,
    }
    if timings:
        row["seconds"] = {"exact": t_exact, **stats.seconds}
    return row


def cmd_audit(args, out) -> int:
    pts = read_points(args.file)
    cfg = config_of(args)
    audit, table, stats = ratio_audit(pts, cfg)
    n = len(pts)
    within = math.isfinite(audit.log2_ratio_per_point) and \
        abs(audit.log2_ratio_per_point) / math.log2(n) <= ENVELOPE
    ok = audit.approx > 0 and table.replay() and within
    doc = {
        "row": {"file": str(args.file), "n": n, "exact": str(audit.exact), "approx": str(audit.approx),
                "log2_ratio_per_n": _json_float(audit.log2_ratio_per_point),
                "config": cfg.to_json(), "stats": stats.to_json(args.timings)},
        "warnings": list(audit.warnings),
        "table": table.to_json(),
        "fact2": fact2_check(pts, args.alpha, args.cut_edges),
        "verdict": "PASS" if ok else "FAIL",
    }
    print(dumps(doc), file=out)
    return 0


def cmd_bench(args, out) -> int:
    cfg = config_of(args)
    rows = []
    for kind in args.generator:
        for n in args.n:
            for seed in args.seed:
                pts = generate(kind, n, seed)
                try:
                    row = bench_row(kind, n, seed, pts, cfg, not args.no_exact, args.timings)
                except CapacityExceeded as e:
                    row = {"generator": kind, "n": n, "seed": seed, "config": cfg.to_json(),
                           "error": f"capacity exceeded: {e}"}
                rows.append(row)
                print(dumps(row, compact=True), file=out)
    if args.out:
        with open(args.out, "a") as fh:
            for row in rows:
                fh.write(dumps(row, compact=True) + "\n")
    return 0


def cmd_catalog(args, out) -> int:
    pts = read_points(args.file)
    cfg = config_of(args)
    dps = build_dp_points(enumerate_empty(pts), cfg.dp_mode, cfg.caps.max_dp_points)
    cat = build_cell_catalog(dps, pts, cfg.k, cfg.family, cfg.delta,
                             cfg.caps.max_cells, cfg.caps.max_partitions)
    print(dumps(cat.to_json()), file=out)
    return 0


def cmd_accept(args, out) -> int:
    from .acceptance import run_all

    results = run_all(args.only)
    for r in results:
        print(r.line(), file=out)
    return 0 if all(r.passed for r in results) else 1


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tricount", description=__doc__, epilog=EPILOG,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, fn, help_, file_arg=True, json_flag=True):
        sp = sub.add_parser(name, help=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        if file_arg:
            sp.add_argument("file", help="point file (text 'x y' lines or JSON)")
        if json_flag:
            sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--timings", action="store_true", help="include wall-clock times")
        sp.set_defaults(func=fn)
        return sp

    sp = command("exact", cmd_exact, "exact count by flip-graph enumeration")
    add_caps(sp)

    sp = command("approx", cmd_approx, "approximate count by the cell DP")
    add_dp(sp)

    sp = command("base", cmd_base, "base |F(S)|^(1/n) with its error bracket (JSON)", json_flag=False)
    sp.add_argument("--epsilon", type=float, default=0.1)
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--exact", action="store_true", help="use the exact count (default)")
    src.add_argument("--approx", action="store_true", help="use the DP estimate")
    src.add_argument("--count", help="use this count instead of computing one")
    add_dp(sp)

    sp = command("gen", cmd_gen, "write a generated point set", file_arg=False, json_flag=False)
    sp.add_argument("kind", choices=GENERATORS)
    sp.add_argument("n", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("-o", "--output")

    sp = command("audit", cmd_audit, "exact vs approx, per-cell table and a cut spot-check (JSON)",
                 json_flag=False)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--cut-edges", type=int, default=4)
    add_dp(sp)

    sp = command("bench", cmd_bench, "benchmark rows as JSON lines", file_arg=False, json_flag=False)
    sp.add_argument("--generator", nargs="+", choices=GENERATORS, default=["random"])
    sp.add_argument("--n", nargs="+", type=int, default=[8, 10, 12])
    sp.add_argument("--seed", nargs="+", type=int, default=[0])
    sp.add_argument("--no-exact", action="store_true", help="skip the exact count")
    sp.add_argument("--out", help="append rows to this JSON-lines file")
    add_dp(sp)

    sp = command("catalog", cmd_catalog, "dump the DP cell catalog (JSON)", json_flag=False)
    add_dp(sp)

    sp = command("accept", cmd_accept, "run the acceptance criteria", file_arg=False, json_flag=False)
    sp.add_argument("--only", nargs="+", type=int, help="criterion numbers to run")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except TricountError as e:
        print(f"tricount: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except AssertionError as e:
        print(f"tricount: invariant violated: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
