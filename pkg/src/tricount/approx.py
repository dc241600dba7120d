"""Approximate triangulation counting by dynamic programming over DP cells.

Cells with at most ``delta`` input points get the exact number of maximal
triangulations within the cell.  Every larger cell sums, over its balanced
partitions, the product of the children's values.  The value of the
bounding box is the estimate.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .dp import (
    DEFAULT_MAX_CELLS,
    DEFAULT_MAX_DP_POINTS,
    DEFAULT_MAX_PARTITIONS,
    Catalog,
    CellFamily,
    DPMode,
    build_cell_catalog,
    build_dp_points,
    enumerate_partitions,
)
from .empty_triangles import as_points, enumerate_empty
from .errors import InvalidInput, InvariantViolation, NoTriangulation
from .exact import DEFAULT_MAX_TRIANGULATIONS, count_maximal_in_cell, count_triangulations
from .geom import all_collinear


@dataclass(frozen=True)
class Caps:
    max_triangulations: int = DEFAULT_MAX_TRIANGULATIONS
    max_cells: int = DEFAULT_MAX_CELLS
    max_partitions: int = DEFAULT_MAX_PARTITIONS
    max_dp_points: int = DEFAULT_MAX_DP_POINTS

    ENV = {
        "max_triangulations": "TRICOUNT_MAX_TRIANGULATIONS",
        "max_cells": "TRICOUNT_MAX_CELLS",
        "max_partitions": "TRICOUNT_MAX_PARTITIONS",
        "max_dp_points": "TRICOUNT_MAX_DP_POINTS",
    }

    @classmethod
    def from_env(cls, **overrides) -> "Caps":
        """Defaults, then environment variables, then non-None keyword overrides."""
        values = {}
        for name, var in cls.ENV.items():
            if overrides.get(name) is not None:
                values[name] = overrides[name]
            elif var in os.environ:
                try:
                    values[name] = int(os.environ[var])
                except ValueError:
                    raise InvalidInput(f"{var} must be an integer") from None
        return cls(**values)


@dataclass(frozen=True)
class DPConfig:
    k: int = 4
    delta: int = 6
    family: CellFamily = CellFamily.BINARY_CUT
    caps: Caps = field(default_factory=Caps)
    dp_mode: DPMode = DPMode.BASIC_ONLY
    threads: int = 1

    def __post_init__(self):
        if self.k < 3 or self.delta < 3:
            raise InvalidInput("k and delta must both be at least 3")
        object.__setattr__(self, "family", CellFamily(self.family))
        object.__setattr__(self, "dp_mode", DPMode(self.dp_mode))

    def to_json(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        d["dp_mode"] = self.dp_mode.value
        d.pop("threads")
        return d


@dataclass
class Entry:
    value: int
    provenance: str  # "base" or "recurrence"
    points: int
    partitions: list = field(default_factory=list)


@dataclass
class CountTable:
    entries: dict = field(default_factory=dict)
    catalog: Catalog | None = None

    def __getitem__(self, key) -> int:
        return self.entries[key].value

    def __contains__(self, key) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def replay(self) -> bool:
        """Re-evaluate every recurrence entry from its recorded partitions."""
        for key, e in self.entries.items():
            if e.provenance != "recurrence":
                continue
            total = sum(math.prod(self.entries[c].value for c in part) for part in e.partitions)
            if total != e.value:
                return False
        return True

    def to_json(self) -> list:
        idx = self.catalog.index() if self.catalog else {}
        out = []
        for cell in (self.catalog.cells if self.catalog else []):
            e = self.entries.get(cell.key)
            if e is None:
                continue
            out.append({
                "key": cell.key_hex,
                "outer": cell.to_json()["outer"],
                "holes": cell.to_json()["holes"],
                "points": e.points,
                "tr": str(e.value),
                "provenance": e.provenance,
                "partitions_used": len(e.partitions),
                "children": [[idx[c].key_hex for c in part] for part in e.partitions],
            })
        return out


@dataclass
class RunStats:
    n: int
    triangles: int = 0
    dp_points: int = 0
    cells: int = 0
    evaluated_cells: int = 0
    base_cells: int = 0
    partitions: int = 0
    family: str = ""
    warnings: list = field(default_factory=list)
    seconds: dict = field(default_factory=dict)

    def to_json(self, timings: bool = False) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("seconds")
        return d


def _check_input(S: Sequence) -> tuple:
    pts = as_points(S)
    if len(pts) < 3:
        raise InvalidInput("need at least 3 points")
    if all_collinear(pts):
        raise NoTriangulation("all points are collinear")
    return pts


def approx_count(S: Sequence, cfg: DPConfig | None = None) -> tuple:
    """Run the DP; returns ``(tr_of_bounding_box, CountTable, RunStats)``."""
    cfg = cfg or DPConfig()
    pts = _check_input(S)
    stats = RunStats(n=len(pts), family=cfg.family.value)
    clock = time.perf_counter()

    universe = enumerate_empty(pts)
    stats.triangles = len(universe)
    dps = build_dp_points(universe, cfg.dp_mode, cfg.caps.max_dp_points)
    stats.dp_points = len(dps)
    t1 = time.perf_counter()
    catalog = build_cell_catalog(dps, pts, cfg.k, cfg.family, cfg.delta,
                                 cfg.caps.max_cells, cfg.caps.max_partitions)
    stats.cells = len(catalog.cells)
    t2 = time.perf_counter()

    table = evaluate(catalog, pts, cfg, stats)
    t3 = time.perf_counter()
    stats.seconds = {"catalog": t2 - t1, "dp": t3 - t2, "total": t3 - clock}
    return table[catalog.root.key], table, stats


def evaluate(catalog: Catalog, pts: Sequence, cfg: DPConfig, stats: RunStats | None = None) -> CountTable:
    """Fill the count table bottom-up over ``catalog`` for the cells the root can reach."""
    stats = stats if stats is not None else RunStats(n=len(pts), family=cfg.family.value)
    # evaluate only what the bounding box can reach
    idx = catalog.index()
    needed = {catalog.root.key}
    stack = [catalog.root.key]
    verified: dict = {}
    while stack:
        key = stack.pop()
        cell = idx[key]
        if len(cell.contained_points) <= cfg.delta:
            continue
        parts = [p.keys for p in enumerate_partitions(cell, catalog, cfg.k)]
        verified[key] = parts
        for keys in parts:
            for c in keys:
                if c not in needed:
                    needed.add(c)
                    stack.append(c)

    base = [c for c in catalog.cells if c.key in needed and len(c.contained_points) <= cfg.delta]

    def base_value(cell):
        return count_maximal_in_cell(cell, pts, cfg.caps.max_triangulations)

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            values = list(pool.map(base_value, base))
    else:
        values = [base_value(c) for c in base]
    table = CountTable(catalog=catalog)
    for cell, v in zip(base, values):
        table.entries[cell.key] = Entry(v, "base", len(cell.contained_points))

    for cell in catalog.cells:
        if cell.key not in needed or cell.key in table:
            continue
        used = [keys for keys in verified.get(cell.key, ()) if all(c in table for c in keys)]
        if len(used) != len(verified.get(cell.key, ())):
            raise InvariantViolation("a child cell was not evaluated before its parent")
        value = sum(math.prod(table[c] for c in keys) for keys in used)
        table.entries[cell.key] = Entry(value, "recurrence", len(cell.contained_points), used)
        stats.partitions += len(used)

    for key, e in table.entries.items():
        if e.value == 0 and key != catalog.root.key:
            stats.warnings.append(f"cell {idx[key].key_hex} with {e.points} points has tr = 0")
    result = table[catalog.root.key]
    if result == 0:
        stats.warnings.append("UNDERFLOW: no partition chain reaches the base cases")
    stats.evaluated_cells = len(table)
    stats.base_cells = len(base)
    return table


@dataclass(frozen=True)
class RatioAudit:
    exact: int
    approx: int
    log2_ratio_per_point: float
    warnings: tuple = ()

    def to_json(self) -> dict:
        r = self.log2_ratio_per_point
        return {"exact": str(self.exact), "approx": str(self.approx),
                "log2_ratio_per_point": r if math.isfinite(r) else str(r),
                "warnings": list(self.warnings)}


def log2_ratio(approx: int, exact: int) -> float:
    if approx == 0:
        return -math.inf
    return math.log2(approx) - math.log2(exact)


def ratio_audit(S: Sequence, cfg: DPConfig | None = None) -> tuple:
    """Exact and approximate counts side by side; returns ``(RatioAudit, table, stats)``."""
    cfg = cfg or DPConfig()
    pts = _check_input(S)
    exact = count_triangulations(pts, cfg.caps.max_triangulations)
    approx, table, stats = approx_count(pts, cfg)
    r = log2_ratio(approx, exact) / len(pts)
    warnings = tuple(stats.warnings)
    if approx == 0:
        warnings += ("UNDERFLOW: approximate count is 0",)
    return RatioAudit(exact, approx, r, warnings), table, stats


def suggest_parameters(n: int, epsilon: float, k_const: float = 1.0,
                       delta_const: float = 1.0) -> dict:
    """Reporting helper: k ~ log^2(n/eps)/eps and delta ~ k^2 log^2(n)/eps, scaled by constants."""
    if not 0 < epsilon < 1:
        raise InvalidInput("epsilon must lie in (0, 1)")
    k = max(3, math.ceil(k_const * math.log2(n / epsilon) ** 2 / epsilon))
    delta = max(3, math.ceil(delta_const * k * k * math.log2(max(n, 2)) ** 2 / epsilon))
    return {"k": k, "delta": delta, "k_const": k_const, "delta_const": delta_const}
