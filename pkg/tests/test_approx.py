import math
import random

import pytest

from tricount.approx import (
    Caps,
    DPConfig,
    approx_count,
    evaluate,
    ratio_audit,
    suggest_parameters,
)
from tricount.dp import CellFamily, build_cell_catalog, build_dp_points
from tricount.empty_triangles import enumerate_empty
from tricount.errors import CapacityExceeded, InvalidInput, NoTriangulation
from tricount.exact import catalan, count_triangulations

from conftest import GRID3, TRI_PLUS_CENTER, convex_points, random_points

CORPUS = ([convex_points(n) for n in range(4, 9)] + [GRID3, TRI_PLUS_CENTER]
          + [random_points(n, s) for n in (6, 8, 10) for s in range(3)])


def test_config_validation():
    with pytest.raises(InvalidInput):
        DPConfig(k=2)
    with pytest.raises(InvalidInput):
        DPConfig(delta=2)
    assert DPConfig(family="triquad").family is CellFamily.TRIQUAD


def test_convex6_saturated():
    value, table, stats = approx_count(convex_points(6), DPConfig(k=4, delta=6))
    assert value == 14 == catalan(4)
    assert stats.base_cells == 1 and table.replay()


@pytest.mark.parametrize("S", CORPUS, ids=lambda S: f"n{len(S)}")
def test_exact_at_saturation(S):
    for family in CellFamily:
        if family is CellFamily.EXHAUSTIVE and len(S) > 8:
            continue
        value, _, _ = approx_count(S, DPConfig(k=4, delta=len(S), family=family))
        assert value == count_triangulations(S)


def test_random10_binary_cut_positive():
    S = random_points(10, 0)
    audit, table, stats = ratio_audit(S, DPConfig(k=4, delta=5))
    assert audit.approx > 0
    assert math.isfinite(audit.log2_ratio_per_point)
    assert abs(audit.log2_ratio_per_point) * len(S) <= len(S) * math.log2(len(S))
    assert table.replay()


def test_ratio_audit_examples():
    audit, _, _ = ratio_audit(convex_points(7), DPConfig(k=4, delta=7))
    assert audit.log2_ratio_per_point == 0.0
    audit, _, _ = ratio_audit(random_points(10, 1), DPConfig(k=4, delta=4))
    assert math.isfinite(audit.log2_ratio_per_point)
    # points on a circle leave binary cuts nothing to cut along below delta
    audit, _, _ = ratio_audit(convex_points(7), DPConfig(k=4, delta=4))
    assert audit.approx > 0 or any("UNDERFLOW" in w for w in audit.warnings)


def test_underflow_flagged():
    # everything on the left side of the box: no balanced cut exists
    S = [(0, 0), (0, 1), (0, 2), (0, 3), (3, 5)]
    audit, _, stats = ratio_audit(S, DPConfig(k=4, delta=3))
    assert audit.approx == 0
    assert audit.log2_ratio_per_point == -math.inf
    assert any("UNDERFLOW" in w for w in audit.warnings)
    assert audit.to_json()["log2_ratio_per_point"] == "-inf"


def test_invalid_inputs():
    with pytest.raises(NoTriangulation):
        approx_count([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(InvalidInput):
        approx_count([(0, 0), (1, 1)])


def test_caps():
    with pytest.raises(CapacityExceeded):
        approx_count(random_points(10, 1), DPConfig(k=4, delta=4, caps=Caps(max_cells=2)))


@pytest.mark.parametrize("seed", range(4))
def test_monotone_in_partition_family(seed):
    S = random_points(10, seed)
    cfg = DPConfig(k=4, delta=4)
    dps = build_dp_points(enumerate_empty(S))
    full = build_cell_catalog(dps, S, cfg.k, cfg.family, cfg.delta)
    top = evaluate(full, S, cfg)[full.root.key]
    rng = random.Random(seed)
    for _ in range(3):
        pruned = build_cell_catalog(dps, S, cfg.k, cfg.family, cfg.delta)
        pruned.partitions = {key: [p for p in parts if rng.random() < 0.6]
                             for key, parts in pruned.partitions.items()}
        assert evaluate(pruned, S, cfg)[pruned.root.key] <= top


@pytest.mark.parametrize("seed", range(3))
def test_deterministic_across_threads(seed):
    S = random_points(11, seed)
    runs = [approx_count(S, DPConfig(k=4, delta=5, threads=t)) for t in (1, 4, 1)]
    values = {r[0] for r in runs}
    assert len(values) == 1
    assert len({str(r[1].to_json()) for r in runs}) == 1
    assert len({str(r[2].to_json()) for r in runs}) == 1


def test_table_replay_and_base_entries():
    from tricount.exact import count_maximal_in_cell

    S = random_points(10, 2)
    cfg = DPConfig(k=4, delta=4)
    value, table, stats = approx_count(S, cfg)
    assert table.replay()
    idx = table.catalog.index()
    for key, e in table.entries.items():
        if e.provenance == "base":
            assert e.value == count_maximal_in_cell(idx[key], S)
            assert e.points <= cfg.delta
        else:
            assert e.points > cfg.delta
    # tampering is caught
    some = next(k for k, e in table.entries.items() if e.provenance == "recurrence")
    table.entries[some].value += 1
    assert not table.replay()


def test_positive_when_chain_exists():
    for seed in range(6):
        S = random_points(9, seed)
        value, table, _ = approx_count(S, DPConfig(k=4, delta=5))
        root = table.catalog.root.key
        has_chain = _chain_exists(table, root)
        assert (value >= 1) == has_chain


def _chain_exists(table, key):
    e = table.entries[key]
    if e.provenance == "base":
        return True
    return any(all(_chain_exists(table, c) for c in part) for part in e.partitions)


def test_suggest_parameters():
    s = suggest_parameters(100, 0.25)
    assert s["k"] >= 3 and s["delta"] >= s["k"]
    assert suggest_parameters(100, 0.1)["k"] > s["k"]
    with pytest.raises(InvalidInput):
        suggest_parameters(10, 1.5)
