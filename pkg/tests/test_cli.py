import io
import json
import math

import pytest

from tricount.cli import main
from tricount.errors import InvalidInput
from tricount.exact import count_triangulations
from tricount.io import format_points, generate, parse_points, read_points
from tricount.oracle import brute_force_oracle


def run(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, pts, fmt="text"):
        path = tmp_path / name
        path.write_text(format_points(pts, fmt))
        return path
    return _write


def test_exact_examples(write):
    assert run("exact", write("convex6.txt", generate("convex", 6))) == (0, "14\n")
    assert run("exact", write("tpc.txt", [(0, 0), (4, 0), (0, 4), (1, 1)])) == (0, "1\n")
    grid = generate("grid", 9)
    code, out = run("exact", write("grid3x3.txt", grid), "--json")
    doc = json.loads(out)
    assert int(doc["count"]) == brute_force_oracle(grid) == 64
    assert doc["edges"] == 3 * 9 - 3 - doc["hull"]


def test_exact_invariances(write):
    pts = generate("random", 9, 4)
    base = run("exact", write("a.txt", pts))[1]
    assert run("exact", write("b.txt", pts[::-1]))[1] == base
    assert run("exact", write("c.txt", [(x - 10 ** 12, y + 5) for x, y in pts]))[1] == base


def test_exact_cap_exit_code(write, capsys):
    path = write("c9.txt", generate("convex", 9))
    code, _ = run("exact", path, "--max-triangulations", "10")
    assert code == 3
    assert "CapacityExceeded" in capsys.readouterr().err


def test_env_cap(write, monkeypatch):
    monkeypatch.setenv("TRICOUNT_MAX_TRIANGULATIONS", "10")
    assert run("exact", write("c9.txt", generate("convex", 9)))[0] == 3


def test_approx_examples(write):
    pts = generate("random", 7, 2)
    path = write("r7.txt", pts)
    assert run("approx", path, "--delta", "7")[1].splitlines()[0] == run("exact", path)[1].strip()
    code, out = run("approx", write("convex8.txt", generate("convex", 8)), "--delta", "5", "--k", "4", "--json")
    doc = json.loads(out)
    assert code == 0 and int(doc["count"]) > 0
    assert doc["config"]["family"] == "binary-cut" and "seconds" not in doc["stats"]
    assert run("approx", path, "--delta", "3", "--max-cells", "1")[0] == 3
    code, out = run("approx", path, "--json", "--timings")
    assert "seconds" in json.loads(out)["stats"]


def test_base_examples(write, capsys):
    code, out = run("base", write("convex6.txt", generate("convex", 6)), "--exact")
    doc = json.loads(out)
    assert doc["base"] == pytest.approx(14 ** (1 / 6)) and doc["lambda"] == "14"
    assert doc["lower"] <= doc["base"] <= doc["upper"]
    assert run("base", write("x.txt", generate("convex", 6)), "--epsilon", "0.6")[0] == 2
    code, out = run("base", write("tri.txt", [(0, 0), (1, 0), (0, 1)]))
    assert json.loads(out)["base"] == 1.0
    code, out = run("base", write("y.txt", generate("convex", 6)), "--count", "0")
    assert code == 2 and "UndefinedBase" in capsys.readouterr().err


def test_gen_examples(tmp_path):
    _, c6 = run("gen", "convex", 6, "--seed", 11)
    assert count_triangulations(parse_points(c6)) == 14
    _, g = run("gen", "grid", 9)
    assert set(parse_points(g)) == {(x, y) for x in range(3) for y in range(3)}
    assert run("gen", "random", 10, "--seed", 3) == run("gen", "random", 10, "--seed", 3)
    out = tmp_path / "p.json"
    run("gen", "random", 10, "--seed", 3, "--format", "json", "-o", out)
    assert read_points(out) == parse_points(run("gen", "random", 10, "--seed", 3)[1])


@pytest.mark.parametrize("kind", ["convex", "grid", "random"])
@pytest.mark.parametrize("n", [3, 7, 16, 40])
def test_generators(kind, n):
    pts = generate(kind, n, 5)
    assert len(set(pts)) == n
    assert all(abs(c) <= 10 ** 6 for p in pts for c in p)
    for fmt in ("text", "json"):
        assert sorted(parse_points(format_points(pts, fmt))) == sorted(pts)
    if kind == "convex":
        from tricount.geom import convex_hull
        assert len(convex_hull(pts)) == n
    if kind == "random":
        assert all(0 <= c <= 4 * n for p in pts for c in p)


def test_point_file_errors():
    with pytest.raises(InvalidInput):
        parse_points("0 0\n1 1\n0 0\n")
    with pytest.raises(InvalidInput):
        parse_points("0 0 1\n")
    with pytest.raises(InvalidInput):
        parse_points("0 0.5\n")
    with pytest.raises(InvalidInput):
        parse_points('{"pts": []}')
    assert parse_points("# comment\n 1 2 # trailing\n\n3 4\n") == ((1, 2), (3, 4))
    assert parse_points("[[1, 2], [3, 4]]") == ((1, 2), (3, 4))
    with pytest.raises(InvalidInput):
        read_points("/nonexistent/points.txt")


def test_audit_examples(write):
    code, out = run("audit", write("convex7.txt", generate("convex", 7)), "--delta", "7")
    doc = json.loads(out)
    assert doc["verdict"] == "PASS" and doc["row"]["log2_ratio_per_n"] == 0.0
    assert doc["table"][-1]["provenance"] == "base"
    code, out = run("audit", write("r10.txt", generate("random", 10, 1)), "--delta", "5")
    doc = json.loads(out)
    assert math.isfinite(doc["row"]["log2_ratio_per_n"])
    assert doc["fact2"]["status"] in ("found", "not_found")
    assert {"key", "points", "tr", "provenance", "children"} <= set(doc["table"][0])
    assert run("audit", write("two.txt", [(0, 0), (1, 1)]))[0] == 2


def test_bench_appends(tmp_path):
    out = tmp_path / "bench.jsonl"
    args = ("bench", "--n", 8, 9, "--seed", 0, 1, "--delta", 4, "--out", out)
    _, printed = run(*args)
    run(*args)
    lines = out.read_text().splitlines()
    assert len(lines) == 8 and lines[:4] == lines[4:]
    assert printed.splitlines() == lines[:4]
    row = json.loads(lines[0])
    assert row["generator"] == "random" and row["n"] == 8 and "seconds" not in row
    assert int(row["approx"]) > 0 and int(row["exact"]) == count_triangulations(generate("random", 8, 0))


def test_bench_records_cap_errors(tmp_path):
    _, printed = run("bench", "--n", 9, "--max-cells", 1, "--delta", 3)
    assert "capacity exceeded" in json.loads(printed)["error"]


def test_catalog_dump(write):
    _, out = run("catalog", write("r8.txt", generate("random", 8, 0)), "--delta", "4")
    doc = json.loads(out)
    assert doc["family"] == "binary-cut" and doc["cells"]


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        main(["approx"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        main(["gen", "spiral", "5"])


def test_accept_subset():
    code, out = run("accept", "--only", 1)
    assert code == 0 and out.startswith("[PASS] criterion 1")
