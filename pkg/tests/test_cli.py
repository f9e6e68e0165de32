import json

import pytest

from matcoh.cli import main
from matcoh.cohomology import CohomologyTable
from matcoh.io import dumps


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _cells(path):
    t = CohomologyTable.from_json(json.loads(open(path).read()))
    return {k: str(v) for k, v in t.nonzero().items()}


def test_compute_uniform(tmp_path, capsys):
    inp = _write(tmp_path, "u23.json", {"type": "uniform", "k": 2, "n": 3})
    out = str(tmp_path / "t.json")
    assert main(["compute", "--input", inp, "--quasirep", "canonical", "--out", out]) == 0
    assert _cells(out) == {(0, 2): "Z", (1, 1): "Z"}
    assert "cross-check: pass" in capsys.readouterr().out
    assert (tmp_path / "t.json.txt").exists()


def test_compute_torsion_and_graph(tmp_path):
    out = str(tmp_path / "d.json")
    inp = _write(tmp_path, "d.json.in", {"type": "u22_diagonal", "a": 2, "b": 3})
    assert main(["compute", "--input", inp, "--out", out]) == 0
    assert _cells(out) == {(0, 2): "Z", (1, 1): "Z/6"}
    k3 = _write(tmp_path, "k3.json", {"type": "graph", "vertices": 3, "edges": [[0, 1], [0, 2], [1, 2]]})
    out2 = str(tmp_path / "k3out.json")
    assert main(["compute", "--input", k3, "--quasirep", "graphic", "--out", out2]) == 0
    assert _cells(out2) == {(0, 2): "Z", (1, 1): "Z"}


def test_round_trip_byte_identical(tmp_path):
    inp = _write(tmp_path, "d.json.in", {"type": "u22_diagonal", "a": 4, "b": 6})
    out = tmp_path / "t.json"
    assert main(["compute", "--input", inp, "--out", str(out), "--seed", "3"]) == 0
    text = out.read_text()
    assert dumps(CohomologyTable.from_json(json.loads(text)).to_json()) == text
    out2 = tmp_path / "t2.json"
    assert main(["compute", "--input", inp, "--out", str(out2), "--seed", "3"]) == 0
    assert out2.read_text() == text


def test_field_ring(tmp_path, capsys):
    inp = _write(tmp_path, "u.json", {"type": "uniform", "k": 2, "n": 3})
    assert main(["compute", "--input", inp, "--ring", "q"]) == 0
    assert main(["compute", "--input", inp, "--ring", "zp:3", "--jmax", "1"]) == 0
    assert main(["compute", "--input", inp, "--ring", "zp:4"]) == 2


def test_chromatic_and_arrangement(tmp_path):
    g = _write(tmp_path, "c3.json", {"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]})
    out = str(tmp_path / "c.json")
    assert main(["chromatic", "--input", g, "--out", out]) == 0
    assert _cells(out)[(1, 2)] == "Z/2"
    a = _write(tmp_path, "a.json", {"dim": 2, "normals": [[1, 0], [0, 1], [1, -1]]})
    assert main(["arrangement", "--input", a]) == 0


def test_verify_suites(tmp_path, capsys):
    u23 = _write(tmp_path, "u23.json", {"type": "uniform", "k": 2, "n": 3})
    report = tmp_path / "r.json"
    assert main(["verify", "--suite", "ses", "--input", u23, "--quasirep", "canonical", "--out", str(report)]) == 0
    assert all(v["pass"] for v in json.loads(report.read_text()))
    assert main(["verify", "--suite", "euler", "--count", "15", "--seed", "1"]) == 0
    assert main(["verify", "--suite", "uct", "--input", u23]) == 0
    k4 = _write(tmp_path, "k4.json", {"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]})
    capsys.readouterr()
    # the integer comparison maps are not chain maps on K4
    assert main(["verify", "--suite", "chromatic", "--input", k4]) == 1
    assert "first failure" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["compute"],
    ["compute", "--input", "/nonexistent/x.json"],
    ["verify", "--suite", "nope"],
    ["frobnicate"],
])
def test_input_errors(argv):
    assert main(argv) == 2


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["compute", "--input", str(bad)]) == 2
    rt = _write(tmp_path, "rt.json", {"type": "rank_table", "n": 2, "ranks": [0, 1, 1, 3]})
    assert main(["compute", "--input", rt]) == 2


def test_explicit_quasirep_file(tmp_path):
    m = _write(tmp_path, "u22.json", {"type": "uniform", "k": 2, "n": 2})
    qr = {"gens": 2, "flats": {"0": [], "1": [[2, 0]], "2": [[0, 3]], "3": [[1, 0], [0, 1]]}}
    qp = _write(tmp_path, "q.json", qr)
    out = str(tmp_path / "o.json")
    assert main(["compute", "--input", m, "--quasirep", qp, "--out", out]) == 0
    assert _cells(out) == {(0, 2): "Z", (1, 1): "Z/6"}
    qr["flats"]["3"] = [[1, 0]]
    bad = _write(tmp_path, "bad.json", qr)
    assert main(["compute", "--input", m, "--quasirep", bad]) == 2


@pytest.mark.parametrize("obj", ["pappus", {"type": "non_pappus"}, {"type": "matrix", "entries": [[1, 0, 1], [0, 1, 1]]},
                                 {"type": "rank_table", "n": 2, "ranks": [0, 1, 1, 2]}])
def test_matroid_inputs(tmp_path, obj):
    p = _write(tmp_path, "m.json", obj)
    assert main(["compute", "--input", p, "--quasirep", "free_default", "--ring", "q"]) == 0
