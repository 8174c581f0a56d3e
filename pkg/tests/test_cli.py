import csv
import json

import numpy as np
import pytest

from tetraplectic.cli import main
from tetraplectic.qlinalg import QMatrix, random_qmatrix


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path, rng):
    return {
        "identity": _write(tmp_path / "id.json", QMatrix.identity(3).to_json()),
        "two_i": _write(tmp_path / "q.json", {"rows": 1, "cols": 1, "entries": [[[0, 2, 0, 0]]]}),
        "ones": _write(tmp_path / "ones.json", {"rows": 2, "cols": 1, "entries": [[[1, 0, 0, 0]], [[1, 0, 0, 0]]]}),
        "coord": _write(tmp_path / "coord.json", {"rows": 3, "cols": 1, "entries": [[[0, 0, 0, 0]], [[0, 0, 0, 0]], [[1, 0, 0, 0]]]}),
        "zero": _write(tmp_path / "zero.json", {"rows": 2, "cols": 1, "entries": [[[0, 0, 0, 0]], [[0, 0, 0, 0]]]}),
        "g31": _write(tmp_path / "g31.json", random_qmatrix(3, 1, rng).to_json()),
        "g42": _write(tmp_path / "g42.json", random_qmatrix(4, 2, rng).to_json()),
    }


def test_det(files, capsys, tmp_path):
    assert main(["det", files["identity"]]) == 0
    assert capsys.readouterr().out == "1.0, 1.0, gap 0\n"
    assert main(["det", files["two_i"]]) == 0
    assert capsys.readouterr().out.startswith("2.0, 2.0")
    assert main(["det", files["two_i"], "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["dieudonne"] == 2.0
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["det", str(bad)]) == 2
    assert main(["det", str(tmp_path / "missing.json")]) == 3
    assert main(["det", files["ones"]]) == 2


def test_mumap(files, capsys):
    assert main(["mumap", files["ones"], "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "0.5 0.5" and out[2] == "in_hypersimplex true"
    assert main(["mumap", files["coord"], "1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "0.0 0.0 1.0"
    assert main(["mumap", files["g42"], "2", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert abs(obj["sum"] - 2) <= 1e-11 and obj["in_hypersimplex"]
    assert main(["mumap", files["zero"], "1"]) == 1
    assert main(["mumap", files["g42"], "1"]) == 2


def test_orbit_scan(files, tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["orbit-scan", files["g31"], "1", "--samples", "200", "--seed", "4", "--out", str(a)]) == 0
    assert "containment failures: 0" in capsys.readouterr().err
    assert main(["orbit-scan", files["g31"], "1", "--samples", "200", "--seed", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(a.open()))
    assert len(rows) == 400
    assert all(r["in_hypersimplex"] == "true" and r["in_matroid_hull"] == "true" for r in rows)
    assert main(["orbit-scan", files["g31"], "1", "--samples", "0"]) == 0
    assert capsys.readouterr().out == "sample_id,kind,x_1,x_2,x_3,in_hypersimplex,in_matroid_hull\n"
    assert main(["orbit-scan", files["g31"], "1", "--samples", "3", "--out", str(tmp_path / "no" / "x.csv")]) == 3
    assert main(["orbit-scan", files["g31"], "1", "--samples", "3", "--tol.contain", "1e-8"]) == 0
    assert main(["orbit-scan", files["g31"], "1", "--tol.nope", "1"]) == 2


def test_flow(tmp_path, capsys):
    spec = _write(tmp_path / "f.json", {"functions": ["x1", "x2", "x3"], "x0": [0, 0, 0, 0]})
    assert main(["flow", spec, "--steps", "5", "--dt", "0.1"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert [float(r["x_4"]) for r in rows] == pytest.approx([0.1 * i for i in range(6)], abs=1e-12)
    const = _write(tmp_path / "c.json", {"functions": ["const", "x1", "x2"], "x0": [0.5, 1, 2, 3]})
    assert main(["flow", const, "--steps", "5"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert {r["x_1"] for r in rows} == {"0.5"}
    combo = _write(tmp_path / "m.json", {"functions": ["norm4_1", [[1, "x1"], [2, "x6"]], "norm4_sum"],
                                         "x0": [0.3, 0.1, 0.5, 0.2, 0.1, 0.4, 0.3, 0.2]})
    out = tmp_path / "t.csv"
    assert main(["flow", combo, "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1001 and max(float(r["drift"]) for r in rows) <= 1e-6
    unknown = _write(tmp_path / "u.json", {"functions": ["x1", "banana", "x2"], "x0": [0, 0, 0, 0]})
    assert main(["flow", unknown]) == 2
    assert main(["flow", str(tmp_path / "none.json")]) == 3


def test_s4_volume(capsys):
    assert main(["s4-volume", "--grid", "10", "--format", "json"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert np.isfinite(r["value"]) and r["relative_change"] < 0.01 and r["tail_estimate"] < 1e-3
    assert main(["s4-volume", "--grid", "9"]) == 2


def test_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "exterior", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and rep["tolerances"]["exterior.wedge_associative"] == 1e-12
    assert main(["verify", "exterior", "--tol.exterior.wedge_associative", "0"]) == 1
    assert "FAILED exterior.wedge_associative" in capsys.readouterr().err
    assert main(["verify", "bogus"]) == 2
    assert main(["verify", "quat", "--tol.quat.nope=1"]) == 2
    assert main(["verify", "quat", "--tol.quat.exp_log_roundtrip", "abc"]) == 2
    assert main([]) == 2
