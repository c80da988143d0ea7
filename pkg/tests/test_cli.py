import csv
import json
import math
import os

import numpy as np
import pytest

from conedirac import cli
from conedirac.errors import ConvergenceError
from conedirac.cli import main, parse_int_range, parse_window, snap_to_pi

PI = math.pi


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_snap_to_pi():
    assert snap_to_pi("1.5708").value == PI / 2
    assert snap_to_pi("0.7854").fraction == "1/4"
    assert snap_to_pi("1.5708", exact=True).value == 1.5708
    assert snap_to_pi("2.2").value == 2.2  # too few digits to mean anything
    assert snap_to_pi("1.2345").fraction is None
    with pytest.raises(ValueError):
        snap_to_pi("abc")


def test_parse_helpers():
    assert parse_window("-10:10") == (-10.0, 10.0)
    assert parse_int_range("-1:1") == [-1, 0, 1]
    for bad in ("3:1", "x"):
        with pytest.raises(ValueError):
            parse_window(bad)
    with pytest.raises(ValueError):
        parse_int_range("1:0")


def test_spectrum_csv_pair_is_symmetric(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--k", "-1:0", "--omega", "1.0", "--window", "-10:10", "--out", str(out)]) == 0
    rows = _rows(out)
    assert list(rows[0]) == cli.CSV_HEADER
    z0 = np.array([float(r["lambda"]) for r in rows if r["k"] == "0"])
    zm = np.array([float(r["lambda"]) for r in rows if r["k"] == "-1"])
    np.testing.assert_allclose(np.sort(zm), np.sort(-z0), atol=1e-9)
    # the branch label is kept under lambda -> -lambda
    assert {r["branch"] for r in rows if r["k"] == "-1"} == {r["branch"] for r in rows if r["k"] == "0"}


def test_spectrum_csv_round_trip(tmp_path):
    out = tmp_path / "s.csv"
    main(["spectrum", "--k", "0", "--omega-pi", "0.3", "--window", "-8:8", "--out", str(out)])
    jout = tmp_path / "s.json"
    main(["spectrum", "--k", "0", "--omega-pi", "0.3", "--window", "-8:8", "--format", "json", "--out", str(jout)])
    doc = json.loads(jout.read_text())
    lam_csv = [float(r["lambda"]) for r in _rows(out)]
    lam_json = [r["lambda"] for r in doc["results"]]
    assert lam_csv == lam_json  # 17 significant digits survive exactly


def test_omega_half_pi_rejected_without_partial_file(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--omega", "1.5708", "--out", str(out)]) == 2
    assert not out.exists()
    assert os.listdir(tmp_path) == []


def test_exact_flag_keeps_rounded_value(tmp_path):
    out = tmp_path / "s.json"
    assert main(["spectrum", "--omega", "1.5708", "--exact", "--window", "-3:3", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["omegas"] == [1.5708]


def test_invalid_window_exit_code(tmp_path):
    assert main(["spectrum", "--omega", "1.0", "--window", "5:1"]) == 2
    assert main(["spectrum", "--omega", "4.0"]) == 2
    assert main(["spectrum"]) == 2


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    def boom(*a, **kw):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "_spectrum_task", boom)
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--omega", "1.0", "--out", str(out), "--jobs", "1"]) == 3
    assert not out.exists()


def test_json_deterministic(tmp_path):
    docs = []
    for i, jobs in enumerate(("1", "2")):
        out = tmp_path / f"{i}.json"
        main(["spectrum", "--k", "-1:1", "--omega-pi", "0.7", "--window", "-6:6", "--format", "json", "--jobs", jobs, "--out", str(out)])
        d = json.loads(out.read_text())
        assert d["schema"] == 1 and d["command"] == "spectrum"
        d["meta"].pop("wall_time")
        docs.append(json.dumps(d, sort_keys=True))
    assert docs[0] == docs[1]


def test_threads_env(monkeypatch):
    monkeypatch.setenv("CONE_DIRAC_THREADS", "3")
    assert cli.default_jobs() == 3
    monkeypatch.setenv("CONE_DIRAC_THREADS", "zero")
    with pytest.raises(ValueError):
        cli.default_jobs()


def test_figure1_small_grid(tmp_path, capsys):
    out, svg = tmp_path / "f.csv", tmp_path / "f.svg"
    assert main(["figure1", "--points", "6", "--out", str(out), "--svg", str(svg)]) == 0
    rows = _rows(out)
    assert list(rows[0]) == cli.FIG_HEADER
    z0 = [r for r in rows if r["series"] == "Z0"]
    assert z0 and all(r["branch"] == "Eq1" for r in z0)
    for r in z0:
        w, lam = float(r["omega"]), float(r["lambda"])
        if w < PI / 2:
            assert abs(lam) >= PI / (4 * w) + 0.5 - 1e-9
        assert abs(lam) > 0.5
    text = svg.read_text()
    assert 'width="800"' in text and 'height="600"' in text and "<circle" in text
    assert "min |lambda|" in capsys.readouterr().err


def test_figure1_empty_grid(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["figure1", "--points", "0", "--out", str(out)]) == 2
    assert not out.exists()


def test_verify_only_hardy(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--only", "hardy", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["reports"] and all(r["group"] == "hardy" and r["passed"] for r in doc["reports"])


def test_verify_strict_tolerance_fails(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--only", "cross", "--tol", "1e-14", "--out", str(out)]) == 1
    assert main(["verify", "--only", "nonsense"]) == 2


def test_compare(tmp_path):
    out = tmp_path / "c.json"
    assert main(["compare", "--k", "0", "--omega", "1.0472", "--window", "-10:10", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["reports"][0]["passed"]
    assert {r["solver"] for r in doc["results"]} == {"transcendental", "shooting"}


def test_classify(tmp_path):
    out = tmp_path / "c.json"
    assert main(["classify", "halfline", "--alpha", "1.5", "--b", "inf", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["results"][0]["indices"] == [0, 0]
    assert main(["classify", "halfline", "--alpha", "0.2", "--b", "1"]) == 2
    assert main(["classify", "perturbation", "--omega", "0.7854", "--nu", "1.0", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["results"][0]["verdict"] == "EssentiallySelfAdjoint"
    assert main(["classify", "perturbation", "--omega", "2.0", "--nu", "1.0"]) == 2
    assert main(["classify", "quantumdot", "--theta", "0", "--out", str(out)]) == 0
    np.testing.assert_allclose(json.loads(out.read_text())["results"][0]["M"], np.eye(4))
    assert main(["classify", "quantumdot", "--theta", "1.5708"]) == 2
