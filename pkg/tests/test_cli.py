import json
import subprocess
import sys

import pytest

from voronoi_lab.cli import run, to_decimal


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_report_schema(capsys):
    code, out, _ = _run(capsys, "gauss-sum", "--prime", "5", "--exponent", "2", "--log-image", "3")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"command", "precision", "config", "result", "discrepancies",
                        "truncation", "timing_ms"}
    assert rep["result"]["abs_epsilon"].startswith(("9.99999999999999", "1.00000000000000"))


def test_numbers_are_decimal_strings():
    d = to_decimal({"x": 0.1, "z": 1 + 2j, "n": 3, "flag": True, "none": None})
    assert d == {"x": "1.0000000000000001e-01", "z": {"re": "1.0000000000000000e+00",
                 "im": "2.0000000000000000e+00"}, "n": 3, "flag": True, "none": None}


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"prime": 5, "surprise": 1}))
    code, out, err = _run(capsys, "gauss-sum", "--config", str(cfg))
    assert code == 2 and "surprise" in err and out == ""


def test_malformed_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    code, _, err = _run(capsys, "mellin-roundtrip", "--config", str(cfg))
    assert code == 2 and "JSON" in err


def test_wrong_type_in_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"prime": "five"}))
    assert _run(capsys, "gauss-sum", "--config", str(cfg))[0] == 2


def test_unknown_subcommand(capsys):
    assert _run(capsys, "frobnicate")[0] == 2


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("VORONOI_LAB_THREADS", "many")
    assert _run(capsys, "gauss-sum")[0] == 2


def test_thread_count_recorded(monkeypatch, capsys):
    monkeypatch.setenv("VORONOI_LAB_THREADS", "3")
    code, out, _ = _run(capsys, "gauss-sum")
    assert json.loads(out)["config"]["threads"] == 3


def test_reruns_are_byte_identical(capsys):
    a = _run(capsys, "lsc-check")[1]
    b = _run(capsys, "lsc-check")[1]
    assert a == b


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert _run(capsys, "farey-dissect", "--q", "2", "--out", str(path))[0] == 0
    assert json.loads(path.read_text())["result"]["count"] == 30


def test_c_table_marks_dash_rows(capsys):
    code, out, _ = _run(capsys, "c-table", "--family", "ramified-ps/one", "--l", "1")
    rows = json.loads(out)["result"]["entries"]
    assert code == 0 and all(r["row"] == "-" for r in rows)


def test_newform_coefficients(capsys):
    code, out, _ = _run(capsys, "newform", "--name", "delta", "--n", "4")
    assert json.loads(out)["result"]["a"] == [1, -24, 252, -1472]


def test_bessel_transform(capsys):
    code, out, _ = _run(capsys, "bessel-transform", "--y", "0.5")
    assert code == 0 and len(json.loads(out)["result"]["values"]) == 1


def test_mellin_roundtrip_command(capsys):
    code, out, _ = _run(capsys, "mellin-roundtrip", "--prime", "7", "--level", "2")
    assert code == 0 and json.loads(out)["discrepancies"] == []


def test_invalid_depth_parameters(capsys):
    # |r| > q
    assert _run(capsys, "farey-dissect", "--q", "1", "--r", "2")[0] == 2


def test_verify_headline(capsys):
    code, out, _ = _run(capsys, "verify-voronoi")
    rep = json.loads(out)
    assert code == 0
    assert float(rep["result"]["rel_error"]) < 1e-6
    assert float(rep["truncation"]["tail"]) < 1e-9


def test_verify_failure_exits_one(capsys):
    code, out, _ = _run(capsys, "verify-voronoi", "--perturb", "psi_sign")
    assert code == 1 and json.loads(out)["discrepancies"]


def test_suite_subset(capsys):
    code, out, err = _run(capsys, "suite", "--only", "1", "2", "13")
    assert code == 0 and json.loads(out)["result"]["passed"] == 3
    assert "criterion  1 PASS" in err


def test_suite_reports_failure(capsys):
    code, out, _ = _run(capsys, "suite", "--only", "12")
    assert code == 1 and json.loads(out)["discrepancies"][0]["criterion"] == 12


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "voronoi_lab", "gauss-sum", "--prime", "7"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "gauss-sum"


def test_short_expansion_is_a_usage_error(capsys):
    code, out, err = _run(capsys, "verify-voronoi", "--n-max", "50", "--M", "30.0")
    assert code == 2 and "n_max" in err and out == ""
