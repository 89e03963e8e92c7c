import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from pdfrel import cli
from pdfrel.errors import IntegralDiverged


def run(capsys, *argv):
    status = cli.main(list(argv))
    out = capsys.readouterr().out
    return status, out


def run_json(capsys, *argv):
    status, out = run(capsys, *argv)
    return status, json.loads(out)


def test_info_exponential(capsys):
    status, out = run_json(capsys, "info", "--dist", "exponential:rate=1")
    assert status == 0
    assert out["entropy"] == pytest.approx(1.0) and out["varentropy"] == pytest.approx(1.0)
    assert {"dist", "entropy", "varentropy", "method", "est_abs_error"} <= set(out)


def test_info_residual(capsys):
    status, out = run_json(capsys, "info", "--dist", "exponential", "--t", "2", "--method", "quadrature")
    assert status == 0 and out["residual"]["V"] == pytest.approx(1.0, abs=1e-8)


def test_curve_csv_file(tmp_path, capsys):
    path = tmp_path / "kt.csv"
    status, out = run(capsys, "curve", "--law", "Kt", "--dist", "parabolic:b=0.75", "--t", "0.5",
                      "--out", str(path))
    assert status == 0 and out == ""
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["y", "Kt"] and len(rows) == 1000
    k = np.array([float(r[1]) for r in rows[1:]])
    assert k[0] == pytest.approx(0.0, abs=1e-12) and k[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(k) >= 0)
    # 17 significant digits make the text round-trip exactly
    assert all(repr(float(v)) == repr(float(format(float(v), ".17g"))) for v in rows[1][0:2])


def test_curve_json(capsys):
    status, out = run_json(capsys, "curve", "--law", "K", "--dist", "normal", "--grid-n", "9", "--format", "json")
    assert status == 0 and len(out["columns"]["K"]) == 9


@pytest.mark.parametrize("law", ["Gt", "gt", "L", "Xstar", "X"])
def test_curve_other_laws(capsys, law):
    status, out = run(capsys, "curve", "--law", law, "--dist", "normal", "--t", "-1", "--grid-n", "21")
    assert status == 0 and len(out.strip().split("\n")) == 22


def test_verify_ifr_bound(capsys):
    status, out = run_json(capsys, "verify", "--theorem", "ifr_bound", "--dist", "weibull:k=2,lambda=1",
                           "--t", "1.2")
    assert status == 0
    assert out["premise"] is True and out["conclusion"] is True and out["V_t"] <= 1


def test_verify_pair(capsys):
    status, out = run_json(capsys, "verify", "--theorem", "kurtosis_varentropy", "--x", "normal", "--y", "logistic")
    assert status == 0 and out["implication_respected"]


def test_order(capsys):
    status, out = run_json(capsys, "order", "--kind", "kurtosis", "--x", "normal", "--y", "logistic")
    assert status == 0 and out["holds"] is True and out["grid"]["n_points"] == 999
    status, out = run_json(capsys, "order", "--kind", "st", "--x", "exponential", "--y",
                           "exponential:rate=2", "--grid-n", "51")
    assert out["holds"] is False and out["first_violation"]["p"] == pytest.approx(1e-3)
    assert "mapping" in out


def test_grid_env(capsys, monkeypatch):
    monkeypatch.setenv("PDFREL_GRID_N", "77")
    _, out = run_json(capsys, "order", "--kind", "disp", "--x", "normal", "--y", "logistic")
    assert out["grid"]["n_points"] == 77


@pytest.mark.parametrize("argv,key,value", [
    (["eval", "--dist", "paretotype", "--law", "Kt", "--t", "3", "--y-value", "0.16"], "cdf", 0.8),
    (["eval", "--dist", "normal", "--law", "Gt", "--t", "0", "--y-value", "0.3520653267642995"],
     "survival", 0.3829249225480262),
    (["eval", "--dist", "exponential", "--law", "K", "--p", "0.4"], "quantile", 0.4),
    (["eval", "--dist", "triangularabs:sign=-1", "--law", "Xstar", "--y-value", "1"], "fstar", 0.5),
    (["eval", "--dist", "paretotype", "--t", "1"], "hazard", 0.5),
    (["eval", "--dist", "paretotype", "--p", "0.5"], "quantile", 1.0),
])
def test_eval(capsys, argv, key, value):
    status, out = run_json(capsys, *argv)
    assert status == 0 and out[key] == pytest.approx(value, rel=1e-9)


def test_eval_describe_infinity(capsys):
    status, out = run_json(capsys, "eval", "--dist", "exponential")
    assert status == 0 and out["support"] == [0.0, "Infinity"]


def test_oracle(capsys):
    status, out = run_json(capsys, "oracle", "--dist", "paretotype", "--law", "K", "--n", "200000", "--seed", "42")
    assert status == 0 and out["pass"] and {"ks", "band", "pass"} <= set(out)


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["info", "--bogus-flag"],
    ["order", "--kind", "sideways", "--x", "normal", "--y", "normal"],
    ["info", "--dist", "normal", "--format", "csv"],
    ["curve", "--law", "K", "--dist", "normal", "--grid-n", "1"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "UsageError"


@pytest.mark.parametrize("argv,etype", [
    (["info"], "UsageError"),
    (["info", "--dist", "parabolic:b=0.9"], "ParamOutOfRange"),
    (["info", "--dist", "gompertz"], "UnknownFamily"),
    (["eval", "--dist", "normal", "--law", "Kt", "--t", "1", "--p", "0.3"], "NotMonotone"),
    (["eval", "--dist", "exponential", "--t", "-1"], "TOutOfSupport"),
    (["order", "--kind", "star", "--x", "normal", "--y", "exponential"], "PreconditionViolated"),
    (["verify", "--theorem", "fermat", "--dist", "normal"], "UnknownTheorem"),
])
def test_precondition_errors(capsys, argv, etype):
    status, out = run_json(capsys, *argv)
    assert status == 2 and out["error"]["type"] == etype


def test_numeric_failure_exits_1(capsys, monkeypatch):
    def boom(*a, **k):
        raise IntegralDiverged("quadrature failed")

    monkeypatch.setattr("pdfrel.info.info_report", boom)
    status, out = run_json(capsys, "info", "--dist", "normal")
    assert status == 1 and out["error"]["type"] == "IntegralDiverged"


def test_selftest_subset(capsys):
    status = cli.main(["selftest", "--only", "1", "4"])
    captured = capsys.readouterr()
    out = json.loads(captured.out)
    assert status == 0 and out["all_passed"] and [c["number"] for c in out["criteria"]] == [1, 4]
    assert "criterion  1 [PASS]" in captured.err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pdfrel", "info", "--dist", "uniform"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["varentropy"] == 0.0
    proc = subprocess.run([sys.executable, "-m", "pdfrel", "info", "--dist", "nope"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
