from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from trikurv.cli import ConfigError, main, parse_config, resolve_tol

IV1 = {"k1": "sqrt(5)/s", "k2": "0", "f": "9/(2*s)", "r": "-189/(2*s^2)",
       "eta": {"explicit": [0.48, 0.6, 0.64]}, "case": "subcase-iv1",
       "grid": {"lo": 0.5, "hi": 5.0, "n": 40}}
HELIX = {"f": "tan(-s)", "r": 6, "eta": {"explicit": [0.48, 0.6, 0.64]}}
SLANT = {"f": "0.5 - 1.25*(s - 1)", "r": "6", "eta": {"slant": math.pi / 3}}


@pytest.fixture
def write(tmp_path):
    def _write(cfg, name="cfg.json"):
        p = tmp_path / name
        p.write_text(json.dumps(cfg), encoding="utf-8")
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_residual_pass(write, capsys):
    code, out, _ = run(capsys, "residual", "--config", write(IV1))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass"
    assert rep["skipped"] == 0
    assert rep["config"]["k1"] == "sqrt(5)/s"
    assert all(v <= 1e-8 for v in rep["max_relative"].values())


def test_residual_perturbed_fails(write, capsys):
    cfg = dict(IV1, r="-189/(2*s^2)+1", case=None)
    code, out, _ = run(capsys, "residual", "--config", write(cfg))
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_eta_not_unit(write, capsys):
    code, _, err = run(capsys, "residual", "--config", write(dict(IV1, eta={"explicit": [1, 1, 0]})))
    assert code == 2 and "eta not unit" in err


def test_eta_normalized_within_tolerance():
    cfg = parse_config(dict(IV1, eta={"explicit": [0.6, 0.8 + 5e-7, 0.0]}))
    e = cfg.eta
    assert math.isclose(e.etaT ** 2 + e.etaN ** 2 + e.etaB ** 2, 1.0, abs_tol=1e-15)


@pytest.mark.parametrize("bad", [
    {"colour": "red"},
    {"grid": {"lo": 0, "hi": 1, "n": 5}},
    {"grid": {"lo": 1, "hi": 2, "n": 1}},
    {"case": "case-v"},
    {"f": "s+"},
    {"eta": {"slant": "x"}},
    {"tol": -1},
])
def test_config_rejections(bad):
    with pytest.raises(ConfigError):
        parse_config(dict(IV1, **bad))


def test_missing_and_malformed_files(tmp_path, capsys):
    assert run(capsys, "residual", "--config", str(tmp_path / "none.json"))[0] == 2
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    assert run(capsys, "residual", "--config", str(p))[0] == 2


def test_domain_error_exit(write, capsys):
    cfg = dict(IV1, k1="-1", case=None)
    code, _, err = run(capsys, "residual", "--config", write(cfg))
    assert code == 3 and "domain error" in err


def test_tol_precedence(monkeypatch):
    cfg = parse_config(IV1)
    monkeypatch.delenv("TRIKURV_TOL", raising=False)
    assert resolve_tol(None, cfg) == 1e-8
    monkeypatch.setenv("TRIKURV_TOL", "1e-6")
    assert resolve_tol(None, cfg) == 1e-6
    assert resolve_tol(None, parse_config(dict(IV1, tol=1e-4))) == 1e-4
    assert resolve_tol(1e-3, parse_config(dict(IV1, tol=1e-4))) == 1e-3
    monkeypatch.setenv("TRIKURV_TOL", "abc")
    with pytest.raises(ConfigError):
        resolve_tol(None, cfg)


def test_tol_flag_reaches_report(write, capsys, monkeypatch):
    monkeypatch.setenv("TRIKURV_TOL", "1e-6")
    _, out, _ = run(capsys, "residual", "--config", write(IV1))
    assert json.loads(out)["tol"] == 1e-6
    _, out, _ = run(capsys, "residual", "--config", write(IV1), "--tol", "1e-20")
    rep = json.loads(out)
    assert rep["tol"] == 1e-20 and rep["verdict"] == "fail"


def test_csv_matches_json(write, tmp_path, capsys):
    csv_path = tmp_path / "out.csv"
    _, out, _ = run(capsys, "residual", "--config", write(IV1), "--csv", str(csv_path))
    rep = json.loads(out)
    rows = list(csv.reader(io.StringIO(csv_path.read_text(encoding="utf-8"))))
    header, body = rows[0], rows[1:]
    assert header[0] == "s" and header[-1] == "verdict"
    assert len(body) == len(rep["rows"])
    for line, row in zip(body, rep["rows"]):
        assert float(line[0]) == row["s"]
        for name, value in row["residuals"].items():
            assert float(line[header.index(name)]) == value
            assert float(line[header.index("scale:" + name)]) == row["scales"][name]
        assert line[-1] == row["verdict"]


def test_reports_byte_identical(write, tmp_path, capsys):
    path = write(IV1)
    outs = []
    for i in range(2):
        c = tmp_path / f"{i}.csv"
        _, out, _ = run(capsys, "residual", "--config", path, "--csv", str(c))
        outs.append((out, c.read_bytes()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("theorem", ["subcase-iv1", "subcase-ii1", "subcase-ii2",
                                     "case-i-helix", "slant-case-ii"])
def test_verify_passes(theorem, capsys):
    code, out, _ = run(capsys, "verify", theorem)
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_verify_legendre(capsys):
    code, out, _ = run(capsys, "verify", "legendre")
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "nonexistence confirmed"
    assert abs(rep["details"]["gap_at_1"] - 2.2639320) <= 1e-6


def test_verify_unknown(capsys):
    assert run(capsys, "verify", "case-v")[0] == 2


def test_solve_helix(write, capsys):
    code, out, _ = run(capsys, "solve-helix", "--config", write(HELIX),
                       "--bounds", "0.1,2,0.1,2", "--starts", "16")
    (root,) = json.loads(out)
    assert code == 0
    assert abs(root["k1"] - math.sqrt(3) / 2) <= 1e-9
    assert abs(root["k2"] - math.sqrt(3) / 2) <= 1e-9


def test_solve_helix_slant(write, capsys):
    code, out, _ = run(capsys, "solve-helix", "--config", write(SLANT),
                       "--bounds", "0.1,2,0.1,2", "--starts", "16")
    assert code == 0 and len(json.loads(out)) == 1


def test_solve_helix_obstructed(write, capsys):
    # A = -1, B = 0 at s = 1: f = 0, f' = 1, r = -6
    cfg = dict(HELIX, f="s - 1", r=-6)
    code, out, err = run(capsys, "solve-helix", "--config", write(cfg),
                         "--bounds", "0.1,2,0.1,2", "--starts", "8")
    assert code == 1 and json.loads(out) == []
    assert len(json.loads(err)["diagnostics"]) == 8


def test_solve_helix_bad_bounds(write, capsys):
    assert run(capsys, "solve-helix", "--config", write(HELIX), "--bounds", "1,2")[0] == 2
    assert run(capsys, "solve-helix", "--config", write(HELIX), "--bounds", "0,1,0,1")[0] == 2


def test_parse_check(capsys):
    code, out, _ = run(capsys, "parse-check", "sqrt(5)/s")
    assert code == 0
    jet_line = [l for l in out.splitlines() if l.startswith("jet")][0]
    vals = [float(x) for x in jet_line.split(": ")[1].strip("()").split(",")]
    r5 = math.sqrt(5)
    for v, w in zip(vals, (r5, -r5, 2 * r5, -6 * r5, 24 * r5)):
        assert abs(v - w) <= 1e-12 * abs(w)
    code, out, _ = run(capsys, "parse-check", "9/(2*s)")
    assert "(4.5, -4.5, 9.0, -27.0, 108.0)" in out


def test_parse_check_error(capsys):
    code, _, err = run(capsys, "parse-check", "s+")
    assert code == 2 and err


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--samples", "60")
    rep = json.loads(out)
    assert code == 0
    subjects = {f["subject"] for f in rep["findings"]}
    assert {"case-iii:III.3", "slant:S.3"} <= subjects


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "trikurv", "parse-check", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "3" in res.stdout
