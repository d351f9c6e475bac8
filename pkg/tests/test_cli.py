import csv
import io
import json
import math

import pytest

from bikoeff import cli
from bikoeff.bounds import BoundBreakdown
from bikoeff.cli import ReportDocument, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- exit codes --------------------------------------------------------------


def test_bounds_exits_zero(capsys):
    code, out, _ = run(capsys, "bounds", "st:lambda=0:order:rho=0")
    assert code == 0
    assert "a2" in out


def test_bad_spec_exits_one(capsys):
    code, _, err = run(capsys, "bounds", "bad:spec")
    assert code == 1
    assert "error" in err


def test_bad_flag_exits_one(capsys):
    code, _, _ = run(capsys, "bounds", "st:lambda=0:order:rho=0", "--format", "yaml")
    assert code == 1


def test_unknown_coefficient_exits_one(capsys):
    code, _, err = run(capsys, "bounds", "st:lambda=0:order:rho=0", "--coeffs", "a9")
    assert code == 1
    assert "a9" in err


def test_missing_command_exits_one(capsys):
    assert run(capsys)[0] == 1


def test_violation_exits_two(capsys, monkeypatch):
    from bikoeff import oracle

    tiny = BoundBreakdown(0.01, "case_a", "route_one", {"route_one": 0.01})
    monkeypatch.setattr(oracle, "class_bounds", lambda spec: (tiny, tiny, tiny))
    monkeypatch.setattr(cli, "class_bounds", lambda spec: (tiny, tiny, tiny))
    code, _, err = run(
        capsys, "verify", "st:lambda=0:order:rho=0",
        "--target", "a2", "--samples", "300", "--refine-top", "0",
    )
    assert code == 2
    assert "witness" in err


# -- bounds output -----------------------------------------------------------


def bounds_json(capsys, *argv):
    code, out, _ = run(capsys, "bounds", *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


def test_bounds_reference_rows(capsys):
    doc = bounds_json(capsys, "st:lambda=0:order:rho=0", "--coeffs", "a2,a3,a4,a5")
    by = {}
    for row in doc["rows"]:
        by.setdefault(row["coefficient"], []).append(row)
    assert abs(by["a2"][0]["bound"] - math.sqrt(2)) < 1e-5
    assert abs(by["a3"][0]["bound"] - 2.0) < 1e-5
    assert abs(by["a4"][0]["bound"] - 2.552285) < 1e-5
    assert len(by["a5"]) == 2
    assert all(abs(r["bound"] - 3.109476) < 1e-5 for r in by["a5"])


def test_bounds_convex_a2(capsys):
    doc = bounds_json(capsys, "m:lambda=1:order:rho=0", "--coeffs", "a2")
    assert abs(doc["rows"][0]["bound"] - 1.0) < 1e-12


def test_bounds_strong_a3_piecewise(capsys):
    doc = bounds_json(capsys, "st:lambda=0:strong:beta=0.5", "--coeffs", "a3")
    assert abs(doc["rows"][0]["bound"] - 2.0 / 3.0) < 1e-12


def test_a5_outside_supported_family_exits_one(capsys):
    code, _, err = run(capsys, "bounds", "st:lambda=1:order:rho=0", "--coeffs", "a5")
    assert code == 1
    assert "a5" in err


# -- serialization -----------------------------------------------------------


def test_json_roundtrip(capsys):
    code, out, _ = run(capsys, "bounds", "st:lambda=1/2:strong:beta=0.7", "--format", "json")
    assert code == 0
    doc = ReportDocument.from_json(out)
    assert doc.schema_version == "1"
    assert ReportDocument.from_json(doc.to_json()) == doc


def test_csv_is_rfc4180(capsys):
    code, out, _ = run(capsys, "bounds", "st:lambda=0:order:rho=0", "--format", "csv")
    assert code == 0
    assert "\r\n" in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "coefficient"
    assert len(rows) == 4  # header + a2, a3, a4


def test_fifteen_significant_digits(capsys):
    _, out, _ = run(capsys, "bounds", "st:lambda=0:order:rho=0", "--coeffs", "a2", "--format", "csv")
    assert "1.4142135623731" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "doc.json"
    code, out, _ = run(capsys, "bounds", "st:lambda=0:order:rho=0", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["schema_version"] == "1"


# -- verify ------------------------------------------------------------------


def test_verify_reports_slack(capsys):
    code, out, _ = run(
        capsys, "verify", "st:lambda=1/2:order:rho=1/4",
        "--target", "a4", "--samples", "800", "--seed", "7",
        "--refine-top", "1", "--refine-steps", "30", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    row = doc["rows"][0]
    assert row["violated"] is False
    assert row["slack"] >= 0
    assert doc["provenance"] == {"seed": 7, "samples": 800}


def test_verify_a5_both_variants(capsys):
    code, out, _ = run(
        capsys, "verify", "ss:beta=0.5", "--target", "a5",
        "--samples", "800", "--refine-top", "0", "--format", "json",
    )
    assert code == 0
    rows = json.loads(out)["rows"]
    assert {r["variant"] for r in rows} == {"stated", "rederived"}
    proven = {r["variant"]: r["proven"] for r in rows}
    assert proven == {"stated": False, "rederived": True}


def test_verify_a5_unsupported_family(capsys):
    code, _, _ = run(capsys, "verify", "m:lambda=1:order:rho=0", "--target", "a5")
    assert code == 1


# -- config file and environment seed ----------------------------------------


def test_config_file_and_env_precedence(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("samples = 300   # comment\nrefine-top = 0\n")
    monkeypatch.setenv("BIKOEFF_SEED", "42")
    code, out, _ = run(
        capsys, "verify", "st:lambda=0:order:rho=0", "--target", "a2",
        "--config", str(cfg), "--format", "json",
    )
    assert code == 0
    prov = json.loads(out)["provenance"]
    assert prov == {"seed": 42, "samples": 300}
    # explicit flags beat both
    code, out, _ = run(
        capsys, "verify", "st:lambda=0:order:rho=0", "--target", "a2",
        "--config", str(cfg), "--samples", "200", "--seed", "5", "--format", "json",
    )
    assert json.loads(out)["provenance"] == {"seed": 5, "samples": 200}


def test_bad_config_key_exits_one(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("wibble = 3\n")
    code, _, err = run(capsys, "verify", "st:lambda=0:order:rho=0", "--config", str(cfg))
    assert code == 1 and "wibble" in err


def test_bad_env_seed_exits_one(capsys, monkeypatch):
    monkeypatch.setenv("BIKOEFF_SEED", "not-a-number")
    code, _, _ = run(capsys, "verify", "st:lambda=0:order:rho=0", "--target", "a2", "--samples", "100")
    assert code == 1


# -- expand ------------------------------------------------------------------


def test_expand_generator(capsys):
    code, out, _ = run(capsys, "expand", "ss:beta=1/3", "--what", "generator")
    assert code == 0
    assert out.strip() == "1 + (2/3) z + (2/9) z^2 + (22/81) z^3"


def test_expand_generator_order_zero_rho(capsys):
    _, out, _ = run(capsys, "expand", "st:lambda=0:order:rho=0", "--what", "generator")
    assert out.strip() == "1 + 2 z + 2 z^2 + 2 z^3"


def test_expand_inverse_polynomials(capsys):
    code, out, _ = run(capsys, "expand", "st:lambda=0:order:rho=0", "--what", "inverse", "--order", "5")
    assert code == 0
    assert "w^2: -a2" in out
    assert "2*a2**2 - a3" in out
    assert "14*a2**4" in out


def test_expand_operator_symbolic(capsys):
    code, out, _ = run(capsys, "expand", "st:lambda=1:order:rho=0", "--what", "operator", "--order", "2")
    assert code == 0
    assert "3*a2" in out  # (1 + 2 lambda) a2 at lambda = 1


# -- sweep -------------------------------------------------------------------


def test_sweep_a5_two_variants(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "sweep", "st:lambda=0:order:rho={}",
        "--param", "rho", "--range", "0:0.5:6", "--coeffs", "a5", "--out", str(path),
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["param", "coeff", "bound", "branch", "variant"]
    assert len(rows) == 13  # header + 6 grid points x 2 variants
    assert {r[4] for r in rows[1:]} == {"stated", "proof"}


def test_sweep_lambda_monotone(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "sweep", "st:lambda={}:order:rho=0",
        "--param", "lambda", "--range", "0:2:9", "--coeffs", "a2", "--out", str(path),
    )
    assert code == 0
    bounds = [float(r[2]) for r in list(csv.reader(io.StringIO(path.read_text())))[1:]]
    assert all(b1 >= b2 - 1e-12 for b1, b2 in zip(bounds, bounds[1:]))


def test_sweep_zero_steps_errors(capsys):
    code, _, _ = run(capsys, "sweep", "st:lambda={}:order:rho=0",
                     "--param", "lambda", "--range", "0:2:0", "--coeffs", "a2")
    assert code == 1


def test_sweep_requires_single_placeholder(capsys):
    code, _, err = run(capsys, "sweep", "st:lambda=0:order:rho=0",
                       "--param", "rho", "--range", "0:0.5:3", "--coeffs", "a2")
    assert code == 1 and "placeholder" in err


# -- report ------------------------------------------------------------------


def test_report_grid_small(capsys):
    code, out, _ = run(
        capsys, "report", "--samples", "150", "--refine-top", "0",
        "--seed", "3", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    specs = {row["spec"] for row in doc["rows"]}
    assert len(specs) == 21  # 18 operator grid + 3 strong a5 (order a5 overlaps)
    assert len(doc["rows"]) == 18 * 3 + 6 * 2
    assert all(not row["violated"] for row in doc["rows"] if row["proven"])
