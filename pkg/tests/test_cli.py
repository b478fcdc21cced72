import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from towerlab.cli import main, parse_degrees, parse_mu

SCHEMA = json.loads(resources.files("towerlab").joinpath("schemas/output.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def long_rows(doc):
    return {(r["level"], r["statistic"]): r["value"] for r in doc["rows"]}


# ---------------------------------------------------------------- parsing

def test_degree_syntax():
    assert parse_degrees("1..3,6") == [1, 2, 3, 6]
    assert parse_degrees("4") == [4]
    with pytest.raises(ValueError):
        parse_degrees("3..1")


def test_mu_syntax():
    assert parse_mu("1/10,0.5") == [pytest.approx(0.1), 0.5]
    with pytest.raises(ValueError):
        parse_mu("0")


# ---------------------------------------------------------------- count

def test_count_hermitian(capsys):
    code, out, _ = run(capsys, "count", "--spec", "T0", "--q", "2", "--level", "2,0", "--m", "1..2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["n_affine"] == "8" and rows[0]["n_total"] == "9" and rows[0]["m"] == "1"
    assert len(rows) == 2


def test_count_t3_over_f16(capsys):
    code, doc = run_json(capsys, "count", "--spec", "T3", "--level", "2,0", "--m", "4")
    assert code == 0
    assert doc["rows"][0]["n_total"] == 65


def test_invalid_level_exits_one(capsys):
    code, _, err = run(capsys, "count", "--spec", "T0", "--q", "2", "--level", "0,0")
    assert code == 1 and "invalid" in err


def test_cap_refusal_exits_two_before_work(capsys):
    code, doc = run_json(capsys, "count", "--spec", "T0", "--q", "4", "--level", "2,0", "--m", "7")
    assert code == 2
    assert doc["error"]["type"] == "cap_refusal" and "268435456" in doc["error"]["message"]


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TOWERLAB_CAP", "2^8")
    code, _, err = run(capsys, "count", "--spec", "T0", "--q", "2", "--level", "2,0", "--m", "5")
    assert code == 2 and "256" in err
    monkeypatch.setenv("TOWERLAB_CAP", "nonsense")
    code, _, _ = run(capsys, "count", "--spec", "T0", "--q", "2", "--level", "2,0")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["count", "--spec", "T0", "--level", "1,0"],  # missing --q
    ["count", "--spec", "T9", "--q", "2", "--level", "1,0"],
    ["count", "--spec", "T0", "--q", "6", "--level", "1,0"],
    ["count", "--spec", "T0", "--q", "2"],
    ["count", "--spec", "T0", "--q", "2", "--level", "1,0", "--m", "x"],
    ["frobnicate"],
    [],
])
def test_invalid_configs_exit_one(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_spec_file_accepted(capsys, tmp_path):
    path = tmp_path / "herm.json"
    path.write_text(json.dumps({
        "name": "H3", "p": 3, "q": 3, "constant_field_degree": 2,
        "steps": [{"Q": 3, "rhs": "x^(q+1)", "ratio_rule": True}], "densification": 0,
    }))
    code, doc = run_json(capsys, "count", "--spec", str(path), "--level", "2,0")
    assert code == 0 and doc["rows"][0]["n_total"] == 28


# ---------------------------------------------------------------- census / zeta / bounds

def test_census_command(capsys):
    code, doc = run_json(capsys, "census", "--spec", "T0", "--q", "2", "--level", "2,0")
    assert code == 0
    rows = doc["rows"]
    assert rows[0]["g"] == 1 and rows[0]["N_m"] == 9 and rows[1]["B_m"] == 0
    assert all(r["provenance"] == "exact" for r in rows)


def test_census_lower_bound_level(capsys):
    code, doc = run_json(capsys, "census", "--spec", "T0", "--q", "2", "--level", "3,0", "--m", "1")
    assert code == 0
    assert doc["rows"] == [{"spec": "T0", "level": "3,0", "q": 4, "g": None, "m": 1, "N_m": 12,
                            "B_m": None, "provenance": "lower"}]


def test_zeta_command(capsys):
    code, doc = run_json(capsys, "zeta", "--spec", "T0", "--q", "2", "--level", "2,0")
    vals = long_rows(doc)
    assert code == 0
    assert [vals[("2,0", f"a[{i}]")] for i in range(3)] == ["1", "4", "4"]
    assert vals[("2,0", "h")] == "9" and vals[("2,0", "A[10]")] == str(3 * (4**10 - 1))
    assert vals[("2,0", "root_moduli_sqrt_q")] == "true"


def test_zeta_refuses_uncertified_level(capsys):
    code, doc = run_json(capsys, "zeta", "--spec", "T0", "--q", "2", "--level", "3,0")
    assert code == 1 and doc["error"]["type"] == "invalid_config"


def test_bounds_direct(capsys):
    code, doc = run_json(capsys, "bounds", "--q", "16", "--g", "2", "--b1", "33", "--h", "625")
    vals = long_rows(doc)
    assert code == 0
    assert vals[("direct", "L2")] == "216" and vals[("direct", "h_over_L2")] == "625/216"
    assert vals[("direct", "h_gt_q_pow_g")] == "true" and vals[("direct", "L3")] == "NA"


def test_bounds_direct_needs_all_inputs(capsys):
    code, _, _ = run(capsys, "bounds", "--q", "16", "--g", "2")
    assert code == 1


def test_bounds_from_level(capsys):
    code, doc = run_json(capsys, "bounds", "--spec", "T0", "--q", "2", "--level", "2,0")
    vals = long_rows(doc)
    assert code == 0 and vals[("2,0", "h_over_L1")] == "10" and vals[("2,0", "h_over_L2")] == "NA"


# ---------------------------------------------------------------- asym

def test_asym_grid(capsys):
    code, doc = run_json(capsys, "asym", "--q", "4", "--r", "1", "--mu", "0.1,0.33333,1.0")
    vals = {r["statistic"]: r["value"] for r in doc["rows"]}
    deltas = [k for k in vals if k.startswith("delta[")]
    assert code == 0 and len(deltas) == 3
    assert vals["mu0"] == "1/3"
    assert vals["delta[1]"] == vals["H"]
    # continuity: the value just below mu0 is close to the value at mu0
    near = float(vals["delta[33333/100000]"])
    at = float(vals["H"]) - (1 - 1 / 3) * float(vals["log_q"])
    assert abs(near - at) < 1e-4


def test_asym_non_square(capsys):
    code, out, err = run(capsys, "asym", "--q", "2", "--r", "1")
    assert code == 1 and "Drinfeld-Vladut" in err and "square" in err


def test_asym_beta_two(capsys):
    code, doc = run_json(capsys, "asym", "--q", "2", "--r", "2")
    assert code == 0 and long_rows(doc)[("q=2,r=2", "beta[2]")] == "1/2"


def test_asym_digits(capsys):
    code, doc = run_json(capsys, "asym", "--q", "4", "--r", "1", "--digits", "20")
    h = long_rows(doc)[("q=4,r=1", "H")]
    assert code == 0 and len(h.replace(".", "")) == 20


# ---------------------------------------------------------------- report

def test_report_rows(capsys):
    code, doc = run_json(capsys, "report", "--spec", "T0", "--q", "2", "--level", "2,0", "--level", "3,0")
    vals = long_rows(doc)
    assert code == 0
    assert vals[("2,0", "h")] == "9" and vals[("2,0", "h_gt_q_pow_g")] == "true"
    assert vals[("2,0", "h_over_L1")] == "10"
    assert vals[("3,0", "mass_ge_census_bound")] == "true" and vals[("3,0", "genus")] == "NA"
    assert ("3,0", "h") not in vals
    assert vals[("profile", "mu0")] == "1/3"
    assert vals[("profile", "H")].startswith("1.67397643357167154627")


def test_report_t3_mass_flag(capsys):
    code, doc = run_json(capsys, "report", "--spec", "T3", "--level", "2,0")
    vals = long_rows(doc)
    assert code == 0
    assert vals[("2,0", "mass_total")] == "65" and vals[("2,0", "census_bound")] == "60"
    assert vals[("2,0", "mass_ge_census_bound")] == "true"
    assert vals[("profile", "density_target")] == "1/2"


@pytest.mark.parametrize("argv", [
    ["report", "--spec", "T0", "--q", "2", "--level", "1,0", "--level", "2,0", "--level", "3,0"],
    ["census", "--spec", "T3", "--level", "1,1", "--level", "2,1"],
    ["asym", "--q", "9", "--r", "2", "--mu", "1/7,1/2"],
])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_output_is_byte_identical(tmp_path, argv, fmt):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.{fmt}"
        assert main(argv + ["--format", fmt, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "towerlab.cli", "asym", "--q", "2", "--r", "1", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, SCHEMA)
    assert doc["error"]["exit_code"] == 1
