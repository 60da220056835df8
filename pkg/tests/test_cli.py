import json
import subprocess
import sys

import jsonschema
import pytest

from gelfand_morse.cli import main
from gelfand_morse.export import CSV_HEADER, load_schema

SWEEP = """
[problem]
dimension = 3

[nonlinearity]
kind = "exponential"

[sweep]
a_min = 0.0
a_max = 8.0
count = 41
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def run_sweep(tmp_path, out, *extra):
    cfg = write(tmp_path, SWEEP)
    return main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / out), *extra])


def test_sweep_outputs(tmp_path, capsys):
    assert run_sweep(tmp_path, "out") == 0
    out = tmp_path / "out"
    lines = (out / "curve.csv").read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[0] == "a,lambda,morse_index,pohozaev_residual,energy_residual,grad_mass_0.25,decay_fit"
    assert len(lines) == 42
    events = json.loads((out / "events.json").read_text())
    jsonschema.validate(events, load_schema("events"))
    assert len(events["turning_points"]) == 2
    schema = load_schema("point")
    for rec in json.loads((out / "points.json").read_text()):
        jsonschema.validate(rec, schema)
    dat = (out / "index_vs_a.dat").read_text().splitlines()
    assert dat[0] == "0.0 0" and len(dat) == 41
    assert "turning points: 2" in (out / "summary.txt").read_text()
    assert "turning points: 2" in capsys.readouterr().out


def test_csv_byte_stable(tmp_path):
    assert run_sweep(tmp_path, "one") == 0
    assert run_sweep(tmp_path, "two", "--jobs", "2") == 0
    a = (tmp_path / "one" / "curve.csv").read_bytes()
    b = (tmp_path / "two" / "curve.csv").read_bytes()
    assert a == b


def test_sweep_abort_exit_3(tmp_path):
    cfg = write(tmp_path, SWEEP + "\n[solver]\nr_max = 1.0\n")
    assert main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 3
    assert not (tmp_path / "o" / "curve.csv").exists()


@pytest.mark.parametrize("text", [
    "[problem]\ndimension = 1\n",
    "[problem]\ndimension = 3\n[extra]\nx = 1\n",
    "[problem\n",
])
def test_sweep_invalid_exit_2(tmp_path, text, capsys):
    cfg = write(tmp_path, text)
    assert main(["sweep", "--config", str(cfg)]) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_missing_config_exit_2(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "none.toml")]) == 2


def test_sweep_flag_overrides(tmp_path):
    cfg = write(tmp_path, SWEEP)
    code = main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "o"),
                 "--rk-tol", "1e-11", "--grid-points", "1025"])
    assert code == 0
    rec = json.loads((tmp_path / "o" / "points.json").read_text())[5]
    assert rec["grid_points"] == 1025


def test_verify_critical_ok(tmp_path, capsys):
    code = main(["verify-critical", "--n", "3", "--mu", "0.5", "0.25", "--out-dir", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "critical.json").read_text())
    jsonschema.validate(doc, load_schema("critical"))
    assert doc["passed"] and doc["ladder"]["strictly_increasing"]


def test_verify_critical_mu_one_fails_on_index(capsys):
    # mu = 1 carries a radial kernel on B_1, mu > 1 has index 0
    assert main(["verify-critical", "--n", "3", "--mu", "1", "0.5", "0.25"]) == 1
    assert "check failed: morse_index at n=3, mu=1" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["verify-critical", "--n", "10", "--mu", "0.5"],
    ["verify-critical", "--n", "2", "--mu", "0.5"],
    ["verify-critical", "--n", "3"],
    ["verify-critical", "--n", "3", "--mu"],
    ["verify-critical", "--n", "3", "--mu", "-1"],
])
def test_verify_critical_invalid(argv):
    assert main(argv) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


@pytest.mark.parametrize("nl,holds", [
    ('kind = "exponential"', True),
    ('kind = "shifted_power"\nalpha = 1.0\np = 5.0', False),
    ('kind = "shifted_power"\nalpha = 1.0\np = 7.0', True),
])
def test_check_nonlinearity(tmp_path, capsys, nl, holds):
    cfg = write(tmp_path, f"[problem]\ndimension = 3\n[nonlinearity]\n{nl}\n")
    assert main(["check-nonlinearity", "--config", str(cfg)]) == 0
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, load_schema("certificate"))
    assert doc["certificate"]["holds"] is holds
    assert (doc["lower_bound"] is not None) is holds


def test_check_nonlinearity_constant_table(tmp_path, capsys):
    (tmp_path / "c.csv").write_text("0,2\n1000,2\n")
    cfg = write(tmp_path, '[problem]\ndimension = 3\n[nonlinearity]\nkind = "table"\npath = "c.csv"\n')
    assert main(["check-nonlinearity", "--config", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)["certificate"]["holds"] is False


def test_check_nonlinearity_n2_invalid(tmp_path):
    cfg = write(tmp_path, "[problem]\ndimension = 2\n")
    assert main(["check-nonlinearity", "--config", str(cfg)]) == 2


def test_morse_and_diagnose(tmp_path, capsys):
    cfg = write(tmp_path, "[problem]\ndimension = 3\n")
    assert main(["morse", "--config", str(cfg), "--a", "3.0"]) == 0
    rec = json.loads(capsys.readouterr().out)
    jsonschema.validate(rec, load_schema("point"))
    assert rec["morse_index"] == 1 and set(rec["diagnostics"]) == {"residual"}
    assert main(["diagnose", "--config", str(cfg), "--a", "3.0", "--out-dir", str(tmp_path)]) == 0
    rec = json.loads((tmp_path / "diagnostics_a3.json").read_text())
    jsonschema.validate(rec, load_schema("point"))
    assert rec["diagnostics"]["decay_exponent_fit"] > 0


def test_morse_unreachable_point_exit_3(tmp_path):
    cfg = write(tmp_path, "[problem]\ndimension = 3\n[solver]\nr_max = 0.5\n")
    assert main(["morse", "--config", str(cfg), "--a", "3.0"]) == 3


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "gelfand_morse.cli", "verify-critical", "--n", "10",
                           "--mu", "1"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "3 <= n <= 9" in proc.stderr


def test_shipped_configs_parse():
    from pathlib import Path

    from gelfand_morse.config import load_config

    root = Path(__file__).resolve().parents[1] / "configs"
    names = sorted(p.name for p in root.glob("*.toml"))
    assert names
    for name in names:
        load_config(root / name)
