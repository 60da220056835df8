import numpy as np
import pytest

from gelfand_morse.config import ConfigError, load_config, parse_config

BASE = """
[problem]
dimension = 3
"""


def test_minimal_defaults():
    cfg = parse_config(BASE)
    assert cfg.n == 3 and cfg.a_grid is None
    assert cfg.nonlinearity == {"kind": "exponential"}
    assert cfg.solver.grid_points == 2048
    assert cfg.decay_radii == (0.05, 0.1, 0.15, 0.25)


def test_full_config(tmp_path):
    (tmp_path / "f.csv").write_text("t,f\n0,1\n1,2\n2,4\n")
    text = BASE + """
[nonlinearity]
kind = "table"
path = "f.csv"

[sweep]
a_values = [0.5, 1.0, 1.5]

[solver]
rk_tol = 1e-11
grid_points = 1025

[spectrum]
max_ell_override = 3

[growth]
epsilon = 0.5
t0 = 2.0

[output]
out_dir = "results"
"""
    path = tmp_path / "run.toml"
    path.write_text(text)
    cfg = load_config(path)
    np.testing.assert_array_equal(cfg.a_grid, [0.5, 1.0, 1.5])
    assert cfg.solver.rk_tol == 1e-11 and cfg.solver.grid_points == 1025
    assert cfg.max_ell_override == 3
    assert cfg.out_dir == tmp_path / "results"
    assert cfg.build_nonlinearity().f(1.0) == pytest.approx(2.0)


def test_linspace_sweep():
    cfg = parse_config(BASE + "[sweep]\na_min = 0.0\na_max = 30.0\ncount = 601\n")
    assert cfg.a_grid.size == 601 and cfg.a_grid[-1] == 30.0


def test_overrides():
    cfg = parse_config(BASE).with_overrides(rk_tol=1e-10, grid_points=513, max_ell_override=None)
    assert cfg.solver.rk_tol == 1e-10 and cfg.solver.grid_points == 513
    with pytest.raises(ConfigError):
        parse_config(BASE).with_overrides(rk_tol=-1.0)


@pytest.mark.parametrize("text,needle", [
    ("[problem]\ndimension = 1\n", "dimension"),
    ("[problem]\ndimension = 3.0\n", "integer"),
    (BASE + "[problem2]\nx = 1\n", "unknown section"),
    (BASE + "[solver]\nrk_tol = 1e-12\ntypo = 1\n", "unknown key"),
    (BASE + "[solver]\nrk_tol = 0.0\n", "> 0"),
    (BASE + "[solver]\ngrid_points = 2\n", "grid_points"),
    (BASE + "[sweep]\na_min = 0.0\na_max = 1.0\ncount = 0\n", "count"),
    (BASE + "[sweep]\na_min = 0.0\na_max = 1.0\n", "count"),
    (BASE + "[sweep]\na_values = [1.0, 0.5]\n", "increasing"),
    (BASE + "[sweep]\na_values = [1.0]\ncount = 3\n", "either"),
    (BASE + '[nonlinearity]\nkind = "cubic"\n', "kind"),
    (BASE + '[nonlinearity]\nkind = "shifted_power"\nalpha = 1.0\np = 1.0\n', "p > 1"),
    (BASE + '[nonlinearity]\nkind = "table"\n', "path"),
    (BASE + "[diagnostics]\ndecay_radii = [0.1, 0.2, 0.3]\n", "at least 4"),
    (BASE + "[diagnostics]\nfprime_radii = [0.4, 1.5]\n", "(0, 1]"),
    (BASE + "[growth]\nepsilon = 0\n", "epsilon"),
])
def test_rejections(text, needle):
    with pytest.raises(ConfigError, match=None) as info:
        parse_config(text)
    assert needle in str(info.value)


def test_parse_error_has_position():
    with pytest.raises(ConfigError) as info:
        parse_config("[problem]\ndimension = = 3\n", source="x.toml")
    assert "x.toml" in str(info.value) and "line 2" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.toml")


def test_missing_table(tmp_path):
    cfg = parse_config(BASE + '[nonlinearity]\nkind = "table"\npath = "gone.csv"\n', base_dir=tmp_path)
    with pytest.raises(ConfigError):
        cfg.build_nonlinearity()
