"""Strict TOML run configuration.

Example::

    [problem]
    dimension = 3

    [nonlinearity]
    kind = "exponential"        # or "shifted_power" (alpha, p) or "table" (path)

    [sweep]
    a_min = 0.0
    a_max = 30.0
    count = 601                 # or: a_values = [0.0, 0.5, ...]

    [solver]
    rk_tol = 1e-12
    grid_points = 2048

Unknown sections or keys are rejected.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .diagnostics import DECAY_RADII, FPRIME_RADII
from .nonlinearity import Nonlinearity, exponential, load_table, shifted_power
from .radial_solver import SolverOptions

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "problem": {"dimension"},
    "nonlinearity": {"kind", "alpha", "p", "path"},
    "sweep": {"a_min", "a_max", "count", "a_values"},
    "solver": {"rk_tol", "grid_points", "r_max", "zero_tol", "residual_tol"},
    "spectrum": {"max_ell_override"},
    "diagnostics": {"decay_radii", "fprime_radii", "fmass_radii"},
    "growth": {"epsilon", "t0", "t_max", "samples"},
    "output": {"out_dir"},
}


@dataclass
class RunConfig:
    n: int
    nonlinearity: dict
    a_grid: np.ndarray | None = None
    solver: SolverOptions = SolverOptions()
    max_ell_override: int | None = None
    decay_radii: tuple = DECAY_RADII
    fprime_radii: tuple = FPRIME_RADII
    fmass_radii: tuple = (1.0, 0.5, 0.25)
    epsilon: float = 1.0
    t0: float | None = None
    t_max: float = 1e3
    samples: int = 1000
    out_dir: Path = Path("out")
    base_dir: Path = field(default=Path("."), repr=False)

    def build_nonlinearity(self) -> Nonlinearity:
        spec = self.nonlinearity
        kind = spec["kind"]
        if kind == "exponential":
            return exponential()
        if kind == "shifted_power":
            return shifted_power(spec["alpha"], spec["p"])
        path = Path(spec["path"])
        if not path.is_absolute():
            path = self.base_dir / path
        try:
            return load_table(path)
        except OSError as exc:
            raise ConfigError(f"cannot read table {path}: {exc.strerror}") from exc

    def with_overrides(self, **kwargs) -> "RunConfig":
        solver_keys = {"rk_tol", "grid_points"}
        solver_kw = {k: v for k, v in kwargs.items() if k in solver_keys and v is not None}
        rest = {k: v for k, v in kwargs.items() if k not in solver_keys and v is not None}
        try:
            solver = replace(self.solver, **solver_kw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return replace(self, solver=solver, **rest)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    return parse_config(text, base_dir=path.parent, source=str(path))


def parse_config(text: str, base_dir: Path = Path("."), source: str = "<config>") -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    for section, body in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"{source}: unknown section [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"{source}: '{section}' must be a table")
        unknown = set(body) - _SCHEMA[section]
        if unknown:
            raise ConfigError(f"{source}: unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")

    def get(section, key, default=None):
        return raw.get(section, {}).get(key, default)

    n = get("problem", "dimension")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError(f"{source}: [problem] dimension must be an integer")
    if n < 2:
        raise ConfigError(f"{source}: dimension must be >= 2, got {n}")

    nl = dict(raw.get("nonlinearity", {"kind": "exponential"}))
    kind = nl.get("kind")
    if kind not in ("exponential", "shifted_power", "table"):
        raise ConfigError(f"{source}: nonlinearity kind must be exponential, shifted_power or table")
    if kind == "shifted_power":
        for key in ("alpha", "p"):
            if not _is_number(nl.get(key)):
                raise ConfigError(f"{source}: shifted_power needs numeric '{key}'")
        if not nl["alpha"] > 0 or not nl["p"] > 1:
            raise ConfigError(f"{source}: shifted_power needs alpha > 0 and p > 1")
    if kind == "table" and not isinstance(nl.get("path"), str):
        raise ConfigError(f"{source}: table nonlinearity needs a 'path'")

    a_grid = _a_grid(raw.get("sweep"), source)

    solver_kw = {k: v for k, v in raw.get("solver", {}).items()}
    for k, v in solver_kw.items():
        if k == "grid_points":
            if not isinstance(v, int) or v < 3:
                raise ConfigError(f"{source}: grid_points must be an integer >= 3")
        elif not _is_number(v) or not v > 0:
            raise ConfigError(f"{source}: [solver] {k} must be > 0")
    solver = SolverOptions(**solver_kw)

    ell = get("spectrum", "max_ell_override")
    if ell is not None and (not isinstance(ell, int) or ell < 0):
        raise ConfigError(f"{source}: max_ell_override must be a nonnegative integer")

    radii = {}
    for key, default in (("decay_radii", DECAY_RADII), ("fprime_radii", FPRIME_RADII),
                         ("fmass_radii", (1.0, 0.5, 0.25))):
        val = get("diagnostics", key, default)
        if not isinstance(val, (list, tuple)) or not all(_is_number(r) and 0 < r <= 1 for r in val):
            raise ConfigError(f"{source}: {key} must be a list of radii in (0, 1]")
        radii[key] = tuple(float(r) for r in val)
    if len(radii["decay_radii"]) < 4:
        raise ConfigError(f"{source}: decay_radii needs at least 4 values")

    eps = get("growth", "epsilon", 1.0)
    t0 = get("growth", "t0")
    t_max = get("growth", "t_max", 1e3)
    samples = get("growth", "samples", 1000)
    if not _is_number(eps) or not eps > 0:
        raise ConfigError(f"{source}: growth epsilon must be > 0")
    if t0 is not None and (not _is_number(t0) or not t0 > 0):
        raise ConfigError(f"{source}: growth t0 must be > 0")
    if not _is_number(t_max) or not t_max > 0:
        raise ConfigError(f"{source}: growth t_max must be > 0")
    if not isinstance(samples, int) or samples < 100:
        raise ConfigError(f"{source}: growth samples must be an integer >= 100")

    out_dir = get("output", "out_dir", "out")
    if not isinstance(out_dir, str):
        raise ConfigError(f"{source}: out_dir must be a string")
    out_path = Path(out_dir)
    if not out_path.is_absolute():
        out_path = base_dir / out_path

    return RunConfig(
        n=n,
        nonlinearity=nl,
        a_grid=a_grid,
        solver=solver,
        max_ell_override=ell,
        decay_radii=radii["decay_radii"],
        fprime_radii=radii["fprime_radii"],
        fmass_radii=radii["fmass_radii"],
        epsilon=float(eps),
        t0=None if t0 is None else float(t0),
        t_max=float(t_max),
        samples=samples,
        out_dir=out_path,
        base_dir=base_dir,
    )


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _a_grid(sweep: dict | None, source: str) -> np.ndarray | None:
    if sweep is None:
        return None
    if "a_values" in sweep:
        if set(sweep) & {"a_min", "a_max", "count"}:
            raise ConfigError(f"{source}: give either a_values or a_min/a_max/count")
        vals = sweep["a_values"]
        if not isinstance(vals, list) or not vals or not all(_is_number(v) for v in vals):
            raise ConfigError(f"{source}: a_values must be a non-empty list of numbers")
        grid = np.array(vals, dtype=float)
    else:
        try:
            a_min, a_max, count = sweep["a_min"], sweep["a_max"], sweep["count"]
        except KeyError as exc:
            raise ConfigError(f"{source}: [sweep] needs a_min, a_max and count") from exc
        if not (_is_number(a_min) and _is_number(a_max)):
            raise ConfigError(f"{source}: a_min and a_max must be numbers")
        if not isinstance(count, int) or count < 1:
            raise ConfigError(f"{source}: count must be an integer >= 1")
        if count == 1:
            grid = np.array([float(a_min)])
        else:
            if not a_max > a_min:
                raise ConfigError(f"{source}: a_max must exceed a_min")
            grid = np.linspace(float(a_min), float(a_max), count)
    if grid[0] < 0 or np.any(np.diff(grid) <= 0):
        raise ConfigError(f"{source}: sweep values must be >= 0 and strictly increasing")
    return grid
