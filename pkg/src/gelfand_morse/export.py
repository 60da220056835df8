"""Serialization of points, curves and events (CSV, JSON, gnuplot data)."""

from __future__ import annotations

import json
from importlib import resources
import math
from pathlib import Path

from .continuation import BifurcationCurve
from .radial_solver import SolutionPoint

CSV_HEADER = "a,lambda,morse_index,pohozaev_residual,energy_residual,grad_mass_0.25,decay_fit"


def _num(x) -> str:
    if x is None:
        return "nan"
    return repr(float(x))


def clean(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), indent=2, allow_nan=False) + "\n"


def point_record(point: SolutionPoint) -> dict:
    d = point.diagnostics
    return {
        "n": point.n,
        "a": point.a,
        "lambda": point.lam,
        "shoot_radius": point.shoot_radius,
        "grid_points": int(point.profile.grid.size),
        "morse_index": point.morse_index,
        "morse": None if point.morse is None else point.morse.to_dict(),
        "diagnostics": {k: v for k, v in d.items()},
    }


def curve_csv(curve: BifurcationCurve) -> str:
    lines = [CSV_HEADER]
    for p in curve.points:
        d = p.diagnostics
        gm = d.get("grad_mass", {}).get(repr(0.25))
        lines.append(",".join([
            _num(p.a),
            _num(p.lam),
            str(p.morse_index) if p.morse_index is not None else "",
            _num(d.get("pohozaev_residual")),
            _num(d.get("energy_residual")),
            _num(gm),
            _num(d.get("decay_exponent_fit")),
        ]))
    return "\n".join(lines) + "\n"


def events(curve: BifurcationCurve) -> dict:
    return {
        "n": curve.n,
        "nonlinearity": curve.f.label,
        "points": len(curve.points),
        "a_range": [float(curve.a[0]), float(curve.a[-1])] if curve.points else None,
        "failures": [{"a": fl.a, "reason": fl.reason} for fl in curve.failures],
        "turning_points": [t.to_dict() for t in curve.turning_points],
        "index_jumps": [j.to_dict() for j in curve.index_jumps],
    }


def summary_text(curve: BifurcationCurve) -> str:
    out = [
        f"nonlinearity {curve.f.label}, n = {curve.n}",
        f"{len(curve.points)} points, {len(curve.failures)} gaps",
    ]
    if curve.points:
        idx = [p.morse_index for p in curve.points if p.morse_index is not None]
        out.append(f"a in [{curve.a[0]:g}, {curve.a[-1]:g}], lambda in "
                   f"[{curve.lam.min():.6g}, {curve.lam.max():.6g}], index up to {max(idx, default=0)}")
    out.append(f"turning points: {len(curve.turning_points)}")
    for t in curve.turning_points:
        out.append(f"  {t.kind:7s} a* = {t.a:.10g}  lambda* = {t.lam:.10g}"
                   + ("" if t.resolved else "  (unresolved)"))
    out.append(f"index jumps: {len(curve.index_jumps)}")
    for j in curve.index_jumps:
        status = "matched" if j.matched else "UNMATCHED"
        out.append(f"  {j.old} -> {j.new} in [{j.a_left:.6g}, {j.a_right:.6g}] modes {j.modes} {status}")
    return "\n".join(out) + "\n"


def two_column(xs, ys) -> str:
    return "".join(f"{_num(x)} {y if isinstance(y, int) else _num(y)}\n" for x, y in zip(xs, ys))


def write_curve(curve: BifurcationCurve, out_dir: Path) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "curve": out_dir / "curve.csv",
        "events": out_dir / "events.json",
        "points": out_dir / "points.json",
        "summary": out_dir / "summary.txt",
        "lambda": out_dir / "lambda_vs_a.dat",
        "index": out_dir / "index_vs_a.dat",
    }
    files["curve"].write_text(curve_csv(curve))
    files["events"].write_text(dumps(events(curve)))
    files["points"].write_text(dumps([point_record(p) for p in curve.points]))
    files["summary"].write_text(summary_text(curve))
    files["lambda"].write_text(two_column(curve.a, curve.lam))
    files["index"].write_text(two_column(curve.a, [p.morse_index for p in curve.points]))
    return files


def load_schema(name: str) -> dict:
    """Published JSON schema: "point", "events", "certificate" or "critical"."""
    text = resources.files("gelfand_morse.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)
