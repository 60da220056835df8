"""Solution curve of the Gelfand problem parameterized by a = u(0).

For radial solutions the shooting map a -> lambda(a) is single valued, so the
curve is swept directly in a. Turning points are the local extrema of
lambda(a); Morse index changes are located between neighbouring sweep points
and matched against turning points.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import DECAY_RADII, FPRIME_RADII, diagnose
from .nonlinearity import Nonlinearity
from .radial_solver import (
    ShootingError,
    SolutionPoint,
    SolverOptions,
    shoot_radius,
    solve_point,
)
from .spectrum import UnconvergedPointError, morse_index

__all__ = [
    "SweepOptions",
    "BifurcationCurve",
    "TurningPoint",
    "IndexJump",
    "SweepFailure",
    "SweepAborted",
    "IndexMonotonicityError",
    "BoundedRegion",
    "sweep",
    "compute_point",
    "detect_turning_points",
    "detect_index_jumps",
    "bounded_index_region",
]

log = logging.getLogger(__name__)

MAX_FAILURE_FRACTION = 0.10
REFINE_BUDGET = 8


class SweepAborted(RuntimeError):
    def __init__(self, failures, total):
        super().__init__(f"{len(failures)} of {total} sweep points failed")
        self.failures = failures
        self.total = total


class IndexMonotonicityError(RuntimeError):
    def __init__(self, curve, a_prev, a_next, old, new):
        super().__init__(
            f"Morse index drops from {old} to {new} between a={a_prev:g} and a={a_next:g}"
        )
        self.curve = curve


@dataclass(frozen=True)
class SweepOptions:
    solver: SolverOptions = SolverOptions()
    decay_radii: tuple = DECAY_RADII
    fprime_radii: tuple = FPRIME_RADII
    fmass_radii: tuple = (1.0, 0.5, 0.25)
    max_ell_override: int | None = None
    jobs: int = 1
    check_index_monotone: bool = True


@dataclass
class SweepFailure:
    a: float
    reason: str


@dataclass
class TurningPoint:
    a: float
    lam: float
    kind: str  # "max" or "min" of lambda(a)
    cell: tuple[float, float]
    bracket: float
    shoots: int
    resolved: bool = True

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "lambda": self.lam,
            "kind": self.kind,
            "cell": list(self.cell),
            "bracket": self.bracket,
            "shoots": self.shoots,
            "resolved": self.resolved,
        }


@dataclass
class IndexJump:
    a_left: float
    a_right: float
    old: int
    new: int
    modes: list[int]
    turning_point: float | None  # a* of the matched turning point
    matched: bool
    possible_bifurcation: bool = False

    def to_dict(self) -> dict:
        return {
            "a_left": self.a_left,
            "a_right": self.a_right,
            "old": self.old,
            "new": self.new,
            "modes": self.modes,
            "turning_point": self.turning_point,
            "status": "matched" if self.matched else "unmatched",
            "possible_bifurcation": self.possible_bifurcation,
        }


@dataclass
class BifurcationCurve:
    f: Nonlinearity
    n: int
    points: list[SolutionPoint]
    options: SweepOptions = SweepOptions()
    failures: list[SweepFailure] = field(default_factory=list)
    turning_points: list[TurningPoint] = field(default_factory=list)
    index_jumps: list[IndexJump] = field(default_factory=list)

    @property
    def a(self) -> np.ndarray:
        return np.array([p.a for p in self.points])

    @property
    def lam(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])

    @property
    def indices(self) -> list[int | None]:
        return [p.morse_index for p in self.points]


def compute_point(f: Nonlinearity, n: int, a: float, options: SweepOptions = SweepOptions()) -> SolutionPoint:
    """shoot -> rescale -> Morse index -> diagnostics for one center value."""
    point = solve_point(f, n, a, options.solver)
    morse_index(point, f, max_ell_override=options.max_ell_override,
                residual_tol=options.solver.residual_tol)
    diagnose(point, f, options.decay_radii, options.fprime_radii, options.fmass_radii)
    return point


def _task(args):
    f, n, a, options = args
    try:
        return compute_point(f, n, a, options)
    except (ShootingError, UnconvergedPointError, FloatingPointError) as exc:
        return SweepFailure(a=float(a), reason=f"{type(exc).__name__}: {exc}")


def sweep(f: Nonlinearity, n: int, a_grid, options: SweepOptions = SweepOptions()) -> BifurcationCurve:
    """Trace the curve over ``a_grid`` and detect turning points and index jumps.

    Failed points become gaps; more than 10% failures raise :class:`SweepAborted`.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    if a_grid.ndim != 1 or a_grid.size == 0:
        raise ValueError("a_grid must be a non-empty 1-d sequence")
    if a_grid[0] < 0 or np.any(np.diff(a_grid) <= 0):
        raise ValueError("a_grid must be strictly increasing and start at a >= 0")
    tasks = [(f, n, float(a), options) for a in a_grid]
    if options.jobs > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (8 * options.jobs))))
    else:
        results = [_task(t) for t in tasks]
    points = [r for r in results if isinstance(r, SolutionPoint)]
    failures = [r for r in results if isinstance(r, SweepFailure)]
    for fail in failures:
        log.warning("sweep gap at a=%g: %s", fail.a, fail.reason)
    if len(failures) > MAX_FAILURE_FRACTION * len(results):
        raise SweepAborted(failures, len(results))
    curve = BifurcationCurve(f=f, n=n, points=points, options=options, failures=failures)
    curve.turning_points = detect_turning_points(curve)
    curve.index_jumps = detect_index_jumps(curve)
    if options.check_index_monotone and f.kind in ("exponential", "shifted_power"):
        _assert_monotone_index(curve)
    return curve


def _usable(point: SolutionPoint) -> bool:
    return point.morse is not None and point.morse.degenerate == 0


def _assert_monotone_index(curve: BifurcationCurve):
    pts = [p for p in curve.points if _usable(p)]
    for p, q in zip(pts, pts[1:]):
        if q.morse_index < p.morse_index:
            raise IndexMonotonicityError(curve, p.a, q.a, p.morse_index, q.morse_index)


def _noise_floor(lam: np.ndarray) -> float:
    return 1e-10 * max(1.0, float(np.max(np.abs(lam)))) if lam.size else 0.0


def detect_turning_points(curve: BifurcationCurve, refine: bool = True) -> list[TurningPoint]:
    """Local extrema of lambda(a), refined by re-shooting.

    Each candidate is refined by successive parabolic interpolation through
    the best sample and its two bracketing neighbours, re-shooting at the
    vertex, with at most 8 extra shoots. Runs of three or more cells with
    |d lambda| below the noise floor are reported as unresolved plateaus.
    """
    a = curve.a
    lam = curve.lam
    if a.size < 3:
        return []
    noise = _noise_floor(lam)
    d = np.diff(lam)
    sign = np.where(d > noise, 1, np.where(d < -noise, -1, 0))
    found = []
    last_sign, last_cell, flat_run = 0, -1, 0
    for i, s in enumerate(sign):
        if s == 0:
            flat_run += 1
            if flat_run == 3:
                found.append(TurningPoint(
                    a=float(a[i - 1]), lam=float(lam[i - 1]), kind="plateau",
                    cell=(float(a[i - 2]), float(a[i + 1])),
                    bracket=float(a[i + 1] - a[i - 2]), shoots=0, resolved=False,
                ))
            continue
        flat_run = 0
        if last_sign and s != last_sign:
            cand = np.arange(last_cell + 1, i + 1)
            j = int(cand[np.argmax(last_sign * lam[cand])])
            j = min(max(j, 1), a.size - 2)
            found.append(_refine(curve, j, "max" if last_sign > 0 else "min", refine))
        last_sign, last_cell = s, i
    return found


def _refine(curve: BifurcationCurve, j: int, kind: str, refine: bool) -> TurningPoint:
    a = curve.a
    lam = curve.lam
    sgn = 1.0 if kind == "max" else -1.0
    xs = [float(a[j - 1]), float(a[j]), float(a[j + 1])]
    ys = [float(lam[j - 1]), float(lam[j]), float(lam[j + 1])]
    cell = (xs[0], xs[2])
    shoots = 0
    while refine and shoots < REFINE_BUDGET:
        k = int(np.argmax(sgn * np.array(ys)))
        left = [m for m in range(len(xs)) if xs[m] < xs[k]]
        right = [m for m in range(len(xs)) if xs[m] > xs[k]]
        if not left or not right:
            break
        l = max(left, key=lambda m: xs[m])
        r = min(right, key=lambda m: xs[m])
        vertex = _parabola_vertex(xs[l], xs[k], xs[r], ys[l], ys[k], ys[r])
        if vertex is None or not xs[l] < vertex < xs[r]:
            break
        if abs(vertex - xs[k]) < 1e-12 * max(1.0, abs(vertex)):
            break
        try:
            R, _ = shoot_radius(curve.f, curve.n, vertex, curve.options.solver)
        except ShootingError:
            break
        shoots += 1
        xs.append(vertex)
        ys.append(R * R)
    k = int(np.argmax(sgn * np.array(ys)))
    left = [x for x in xs if x < xs[k]]
    right = [x for x in xs if x > xs[k]]
    bracket = (min(right) if right else xs[k]) - (max(left) if left else xs[k])
    return TurningPoint(a=xs[k], lam=ys[k], kind=kind, cell=cell, bracket=float(bracket),
                        shoots=shoots)


def _parabola_vertex(x0, x1, x2, y0, y1, y2):
    d0 = (x1 - x0) * (y1 - y2)
    d1 = (x1 - x2) * (y1 - y0)
    den = d0 - d1
    if den == 0:
        return None
    return x1 - 0.5 * ((x1 - x0) * d0 - (x1 - x2) * d1) / den


def detect_index_jumps(curve: BifurcationCurve) -> list[IndexJump]:
    """Cells where the Morse index changes, with per-mode attribution.

    Points with degenerate eigenvalues are skipped. A jump is matched when a
    turning point lies within one cell of it.
    """
    pts = [p for p in curve.points if _usable(p)]
    jumps = []
    for p, q in zip(pts, pts[1:]):
        if p.morse_index == q.morse_index:
            continue
        width = q.a - p.a
        modes = _changed_modes(p, q)
        tp = None
        for t in curve.turning_points:
            if t.resolved and p.a - width <= t.a <= q.a + width:
                tp = t.a
                break
        jumps.append(IndexJump(
            a_left=p.a, a_right=q.a, old=p.morse_index, new=q.morse_index,
            modes=modes, turning_point=tp, matched=tp is not None,
            possible_bifurcation=any(m >= 1 for m in modes),
        ))
    return jumps


def _changed_modes(p: SolutionPoint, q: SolutionPoint) -> list[int]:
    cp = {m.ell: m.neg_count for m in p.morse.per_mode}
    cq = {m.ell: m.neg_count for m in q.morse.per_mode}
    return sorted(ell for ell in set(cp) | set(cq) if cp.get(ell, 0) != cq.get(ell, 0))


@dataclass
class BoundedRegion:
    a_sup: float
    range_exhausted: bool
    k: int


def bounded_index_region(curve: BifurcationCurve, k: int) -> BoundedRegion:
    """Largest swept a whose Morse index is at most k.

    ``range_exhausted`` is set when that is the last swept point, in which
    case the sweep does not bound the region and should be extended.
    """
    pts = [p for p in curve.points if p.morse_index is not None]
    if not pts:
        raise ValueError("curve has no indexed points")
    ok = [p.a for p in pts if p.morse_index <= k]
    if not ok:
        return BoundedRegion(a_sup=math.nan, range_exhausted=False, k=k)
    a_sup = max(ok)
    return BoundedRegion(a_sup=a_sup, range_exhausted=a_sup == pts[-1].a, k=k)
