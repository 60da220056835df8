"""Radial shooting for -Delta u = f(u) and rescaling to the unit ball.

For u(0) = a the radial problem u'' + (n-1)u'/r + f(u) = 0 is integrated
until its first zero R. Then v(y) = u(R y) solves -Delta v = R^2 f(v) on B_1
with v = 0 on the boundary, which gives the Gelfand pair (lambda, v) with
lambda = R^2 and ||v||_inf = a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .nonlinearity import Nonlinearity
from .quadrature import unit_grid

__all__ = [
    "SolverOptions",
    "RadialProfile",
    "SolutionPoint",
    "ShootingError",
    "NoZeroCrossing",
    "StepSizeUnderflow",
    "shoot",
    "shoot_radius",
    "rescale_to_unit_ball",
    "residual",
    "solve_point",
    "zero_point",
    "point_from_closed_form",
    "core_radius",
]


class ShootingError(RuntimeError):
    pass


class NoZeroCrossing(ShootingError):
    def __init__(self, a, r_last, u_last):
        super().__init__(f"u stays positive up to r={r_last:.6g} (u={u_last:.6g}) for a={a:.6g}")
        self.a = a
        self.r_last = r_last
        self.u_last = u_last


class StepSizeUnderflow(ShootingError):
    def __init__(self, a, r_last):
        super().__init__(f"step size underflow at r={r_last:.6g} for a={a:.6g}")
        self.a = a
        self.r_last = r_last


@dataclass(frozen=True)
class SolverOptions:
    rk_tol: float = 1e-12
    grid_points: int = 2048
    r_max: float = 1e3
    zero_tol: float = 1e-12
    max_steps: int = 2_000_000
    residual_tol: float = 1e-6

    def __post_init__(self):
        for name in ("rk_tol", "r_max", "zero_tol", "residual_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.grid_points < 3:
            raise ValueError("grid_points must be >= 3")


@dataclass
class RadialProfile:
    """Radial solution sampled on ``grid`` with u, u' and u'' at the nodes."""

    n: int
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    ddu: np.ndarray
    a: float

    @property
    def radius(self) -> float:
        return float(self.grid[-1])


@dataclass
class SolutionPoint:
    """A solution (lambda, u) of -Delta u = lambda f(u) on B_1, u = 0 on the sphere."""

    lam: float
    a: float
    profile: RadialProfile
    shoot_radius: float | None = None
    morse_index: int | None = None
    morse: object | None = None  # spectrum.MorseIndexResult
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        u1 = float(self.profile.u[-1])
        if abs(u1) > 1e-8 * max(1.0, self.a):
            raise ValueError(f"boundary value u(1) = {u1:.3e} is not zero")
        if self.shoot_radius is not None and not math.isclose(self.lam, self.shoot_radius ** 2,
                                                              rel_tol=1e-14):
            raise ValueError("lambda does not match the squared shooting radius")

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def is_zero(self) -> bool:
        return self.a == 0.0


def core_radius(f: Nonlinearity, a: float, lam: float) -> float:
    """Length scale of the solution near the origin, in unit-ball units."""
    c = 1.0
    fp = float(f.fprime(a))
    if lam > 0 and fp > 0:
        c = min(c, 1.0 / math.sqrt(lam * fp))
    fa = float(f.f(a))
    if lam > 0 and fa > 0 and a > 0:
        c = min(c, math.sqrt(a / (lam * fa)))
    return c


def _h0(f: Nonlinearity, a: float) -> float:
    fa = float(f.f(a))
    return 1e-4 * min(1.0, math.sqrt(a / fa))


def _check_shoot_args(f: Nonlinearity, n: int, a: float):
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if not a > 0:
        raise ValueError(f"shooting needs a > 0, got {a}")
    if a > f.t_max:
        raise ValueError(f"a={a} beyond the tabulated range of f")
    if not float(f.f(0.0)) > 0:
        raise ValueError("shooting needs f(0) > 0")


def shoot_radius(f: Nonlinearity, n: int, a: float, opts: SolverOptions = SolverOptions()):
    """First zero R of the lambda = 1 radial solution with u(0) = a.

    Returns ``(R, u'(R))``.
    """
    _check_shoot_args(f, n, a)
    kind, par, tab = f.kernel_args()
    status, R, uR, vR, _ = _kernels.shoot_kernel(
        kind, par, tab, float(n), float(a), opts.rk_tol, _h0(f, a), opts.r_max,
        opts.zero_tol, opts.max_steps,
    )
    if status == _kernels.NO_ZERO:
        raise NoZeroCrossing(a, R, uR)
    if status != _kernels.OK:
        raise StepSizeUnderflow(a, R)
    return R, vR


def shoot(f: Nonlinearity, n: int, a: float, opts: SolverOptions = SolverOptions()):
    """Shoot from u(0) = a, u'(0) = 0 to the first zero R.

    Returns ``(R, profile)`` where the profile lives on [0, R] at the nodes of
    the canonical unit grid scaled by R, so rescaling is exact.
    """
    R, _ = shoot_radius(f, n, a, opts)
    x = unit_grid(opts.grid_points, core_radius(f, a, R * R))
    kind, par, tab = f.kernel_args()
    status, u, du = _kernels.profile_kernel(
        kind, par, tab, float(n), float(a), opts.rk_tol, _h0(f, a), R * x, opts.max_steps,
    )
    if status != _kernels.OK:
        raise StepSizeUnderflow(a, R)
    r = R * x
    return R, _profile(n, r, u, du, f, 1.0, a)


def _profile(n, r, u, du, f, lam, a):
    ddu = np.empty_like(u)
    fu = f.f(u)
    ddu[1:] = -(n - 1) * du[1:] / r[1:] - lam * fu[1:]
    ddu[0] = -lam * fu[0] / n
    return RadialProfile(n=n, grid=r, u=u, du=du, ddu=ddu, a=float(a))


def rescale_to_unit_ball(profile: RadialProfile, R: float) -> SolutionPoint:
    """Map a lambda = 1 profile on [0, R] to the unit ball (lambda = R^2)."""
    if not R > 0:
        raise ValueError(f"radius must be > 0, got {R}")
    x = profile.grid / R
    x[-1] = 1.0
    unit = RadialProfile(
        n=profile.n,
        grid=x,
        u=profile.u.copy(),
        du=profile.du * R,
        ddu=profile.ddu * R * R,
        a=profile.a,
    )
    return SolutionPoint(lam=R * R, a=profile.a, profile=unit, shoot_radius=R)


def zero_point(n: int, points: int = 2048) -> SolutionPoint:
    """The trivial solution u = 0 at lambda = 0."""
    x = unit_grid(points)
    z = np.zeros_like(x)
    prof = RadialProfile(n=n, grid=x, u=z, du=z.copy(), ddu=z.copy(), a=0.0)
    return SolutionPoint(lam=0.0, a=0.0, profile=prof)


def solve_point(f: Nonlinearity, n: int, a: float, opts: SolverOptions = SolverOptions()) -> SolutionPoint:
    """Shoot and rescale; a = 0 gives the trivial solution."""
    if a == 0:
        return zero_point(n, opts.grid_points)
    R, prof = shoot(f, n, a, opts)
    point = rescale_to_unit_ball(prof, R)
    point.diagnostics["residual"] = residual(point, f)
    return point


def point_from_closed_form(f: Nonlinearity, n: int, lam: float, u_fn, du_fn,
                           points: int = 2048) -> SolutionPoint:
    """SolutionPoint sampled from an exact solution on the canonical grid."""
    a = float(u_fn(np.array([0.0]))[0])
    x = unit_grid(points, core_radius(f, a, lam))
    u = u_fn(x)
    du = du_fn(x)
    return SolutionPoint(lam=lam, a=a, profile=_profile(n, x, u, du, f, lam, a))


def _fd_first_derivative(x, y):
    """Five-point (fourth-order) first derivative on a nonuniform grid."""
    m = x.size
    centers = np.clip(np.arange(m), 2, m - 3)
    idx = centers[:, None] + np.arange(-2, 3)[None, :]
    d = x[idx] - x[:, None]
    scale = np.max(np.abs(d), axis=1, keepdims=True)
    d = d / scale
    powers = np.arange(5)
    V = d[:, None, :] ** powers[None, :, None]  # (m, power, stencil)
    rhs = np.zeros((m, 5))
    rhs[:, 1] = 1.0
    w = np.linalg.solve(V, rhs[..., None])[..., 0] / scale
    return np.sum(w * y[idx], axis=1)


def residual(point: SolutionPoint, f: Nonlinearity) -> float:
    """max |v'' + (n-1)v'/r + lambda f(v)| / (lambda max f(v)) over interior nodes,
    with v'' differentiated numerically from the nodal v'."""
    if point.lam == 0:
        return 0.0
    p = point.profile
    x = p.grid
    v2 = _fd_first_derivative(x, p.du)
    fu = f.f(p.u)
    res = v2[1:-1] + (p.n - 1) * p.du[1:-1] / x[1:-1] + point.lam * fu[1:-1]
    return float(np.max(np.abs(res)) / (point.lam * np.max(fu)))
