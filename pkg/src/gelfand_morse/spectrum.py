"""Morse index by spherical-harmonic decomposition and Sylvester inertia.

On a radial solution the quadratic form int |grad xi|^2 - lambda f'(u) xi^2
splits over spherical harmonics of degree ell into the 1-d forms

    int_0^1 (v'^2 + ell(ell+n-2) v^2 / r^2 - W v^2) r^(n-1) dr,  W = lambda f'(u),

each of which is discretized with P1 finite elements into a tridiagonal
pencil (A, B). The number of negative eigenvalues equals the negative inertia
of A, counted with an LDL^T factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _kernels
from ._jit import JIT_ENABLED
from .nonlinearity import Nonlinearity
from .quadrature import gauss_legendre01, hermite_eval
from .radial_solver import SolutionPoint, residual

__all__ = [
    "ModeSpectrum",
    "MorseIndexResult",
    "UnconvergedPointError",
    "harmonic_multiplicity",
    "mode_pencil",
    "pencil_negative_count",
    "mode_negative_count",
    "morse_index",
    "potential_on_cells",
]

DEGENERACY_TOL = 1e-8
N_LOWEST = 3


class UnconvergedPointError(ValueError):
    pass


def harmonic_multiplicity(n: int, ell: int) -> int:
    """Dimension of the degree-ell spherical harmonics on S^(n-1)."""
    if n < 2 or ell < 0:
        raise ValueError("need n >= 2 and ell >= 0")

    def binom(top, k):
        return math.comb(top, k) if k >= 0 and top >= 0 else 0

    return binom(n + ell - 1, ell) - binom(n + ell - 3, ell - 2)


def centrifugal(n: int, ell: int) -> float:
    return float(ell * (ell + n - 2))


@dataclass
class ModeSpectrum:
    ell: int
    neg_count: int
    multiplicity: int
    lowest_eigs: list[float] = field(default_factory=list)
    degenerate: int = 0  # eigenvalues within the degeneracy window, not counted

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "neg_count": self.neg_count,
            "multiplicity": self.multiplicity,
            "degenerate": self.degenerate,
            "lowest_eigs": [float(e) for e in self.lowest_eigs],
        }


@dataclass
class MorseIndexResult:
    total: int
    per_mode: list[ModeSpectrum]
    ell_max_used: int
    truncated: bool = False

    @property
    def degenerate(self) -> int:
        return sum(m.degenerate * m.multiplicity for m in self.per_mode)

    @property
    def interval(self) -> tuple[int, int]:
        return self.total, self.total + self.degenerate

    def to_dict(self) -> dict:
        lo, hi = self.interval
        return {
            "total": self.total,
            "interval": [lo, hi],
            "ell_max_used": self.ell_max_used,
            "truncated": self.truncated,
            "per_mode": [m.to_dict() for m in self.per_mode],
        }


def potential_on_cells(point: SolutionPoint, f: Nonlinearity, x: np.ndarray, q: int):
    """W = lambda f'(u) at the q Gauss points of every cell of the mesh x."""
    p = point.profile
    xi, _ = gauss_legendre01(q)
    r = x[:-1, None] + np.diff(x)[:, None] * xi[None, :]
    if point.lam == 0:
        return np.zeros_like(r)
    u = hermite_eval(p.grid, p.u, p.du, r)
    return point.lam * f.fprime(u)


def quadrature_order(n: int) -> int:
    # exact for the r^(n-1)-weighted P1 mass matrix
    return max(3, (n + 3) // 2)


def mode_pencil(x: np.ndarray, n: int, ell: int, w_gauss: np.ndarray):
    """Tridiagonal pencil (dA, eA, dB, eB) on the free nodes of mode ell.

    Dirichlet at r = 1 always; at r = 0 only for ell >= 1.
    """
    xi, wq = gauss_legendre01(w_gauss.shape[1])
    assemble = _kernels.assemble_p1 if JIT_ENABLED else _kernels.assemble_p1_numpy
    dA, eA, dB, eB = assemble(x, float(n), centrifugal(n, ell), w_gauss, xi, wq)
    lo = 1 if ell >= 1 else 0
    hi = x.size - 1
    return (np.ascontiguousarray(dA[lo:hi]), np.ascontiguousarray(eA[lo:hi - 1]),
            np.ascontiguousarray(dB[lo:hi]), np.ascontiguousarray(eB[lo:hi - 1]))


def pencil_negative_count(pencil, tol: float = DEGENERACY_TOL) -> tuple[int, int]:
    """(#eigenvalues < -tol, #eigenvalues in [-tol, tol))."""
    dA, eA, dB, eB = pencil
    strict = _kernels.shifted_inertia(dA, eA, dB, eB, -tol)[0]
    loose = _kernels.shifted_inertia(dA, eA, dB, eB, tol)[0]
    return strict, loose - strict


def lowest_eigenvalues(pencil, count: int, w_max: float) -> np.ndarray:
    dA, eA, dB, eB = pencil
    count = min(count, dA.size)
    return _kernels.pencil_lowest_eigs(dA, eA, dB, eB, count, -w_max - 1.0, 1e-12)


def _check_point(point: SolutionPoint, f: Nonlinearity, tol: float):
    if point.lam == 0:
        return
    res = point.diagnostics.get("residual")
    if res is None:
        res = residual(point, f)
        point.diagnostics["residual"] = res
    if not res <= tol:
        raise UnconvergedPointError(f"residual {res:.3e} exceeds {tol:.1e} at a={point.a:g}")


def _mesh(point: SolutionPoint, grid: int | None) -> np.ndarray:
    x = point.profile.grid
    if grid is None or grid == x.size:
        return x
    if grid < 3:
        raise ValueError("grid must have >= 3 points")
    return _regrid(x, grid)


def _regrid(x: np.ndarray, points: int) -> np.ndarray:
    s_old = np.linspace(0.0, 1.0, x.size)
    s_new = np.linspace(0.0, 1.0, points)
    # x(s) is smooth and monotone, so a monotone cubic in s preserves the grading
    y = PchipInterpolator(s_old, x)(s_new)
    y[0], y[-1] = 0.0, 1.0
    return y


def mode_negative_count(point: SolutionPoint, f: Nonlinearity, ell: int,
                        grid: int | None = None, residual_tol: float = 1e-6,
                        n_lowest: int = N_LOWEST) -> ModeSpectrum:
    """Negative eigenvalue count of mode ell at a solution point."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    _check_point(point, f, residual_tol)
    n = point.n
    x = _mesh(point, grid)
    w = potential_on_cells(point, f, x, quadrature_order(n))
    pencil = mode_pencil(x, n, ell, w)
    neg, deg = pencil_negative_count(pencil)
    eigs = lowest_eigenvalues(pencil, n_lowest, float(np.max(w, initial=0.0))) if n_lowest else []
    return ModeSpectrum(
        ell=ell,
        neg_count=int(neg),
        multiplicity=harmonic_multiplicity(n, ell),
        lowest_eigs=[float(e) for e in eigs],
        degenerate=int(deg),
    )


def centrifugal_cutoff(point: SolutionPoint, f: Nonlinearity, x: np.ndarray | None = None) -> int:
    """Smallest ell with ell(ell+n-2) >= max r^2 W(r); no mode from there on
    can have a negative eigenvalue."""
    n = point.n
    if point.lam == 0:
        return 0
    x = point.profile.grid if x is None else x
    q = quadrature_order(n)
    w = potential_on_cells(point, f, x, q)
    xi, _ = gauss_legendre01(q)
    r = x[:-1, None] + np.diff(x)[:, None] * xi[None, :]
    nodes = point.lam * f.fprime(point.profile.u) * point.profile.grid ** 2
    bound = max(float(np.max(r * r * w)), float(np.max(nodes)))
    ell = 0
    while centrifugal(n, ell) < bound:
        ell += 1
    return ell


def morse_index(point: SolutionPoint, f: Nonlinearity, grid: int | None = None,
                max_ell_override: int | None = None, residual_tol: float = 1e-6,
                n_lowest: int = N_LOWEST) -> MorseIndexResult:
    """Morse index of ``point`` summed over all harmonic modes.

    Stores the total in ``point.morse_index``. Eigenvalues within 1e-8 of zero
    are reported as degenerate and excluded from the total.
    """
    _check_point(point, f, residual_tol)
    x = _mesh(point, grid)
    cutoff = centrifugal_cutoff(point, f, x)
    last = max(cutoff, 1)
    truncated = False
    if max_ell_override is not None and max_ell_override < cutoff:
        last = max_ell_override + 1
        truncated = True
    modes = [
        mode_negative_count(point, f, ell, grid, residual_tol, n_lowest)
        for ell in range(last)
    ]
    total = sum(m.neg_count * m.multiplicity for m in modes)
    result = MorseIndexResult(
        total=total,
        per_mode=modes,
        ell_max_used=last - 1 if truncated else cutoff,
        truncated=truncated,
    )
    point.morse_index = total
    point.morse = result
    return result
