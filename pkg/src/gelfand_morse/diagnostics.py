"""Integral identities and scaling diagnostics on computed solutions.

All ball integrals reduce to omega_{n-1} int_0^rho g(r) r^(n-1) dr and are
evaluated by Gauss quadrature on the solution grid, with u and u' rebuilt
between nodes by cubic Hermite interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nonlinearity import Nonlinearity, shifted_power
from .quadrature import radial_integral, sphere_area
from .radial_solver import SolutionPoint, SolverOptions, point_from_closed_form, residual, shoot_radius
from .spectrum import MorseIndexResult, morse_index

__all__ = [
    "DiagnosticsRecord",
    "IdentityResidual",
    "pohozaev_residual",
    "energy_residual",
    "grad_mass",
    "fit_decay_exponent",
    "fprime_mass_scaling",
    "fmass_vs_L1",
    "critical_family",
    "critical_point",
    "verify_critical_family",
    "CriticalFamilyReport",
    "diagnose",
    "DECAY_RADII",
    "FPRIME_RADII",
]

DECAY_RADII = (0.05, 0.1, 0.15, 0.25)
FPRIME_RADII = (0.4, 0.2, 0.1, 0.05)
QUAD_POINTS = 5


@dataclass
class IdentityResidual:
    """Signed value of an identity plus the size of its largest term."""

    value: float
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale if self.scale > 0 else 0.0


def _integral(point: SolutionPoint, g, upto=None) -> float:
    p = point.profile
    return radial_integral(p.grid, p.u, p.du, p.ddu, p.n, g, upto, QUAD_POINTS)


def dirichlet_energy(point: SolutionPoint, upto: float | None = None) -> float:
    return _integral(point, lambda r, u, du: du * du, upto)


def pohozaev_residual(point: SolutionPoint, f: Nonlinearity) -> IdentityResidual:
    """n lam int F(u) - (n-2)/2 int |grad u|^2 - omega/2 u'(1)^2 over B_1."""
    n = point.n
    if point.lam == 0:
        return IdentityResidual(0.0, 0.0)
    t1 = n * point.lam * _integral(point, lambda r, u, du: f.F(u))
    t2 = 0.5 * (n - 2) * dirichlet_energy(point)
    t3 = 0.5 * sphere_area(n) * float(point.profile.du[-1]) ** 2
    return IdentityResidual(t1 - t2 - t3, max(abs(t1), abs(t2), abs(t3)))


def energy_residual(point: SolutionPoint, f: Nonlinearity) -> IdentityResidual:
    """lam int f(u) u - int |grad u|^2 over B_1."""
    if point.lam == 0:
        return IdentityResidual(0.0, 0.0)
    t1 = point.lam * _integral(point, lambda r, u, du: f.f(u) * u)
    t2 = dirichlet_energy(point)
    return IdentityResidual(t1 - t2, max(abs(t1), abs(t2)))


def grad_mass(point: SolutionPoint, radii) -> dict[float, float]:
    """rho -> int_{B_rho} |grad u|^2."""
    return {float(rho): dirichlet_energy(point, float(rho)) for rho in radii}


def fit_decay_exponent(point: SolutionPoint, radii=DECAY_RADII) -> float | None:
    """Least-squares slope of log int_{B_rho}|grad u|^2 against log rho.

    Returns None when the Dirichlet mass vanishes (u = 0).
    """
    radii = [float(r) for r in radii]
    if len(radii) < 4:
        raise ValueError("need at least 4 radii for the decay fit")
    if any(not 0 < r <= 1 for r in radii):
        raise ValueError("radii must lie in (0, 1]")
    mass = np.array([dirichlet_energy(point, r) for r in radii])
    if not np.all(mass > 0):
        return None
    slope, _ = np.polyfit(np.log(radii), np.log(mass), 1)
    return float(slope)


def fprime_mass_scaling(point: SolutionPoint, f: Nonlinearity, radii=FPRIME_RADII) -> dict[float, float]:
    """r -> (int_{B_r} lam f'(u)) / r^(n-2)."""
    n = point.n
    out = {}
    for r in radii:
        r = float(r)
        if not 0 < r <= 1:
            raise ValueError("radii must lie in (0, 1]")
        if point.lam == 0:
            out[r] = 0.0
            continue
        mass = point.lam * _integral(point, lambda s, u, du: f.fprime(u), r)
        out[r] = mass / r ** (n - 2)
    return out


def fmass_vs_L1(point: SolutionPoint, f: Nonlinearity, r: float) -> float | None:
    """(int_{B_{r/2}} lam f(u)) r^2 / int_{B_r} u, or None if int_{B_r} u < 1e-14."""
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    l1 = _integral(point, lambda s, u, du: u, r)
    if l1 < 1e-14:
        return None
    fm = point.lam * _integral(point, lambda s, u, du: f.f(u), 0.5 * r)
    return fm * r * r / l1


@dataclass
class DiagnosticsRecord:
    residual: float
    pohozaev_residual: float
    pohozaev_scale: float
    energy_residual: float
    energy_scale: float
    grad_mass: dict[float, float]
    decay_exponent_fit: float | None
    fprime_mass_ratio: dict[float, float]
    fmass_L1_ratio: dict[float, float | None] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "pohozaev_residual": self.pohozaev_residual,
            "pohozaev_scale": self.pohozaev_scale,
            "energy_residual": self.energy_residual,
            "energy_scale": self.energy_scale,
            "grad_mass": {_key(k): v for k, v in self.grad_mass.items()},
            "decay_exponent_fit": self.decay_exponent_fit,
            "fprime_mass_ratio": {_key(k): v for k, v in self.fprime_mass_ratio.items()},
            "fmass_L1_ratio": {_key(k): v for k, v in self.fmass_L1_ratio.items()},
        }


def _key(r: float) -> str:
    return repr(float(r))


def diagnose(point: SolutionPoint, f: Nonlinearity, decay_radii=DECAY_RADII,
             fprime_radii=FPRIME_RADII, fmass_radii=(1.0, 0.5, 0.25)) -> DiagnosticsRecord:
    """Evaluate every diagnostic and store the record in ``point.diagnostics``."""
    poh = pohozaev_residual(point, f)
    en = energy_residual(point, f)
    radii = sorted(set(float(r) for r in decay_radii) | {0.25})
    record = DiagnosticsRecord(
        residual=residual(point, f),
        pohozaev_residual=poh.value,
        pohozaev_scale=poh.scale,
        energy_residual=en.value,
        energy_scale=en.scale,
        grad_mass=grad_mass(point, radii),
        decay_exponent_fit=fit_decay_exponent(point, decay_radii),
        fprime_mass_ratio=fprime_mass_scaling(point, f, fprime_radii),
        fmass_L1_ratio={float(r): fmass_vs_L1(point, f, r) for r in fmass_radii},
    )
    point.diagnostics.update(record.to_dict())
    return record


# -- the explicit critical family -------------------------------------------

def critical_family(n: int, mu: float):
    """Return ``(alpha_mu, sup_norm, u, du)`` for the exact critical solutions.

    u(x) = (mu sqrt(n(n-2)) / (mu^2 + |x|^2))^((n-2)/2) - alpha_mu solves
    -Delta u = (alpha_mu + u)^((n+2)/(n-2)) in B_1 and vanishes on the sphere.
    """
    if not 3 <= n <= 9:
        raise ValueError(f"critical family check needs 3 <= n <= 9, got {n}")
    if not mu > 0:
        raise ValueError("mu must be > 0")
    c = mu * math.sqrt(n * (n - 2))
    e = 0.5 * (n - 2)
    alpha = (c / (1.0 + mu * mu)) ** e

    def bubble(x):
        return (c / (mu * mu + x * x)) ** e

    def u(x):
        return bubble(x) - alpha

    def du(x):
        return -(n - 2) * x * bubble(x) / (mu * mu + x * x)

    sup = c ** e / mu ** (n - 2) - alpha
    return alpha, sup, u, du


def critical_point(n: int, mu: float, points: int = 2048):
    """(SolutionPoint, nonlinearity) for the critical family member (n, mu)."""
    alpha, _, u, du = critical_family(n, mu)
    f = shifted_power(alpha, (n + 2.0) / (n - 2.0))
    return point_from_closed_form(f, n, 1.0, u, du, points), f


@dataclass
class CriticalFamilyReport:
    n: int
    mu: float
    alpha: float
    sup_norm: float
    boundary_value: float
    residual: float
    morse_index: int
    morse_interval: tuple[int, int]
    shoot_radius: float
    pohozaev_relative: float
    energy_relative: float
    lowest_radial_eig: float
    residual_tol: float = 1e-7
    boundary_tol: float = 1e-10

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "boundary": abs(self.boundary_value) <= self.boundary_tol,
            "residual": self.residual <= self.residual_tol,
            "morse_index": self.morse_index == 1 and self.morse_interval == (1, 1),
            "shoot_radius": abs(self.shoot_radius - 1.0) <= 1e-8,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mu": self.mu,
            "alpha": self.alpha,
            "sup_norm": self.sup_norm,
            "boundary_value": self.boundary_value,
            "residual": self.residual,
            "morse_index": self.morse_index,
            "morse_interval": list(self.morse_interval),
            "shoot_radius": self.shoot_radius,
            "pohozaev_relative": self.pohozaev_relative,
            "energy_relative": self.energy_relative,
            "lowest_radial_eig": self.lowest_radial_eig,
            "checks": self.checks,
            "passed": self.passed,
        }


def verify_critical_family(n: int, mu: float, points: int = 2048,
                           opts: SolverOptions = SolverOptions()) -> CriticalFamilyReport:
    """Check the exact critical solution (n, mu): boundary zero, PDE residual,
    Morse index 1, and that shooting from its center value lands on r = 1.

    On B_1 the index is 1 only for mu < 1. d/dmu of the family solves the
    linearized equation and vanishes on the sphere exactly when alpha_mu is
    stationary, i.e. mu = 1, so mu = 1 carries a radial kernel and mu > 1 has
    index 0. ``lowest_radial_eig`` makes that visible in the report.
    """
    alpha, sup, _, _ = critical_family(n, mu)
    point, f = critical_point(n, mu, points)
    res = residual(point, f)
    point.diagnostics["residual"] = res
    mi: MorseIndexResult = morse_index(point, f)
    R, _ = shoot_radius(f, n, sup, opts)
    return CriticalFamilyReport(
        n=n,
        mu=float(mu),
        alpha=alpha,
        sup_norm=sup,
        boundary_value=float(point.profile.u[-1]),
        residual=res,
        morse_index=mi.total,
        morse_interval=mi.interval,
        shoot_radius=R,
        pohozaev_relative=pohozaev_residual(point, f).relative,
        energy_relative=energy_residual(point, f).relative,
        lowest_radial_eig=float(mi.per_mode[0].lowest_eigs[0]),
    )


def critical_blowup_ladder(n: int, mus) -> tuple[list[float], bool]:
    """Sup norms along mu sorted decreasingly, and whether they strictly increase."""
    mus = sorted((float(m) for m in mus), reverse=True)
    sups = [critical_family(n, m)[1] for m in mus]
    return sups, all(b > a for a, b in zip(sups, sups[1:]))
