"""Nonlinearities f with derivative and antiderivative, and growth checks.

The growth test certifies, by dense sampling, the superlinearity condition

    f(t) t >= (2n/(n-2) + eps) F(t)   for t >= t0,   F(t) = int_0^t f,

and its consequence f(t) >= c1 t^((n+2)/(n-2) + eps) with
c1 = f(0) t0^(-(n+2)/(n-2) - eps). Comparisons are done on logarithms so that
e^t can be scanned far past the float overflow point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from . import _kernels

__all__ = [
    "Nonlinearity",
    "GrowthCertificate",
    "LowerBoundReport",
    "InconsistentCertificateError",
    "exponential",
    "shifted_power",
    "constant",
    "from_table",
    "load_table",
    "check_superlinearity",
    "derive_lower_bound",
]


class InconsistentCertificateError(RuntimeError):
    """A sampled point violates the lower bound implied by a certificate."""


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    """A nonnegative, nondecreasing C^1 function f with f' and F.

    Build instances with :func:`exponential`, :func:`shifted_power`,
    :func:`from_table` or :func:`constant` rather than directly.
    """

    kind: str
    alpha: float = 0.0
    p: float = 0.0
    table: np.ndarray | None = field(default=None, repr=False)
    has_derivative_samples: bool = False
    _antideriv: PchipInterpolator | None = field(default=None, repr=False)

    # -- kernel interface --------------------------------------------------
    def kernel_args(self) -> tuple[int, np.ndarray, np.ndarray]:
        if self.kind == "exponential":
            return _kernels.KIND_EXP, np.zeros(3), np.zeros((5, 2))
        if self.kind == "shifted_power":
            return _kernels.KIND_POWER, np.array([self.alpha, self.p, 0.0]), np.zeros((5, 2))
        mode = 1.0 if self.has_derivative_samples else 0.0
        return _kernels.KIND_TABLE, np.array([0.0, 0.0, mode]), self.table

    @property
    def label(self) -> str:
        if self.kind == "exponential":
            return "exp(t)"
        if self.kind == "shifted_power":
            return f"({self.alpha:g}+t)^{self.p:g}"
        return "table"

    # -- evaluation --------------------------------------------------------
    def f(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            return np.exp(t)
        if self.kind == "shifted_power":
            return np.maximum(self.alpha + t, 0.0) ** self.p
        return self._hermite(t, 1)[0]

    def fprime(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            return np.exp(t)
        if self.kind == "shifted_power":
            return self.p * np.maximum(self.alpha + t, 0.0) ** (self.p - 1.0)
        if self.has_derivative_samples:
            return self._hermite(t, 3)[0]
        return self._hermite(t, 1)[1]

    def F(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            return np.expm1(t)
        if self.kind == "shifted_power":
            q = self.p + 1.0
            return ((self.alpha + t) ** q - self.alpha ** q) / q
        return self._antideriv(t) - self._antideriv(0.0)

    def log_f(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            return t.copy()
        if self.kind == "shifted_power":
            return self.p * np.log(self.alpha + t)
        with np.errstate(divide="ignore"):
            return np.log(self.f(t))

    def log_F(self, t):
        """log F(t) for t > 0, stable where F itself overflows."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "exponential":
                return t + np.log(-np.expm1(-t))
            if self.kind == "shifted_power":
                q = self.p + 1.0
                ratio = (self.alpha / (self.alpha + t)) ** q
                return q * np.log(self.alpha + t) + np.log1p(-ratio) - math.log(q)
            return np.log(self.F(t))

    def _hermite(self, t, row):
        tk = self.table[0]
        i = np.clip(np.searchsorted(tk, t, side="right") - 1, 0, tk.size - 2)
        h = tk[i + 1] - tk[i]
        s = (t - tk[i]) / h
        y0, y1 = self.table[row, i], self.table[row, i + 1]
        m0, m1 = self.table[row + 1, i], self.table[row + 1, i + 1]
        s2, s3 = s * s, s * s * s
        val = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0
        val = val + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1
        der = (6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * m0
        der = der + (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * h * m1
        return val, der / h

    @property
    def t_max(self) -> float:
        """Largest argument the nonlinearity is defined for."""
        if self.table is None:
            return math.inf
        return float(self.table[0, -1])


def exponential() -> Nonlinearity:
    return Nonlinearity(kind="exponential")


def shifted_power(alpha: float, p: float) -> Nonlinearity:
    """f(t) = (alpha + t)^p."""
    if not alpha > 0:
        raise ValueError(f"shifted power needs alpha > 0, got {alpha}")
    if not p > 1:
        raise ValueError(f"shifted power needs p > 1, got {p}")
    return Nonlinearity(kind="shifted_power", alpha=float(alpha), p=float(p))


def from_table(t, f, fprime=None) -> Nonlinearity:
    """Tabulated nonlinearity.

    f is interpolated by a monotone cubic (PCHIP). When derivative samples
    are supplied, f' is their own monotone cubic interpolant; otherwise it is
    the exact derivative of the f interpolant. F is the exact antiderivative
    of the f interpolant.
    """
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    if t.ndim != 1 or t.shape != f.shape or t.size < 2:
        raise ValueError("table needs matching 1-d t and f columns with >= 2 rows")
    if not np.all(np.isfinite(t)) or not np.all(np.isfinite(f)):
        raise ValueError("table contains non-finite entries")
    if np.any(np.diff(t) <= 0):
        raise ValueError("table t column must be strictly increasing")
    if t[0] > 0:
        raise ValueError("table must start at t <= 0 so that F(0) is defined")
    if np.any(f < 0) or np.any(np.diff(f) < 0):
        raise ValueError("tabulated f must be nonnegative and nondecreasing")
    interp = PchipInterpolator(t, f)
    tab = np.zeros((5, t.size))
    tab[0] = t
    tab[1] = f
    tab[2] = interp.derivative()(t)
    has_d = fprime is not None
    if has_d:
        fprime = np.asarray(fprime, dtype=float)
        if fprime.shape != t.shape or np.any(fprime < 0):
            raise ValueError("derivative samples must match t and be nonnegative")
        tab[3] = fprime
        tab[4] = PchipInterpolator(t, fprime).derivative()(t)
    return Nonlinearity(
        kind="table",
        table=tab,
        has_derivative_samples=has_d,
        _antideriv=interp.antiderivative(),
    )


def constant(c0: float, t_max: float = 1e6) -> Nonlinearity:
    """f = c0 on [0, t_max], as a two-row table."""
    return from_table([0.0, t_max], [c0, c0], [0.0, 0.0])


def load_table(path: str | Path) -> Nonlinearity:
    """Read a CSV of ``t,f(t)`` (optionally ``,f'(t)``) rows; '#' comments and
    one non-numeric header line are allowed."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if lines and not _is_numeric_row(lines[0]):
        lines = lines[1:]
    rows = [[float(x) for x in ln.split(",")] for ln in lines]
    if not rows or len({len(r) for r in rows}) != 1 or len(rows[0]) not in (2, 3):
        raise ValueError(f"{path}: expected 2 or 3 numeric columns per row")
    data = np.array(rows)
    return from_table(data[:, 0], data[:, 1], data[:, 2] if data.shape[1] == 3 else None)


def _is_numeric_row(line: str) -> bool:
    try:
        [float(x) for x in line.split(",")]
    except ValueError:
        return False
    return True


@dataclass
class GrowthCertificate:
    n: int
    epsilon: float
    t0: float
    c1: float
    verified_up_to: float
    holds: bool
    worst_margin: float  # min over samples of log(f t) - log((2n/(n-2)+eps) F)
    worst_t: float
    first_failure: float | None = None
    t0_discovered: bool = False
    samples: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "t0": self.t0,
            "c1": self.c1,
            "verified_up_to": self.verified_up_to,
            "holds": self.holds,
            "worst_margin": self.worst_margin,
            "worst_t": self.worst_t,
            "first_failure": self.first_failure,
            "t0_discovered": self.t0_discovered,
            "samples": self.samples,
        }


def _log_margin(f: Nonlinearity, n: int, epsilon: float, t):
    t = np.asarray(t, dtype=float)
    lhs = f.log_f(t) + np.log(t)
    rhs = math.log(2.0 * n / (n - 2) + epsilon) + f.log_F(t)
    return lhs - rhs


def _critical_exponent(n: int, epsilon: float) -> float:
    return (n + 2.0) / (n - 2.0) + epsilon


def check_superlinearity(
    f: Nonlinearity,
    n: int,
    epsilon: float,
    t0: float | None,
    t_max: float,
    samples: int = 1000,
) -> GrowthCertificate:
    """Sample the superlinearity inequality on a log-uniform grid of [t0, t_max].

    With ``t0=None`` the smallest sampled t0 for which every later sample
    passes is discovered and reported (``t0_discovered=True``). The worst
    sample is refined by a bounded scalar minimization between its neighbours.
    """
    if n < 3:
        raise ValueError(f"dimension must be >= 3 for the growth condition, got {n}")
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    t_max = float(min(t_max, f.t_max))
    discovered = t0 is None
    if discovered:
        lo = t_max * 1e-6
    else:
        if not 0 < t0 < t_max:
            raise ValueError(f"need 0 < t0 < t_max, got t0={t0}, t_max={t_max}")
        lo = float(t0)
    grid = np.geomspace(lo, t_max, samples)
    margin = _log_margin(f, n, epsilon, grid)
    if not np.all(np.isfinite(margin)):
        bad = grid[~np.isfinite(margin)][0]
        raise ValueError(f"non-finite f/F evaluation at t={bad:g}")

    if discovered:
        failing = np.nonzero(margin < 0)[0]
        start = 0 if failing.size == 0 else failing[-1] + 1
        if start >= grid.size:
            return _certificate(f, n, epsilon, t_max, t_max, False, margin, grid,
                                grid[failing[0]], True, samples)
        grid, margin = grid[start:], margin[start:]

    while True:
        worst_t, worst = _refine_worst(f, n, epsilon, grid, margin)
        failing = np.nonzero(margin < 0)[0]
        if failing.size == 0 and worst < 0:
            failing_t = worst_t
        elif failing.size:
            failing_t = grid[failing[0]]
        else:
            failing_t = None
        if failing_t is None:
            return _certificate(f, n, epsilon, grid[0], t_max, True, margin, grid,
                                None, discovered, samples, worst_t, worst)
        if not discovered:
            return _certificate(f, n, epsilon, grid[0], t_max, False, margin, grid,
                                failing_t, False, samples, worst_t, worst)
        keep = grid > failing_t
        if not np.any(keep):
            return _certificate(f, n, epsilon, t_max, t_max, False, margin, grid,
                                failing_t, True, samples, worst_t, worst)
        grid, margin = grid[keep], margin[keep]


def _refine_worst(f, n, epsilon, grid, margin):
    i = int(np.argmin(margin))
    worst_t, worst = float(grid[i]), float(margin[i])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    if b > a:
        res = minimize_scalar(
            lambda s: float(_log_margin(f, n, epsilon, math.exp(s))),
            bounds=(math.log(a), math.log(b)),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if np.isfinite(res.fun) and res.fun < worst:
            worst_t, worst = float(math.exp(res.x)), float(res.fun)
    return worst_t, worst


def _certificate(f, n, epsilon, t0, t_max, holds, margin, grid, failing_t,
                 discovered, samples, worst_t=None, worst=None):
    if worst is None:
        i = int(np.argmin(margin))
        worst_t, worst = float(grid[i]), float(margin[i])
    c1 = float(f.f(0.0)) * t0 ** (-_critical_exponent(n, epsilon))
    return GrowthCertificate(
        n=n,
        epsilon=float(epsilon),
        t0=float(t0),
        c1=c1,
        verified_up_to=float(t_max),
        holds=bool(holds),
        worst_margin=float(worst),
        worst_t=float(worst_t),
        first_failure=None if failing_t is None else float(failing_t),
        t0_discovered=discovered,
        samples=int(samples),
    )


@dataclass
class LowerBoundReport:
    c1: float
    exponent: float
    t_max: float
    worst_margin: float  # min of log f(t) - log(c1 t^exponent) over t > 0 samples
    worst_t: float
    f0: float
    samples: int


def derive_lower_bound(cert: GrowthCertificate, f: Nonlinearity, t_max: float,
                       samples: int = 2000) -> LowerBoundReport:
    """Check f(t) >= c1 t^((n+2)/(n-2)+eps) on [0, t_max] by sampling.

    Raises :class:`InconsistentCertificateError` on any violation.
    """
    if not cert.holds:
        raise ValueError("lower bound needs a certificate that holds")
    q = _critical_exponent(cert.n, cert.epsilon)
    c1 = cert.c1
    f0 = float(f.f(0.0))
    if f0 < 0:
        raise InconsistentCertificateError(f"f(0) = {f0} < 0")
    t_max = float(min(t_max, f.t_max))
    t = np.unique(np.concatenate([
        np.geomspace(t_max * 1e-9, t_max, samples),
        np.linspace(0.0, t_max, samples)[1:],
        [cert.t0],
    ]))
    t = t[t <= t_max]
    with np.errstate(divide="ignore"):
        margin = f.log_f(t) - (math.log(c1) + q * np.log(t))
    if not np.all(np.isfinite(margin)):
        raise ValueError("non-finite evaluation while checking the lower bound")
    i = int(np.argmin(margin))
    if margin[i] < 0:
        raise InconsistentCertificateError(
            f"f({t[i]:g}) below c1 t^{q:g} (log margin {margin[i]:.3e})"
        )
    return LowerBoundReport(
        c1=c1,
        exponent=q,
        t_max=t_max,
        worst_margin=float(margin[i]),
        worst_t=float(t[i]),
        f0=f0,
        samples=int(t.size + 1),
    )
