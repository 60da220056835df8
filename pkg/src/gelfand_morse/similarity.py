"""Scaling reduction for f = e^t.

Every radial solution with u(0) = a is a + V(r e^(a/2)), where V is the one
solution of V'' + (n-1)/rho V' + e^V = 0, V(0) = 0. In the variables
t = ln rho and z = V + 2t - ln(2(n-2)) the first zero gives

    ln(lambda(a) / (2(n-2))) = z(t_a),   z(t_a) - 2 t_a = -a - ln(2(n-2)),

and z obeys z'' + (n-2) z' + 2(n-2) expm1(z) = 0. Integrating z directly keeps
full relative precision while z decays toward 0, which resolves lambda(a) near
its limit 2(n-2) far below the float spacing of lambda itself.

This path uses scipy's DOP853 and shares no code with the shooting kernels,
so it doubles as an independent check on them.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

__all__ = ["exponential_log_gap", "exponential_lambda"]

_RHO0 = 1e-3


def _trajectory(n: int, t_end: float, rtol: float):
    L = math.log(2.0 * (n - 2))
    rho = _RHO0
    t0 = math.log(rho)
    # V = -rho^2/(2n) + rho^4/(8n(n+2)) + O(rho^6)
    v = -rho**2 / (2 * n) + rho**4 / (8 * n * (n + 2))
    dv = -rho / n + rho**3 / (2 * n * (n + 2))

    def rhs(t, y):
        return [y[1], -(n - 2) * y[1] - 2 * (n - 2) * math.expm1(y[0])]

    sol = solve_ivp(rhs, (t0, t_end), [v + 2 * t0 - L, rho * dv + 2.0],
                    method="DOP853", rtol=rtol, atol=1e-300, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"similarity integration failed: {sol.message}")
    return sol.sol, t0, L


def exponential_log_gap(n: int, a_values, rtol: float = 1e-13) -> np.ndarray:
    """ln(lambda(a) / (2(n-2))) for f = e^t, n >= 3, a > 0."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    a_values = np.atleast_1d(np.asarray(a_values, dtype=float))
    if np.any(a_values <= 0):
        raise ValueError("a values must be > 0")
    L = math.log(2.0 * (n - 2))
    t_end = 0.5 * (float(a_values.max()) + L) + 2.0
    z, t0, L = _trajectory(n, t_end, rtol)
    out = np.empty_like(a_values)
    for i, a in enumerate(a_values):
        # z' < 2 everywhere, so the left side is strictly decreasing in t
        ta = brentq(lambda t: z(t)[0] + L - 2.0 * t + a, t0, t_end, xtol=1e-15)
        out[i] = z(ta)[0]
    return out


def exponential_lambda(n: int, a_values, rtol: float = 1e-13) -> np.ndarray:
    return 2.0 * (n - 2) * np.exp(exponential_log_gap(n, a_values, rtol))
