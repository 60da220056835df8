"""Hot numeric kernels.

Everything here takes plain floats and float64 arrays so the same source
compiles under numba or runs interpreted when the JIT is switched off (see
``_jit``). Nonlinearities are passed as ``(kind, par, tab)``:

* kind 0: ``exp(t)``
* kind 1: ``(par[0] + t) ** par[1]``
* kind 2: piecewise cubic Hermite table, ``tab`` rows are
  ``t, f, f_slope, g, g_slope``; ``par[2] == 1`` means ``f'`` is the Hermite
  interpolant of ``(g, g_slope)``, otherwise the derivative of the ``f`` cubic.
"""

import math

import numpy as np

from ._jit import njit

OK = 0
NO_ZERO = 1
UNDERFLOW = 2
NONFINITE = 3

KIND_EXP = 0
KIND_POWER = 1
KIND_TABLE = 2


@njit
def _hermite(tab, row, x):
    t = tab[0]
    m = t.shape[0]
    i = np.searchsorted(t, x, side="right") - 1
    if i < 0:
        i = 0
    elif i > m - 2:
        i = m - 2
    h = t[i + 1] - t[i]
    s = (x - t[i]) / h
    y0 = tab[row, i]
    y1 = tab[row, i + 1]
    m0 = tab[row + 1, i]
    m1 = tab[row + 1, i + 1]
    s2 = s * s
    s3 = s2 * s
    val = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0
    val += (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1
    der = (6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * m0
    der += (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * h * m1
    return val, der / h


@njit
def f_and_fprime(kind, par, tab, t):
    if kind == KIND_EXP:
        e = math.exp(t)
        return e, e
    if kind == KIND_POWER:
        base = par[0] + t
        if base <= 0.0:
            return 0.0, 0.0
        p = par[1]
        fp = p * base ** (p - 1.0)
        return base ** p, fp
    f, df = _hermite(tab, 1, t)
    if par[2] == 1.0:
        g, _ = _hermite(tab, 3, t)
        return f, g
    return f, df


@njit
def f_value(kind, par, tab, t):
    if kind == KIND_EXP:
        return math.exp(t)
    if kind == KIND_POWER:
        base = par[0] + t
        if base <= 0.0:
            return 0.0
        return base ** par[1]
    f, _ = _hermite(tab, 1, t)
    return f


@njit
def origin_series(kind, par, tab, n, a, r):
    """Fourth-order Taylor data (u, u') of the regular solution near r = 0."""
    fa, fpa = f_and_fprime(kind, par, tab, a)
    c2 = -fa / (2.0 * n)
    c4 = fa * fpa / (8.0 * n * (n + 2.0))
    r2 = r * r
    return a + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r + 4.0 * c4 * r2 * r


@njit
def _rhs(kind, par, tab, n, r, u, v):
    return v, -(n - 1.0) * v / r - f_value(kind, par, tab, u)


@njit
def dp_step(kind, par, tab, n, r, u, v, h):
    """One Dormand-Prince 5(4) step. Returns (u5, v5, err_u, err_v)."""
    k1u, k1v = _rhs(kind, par, tab, n, r, u, v)
    k2u, k2v = _rhs(kind, par, tab, n, r + h / 5.0,
                    u + h * (k1u / 5.0), v + h * (k1v / 5.0))
    k3u, k3v = _rhs(kind, par, tab, n, r + 0.3 * h,
                    u + h * (3.0 / 40.0 * k1u + 9.0 / 40.0 * k2u),
                    v + h * (3.0 / 40.0 * k1v + 9.0 / 40.0 * k2v))
    k4u, k4v = _rhs(kind, par, tab, n, r + 0.8 * h,
                    u + h * (44.0 / 45.0 * k1u - 56.0 / 15.0 * k2u + 32.0 / 9.0 * k3u),
                    v + h * (44.0 / 45.0 * k1v - 56.0 / 15.0 * k2v + 32.0 / 9.0 * k3v))
    k5u, k5v = _rhs(kind, par, tab, n, r + 8.0 / 9.0 * h,
                    u + h * (19372.0 / 6561.0 * k1u - 25360.0 / 2187.0 * k2u
                             + 64448.0 / 6561.0 * k3u - 212.0 / 729.0 * k4u),
                    v + h * (19372.0 / 6561.0 * k1v - 25360.0 / 2187.0 * k2v
                             + 64448.0 / 6561.0 * k3v - 212.0 / 729.0 * k4v))
    k6u, k6v = _rhs(kind, par, tab, n, r + h,
                    u + h * (9017.0 / 3168.0 * k1u - 355.0 / 33.0 * k2u
                             + 46732.0 / 5247.0 * k3u + 49.0 / 176.0 * k4u
                             - 5103.0 / 18656.0 * k5u),
                    v + h * (9017.0 / 3168.0 * k1v - 355.0 / 33.0 * k2v
                             + 46732.0 / 5247.0 * k3v + 49.0 / 176.0 * k4v
                             - 5103.0 / 18656.0 * k5v))
    u5 = u + h * (35.0 / 384.0 * k1u + 500.0 / 1113.0 * k3u + 125.0 / 192.0 * k4u
                  - 2187.0 / 6784.0 * k5u + 11.0 / 84.0 * k6u)
    v5 = v + h * (35.0 / 384.0 * k1v + 500.0 / 1113.0 * k3v + 125.0 / 192.0 * k4v
                  - 2187.0 / 6784.0 * k5v + 11.0 / 84.0 * k6v)
    k7u, k7v = _rhs(kind, par, tab, n, r + h, u5, v5)
    eu = h * (71.0 / 57600.0 * k1u - 71.0 / 16695.0 * k3u + 71.0 / 1920.0 * k4u
              - 17253.0 / 339200.0 * k5u + 22.0 / 525.0 * k6u - 1.0 / 40.0 * k7u)
    ev = h * (71.0 / 57600.0 * k1v - 71.0 / 16695.0 * k3v + 71.0 / 1920.0 * k4v
              - 17253.0 / 339200.0 * k5v + 22.0 / 525.0 * k6v - 1.0 / 40.0 * k7v)
    return u5, v5, eu, ev


@njit
def _error_norm(a, rtol, u, v, u5, v5, eu, ev):
    su = rtol * (a + max(abs(u), abs(u5)))
    sv = rtol * max(abs(v), abs(v5)) + 1e-300
    return max(abs(eu) / su, abs(ev) / sv)


@njit
def _next_h(h, err):
    if err == 0.0:
        return 5.0 * h
    fac = 0.9 * err ** -0.2
    if fac < 0.2:
        fac = 0.2
    elif fac > 5.0:
        fac = 5.0
    return h * fac


@njit
def shoot_kernel(kind, par, tab, n, a, rtol, h0, r_max, zero_tol, max_steps):
    """Integrate from the Taylor start to the first zero of u.

    Returns ``(status, R, u(R), u'(R), accepted_steps)``; on failure ``R`` is
    the last radius reached.
    """
    r = h0
    u, v = origin_series(kind, par, tab, n, a, r)
    h = h0
    steps = 0
    target = zero_tol * a
    for _ in range(max_steps):
        if r + h > r_max:
            h = r_max - r
            if h <= 0.0:
                return NO_ZERO, r, u, v, steps
        u5, v5, eu, ev = dp_step(kind, par, tab, n, r, u, v, h)
        if not (math.isfinite(u5) and math.isfinite(v5)):
            h *= 0.25
            if h < 1e-14 * r:
                return NONFINITE, r, u, v, steps
            continue
        err = _error_norm(a, rtol, u, v, u5, v5, eu, ev)
        if err <= 1.0:
            if u5 <= 0.0:
                # Illinois false position on the step fraction; every trial is a
                # full RK step from (r, u, v) so the root inherits step accuracy.
                lo, glo = 0.0, u
                hi, ghi = 1.0, u5
                vhi = v5
                side = 0
                th, gt, vt = hi, ghi, vhi
                for _it in range(200):
                    if abs(gt) <= target or hi - lo <= 1e-15:
                        break
                    th = (lo * ghi - hi * glo) / (ghi - glo)
                    if not (lo < th < hi):
                        th = 0.5 * (lo + hi)
                    gt, vt, _, _ = dp_step(kind, par, tab, n, r, u, v, th * h)
                    if gt > 0.0:
                        lo, glo = th, gt
                        if side == 1:
                            ghi *= 0.5
                        side = 1
                    else:
                        hi, ghi = th, gt
                        if side == -1:
                            glo *= 0.5
                        side = -1
                return OK, r + th * h, gt, vt, steps + 1
            r += h
            u, v = u5, v5
            steps += 1
            if r >= r_max:
                return NO_ZERO, r, u, v, steps
        h = _next_h(h, err)
        if h < 1e-14 * r:
            return UNDERFLOW, r, u, v, steps
    return UNDERFLOW, r, u, v, steps


@njit
def profile_kernel(kind, par, tab, n, a, rtol, h0, targets, max_steps):
    """Values (u, u') at the sorted radii ``targets``, landing on each exactly."""
    m = targets.shape[0]
    uo = np.empty(m)
    vo = np.empty(m)
    j = 0
    while j < m and targets[j] <= h0:
        uo[j], vo[j] = origin_series(kind, par, tab, n, a, targets[j])
        j += 1
    if j == m:
        return OK, uo, vo
    r = h0
    u, v = origin_series(kind, par, tab, n, a, r)
    h = h0
    steps = 0
    while j < m:
        tj = targets[j]
        clamped = False
        hs = h
        if r + hs >= tj:
            hs = tj - r
            clamped = True
        u5, v5, eu, ev = dp_step(kind, par, tab, n, r, u, v, hs)
        if not (math.isfinite(u5) and math.isfinite(v5)):
            h = 0.25 * hs
            if h < 1e-14 * r:
                return NONFINITE, uo, vo
            continue
        err = _error_norm(a, rtol, u, v, u5, v5, eu, ev)
        if err <= 1.0:
            u, v = u5, v5
            steps += 1
            if clamped:
                r = tj
                uo[j] = u
                vo[j] = v
                j += 1
            else:
                r += hs
                h = _next_h(hs, err)
        else:
            h = _next_h(hs, err)
        if h < 1e-14 * r:
            return UNDERFLOW, uo, vo
        if steps > max_steps:
            return UNDERFLOW, uo, vo
    return OK, uo, vo


@njit
def assemble_p1(x, n, c_ell, w_gauss, xi, wq):
    """Tridiagonal P1 pencil for the radial mode form.

    ``A`` discretizes int (v'^2 + c_ell v^2 / r^2 - W v^2) r^(n-1) dr and ``B``
    the r^(n-1)-weighted mass. ``w_gauss[i, k]`` is W at ``x[i] + h_i xi[k]``.
    Returns full-length diagonals ``(dA, eA, dB, eB)`` before boundary rows
    are dropped.
    """
    m = x.shape[0]
    q = xi.shape[0]
    dA = np.zeros(m)
    eA = np.zeros(m - 1)
    dB = np.zeros(m)
    eB = np.zeros(m - 1)
    for i in range(m - 1):
        x0 = x[i]
        x1 = x[i + 1]
        h = x1 - x0
        stiff = (x1 ** n - x0 ** n) / (n * h * h)
        m00 = 0.0
        m01 = 0.0
        m11 = 0.0
        p00 = 0.0
        p01 = 0.0
        p11 = 0.0
        for k in range(q):
            r = x0 + h * xi[k]
            b1 = xi[k]
            b0 = 1.0 - b1
            wr = wq[k] * h * r ** (n - 1)
            pot = c_ell / (r * r) - w_gauss[i, k]
            m00 += wr * b0 * b0
            m01 += wr * b0 * b1
            m11 += wr * b1 * b1
            p00 += wr * pot * b0 * b0
            p01 += wr * pot * b0 * b1
            p11 += wr * pot * b1 * b1
        dA[i] += stiff + p00
        dA[i + 1] += stiff + p11
        eA[i] += -stiff + p01
        dB[i] += m00
        dB[i + 1] += m11
        eB[i] += m01
    return dA, eA, dB, eB


def assemble_p1_numpy(x, n, c_ell, w_gauss, xi, wq):
    """Vectorized twin of :func:`assemble_p1`."""
    x0 = x[:-1]
    x1 = x[1:]
    h = x1 - x0
    stiff = (x1 ** n - x0 ** n) / (n * h * h)
    r = x0[:, None] + h[:, None] * xi[None, :]
    b1 = xi[None, :]
    b0 = 1.0 - b1
    wr = wq[None, :] * h[:, None] * r ** (n - 1)
    pot = c_ell / (r * r) - w_gauss
    m = x.shape[0]
    dA = np.zeros(m)
    dB = np.zeros(m)
    dA[:-1] += stiff + np.sum(wr * pot * b0 * b0, axis=1)
    dA[1:] += stiff + np.sum(wr * pot * b1 * b1, axis=1)
    eA = -stiff + np.sum(wr * pot * b0 * b1, axis=1)
    dB[:-1] += np.sum(wr * b0 * b0, axis=1)
    dB[1:] += np.sum(wr * b1 * b1, axis=1)
    eB = np.sum(wr * b0 * b1, axis=1)
    return dA, eA, dB, eB


@njit
def shifted_inertia(dA, eA, dB, eB, s):
    """Inertia ``(neg, zero, pos)`` of the tridiagonal ``A - s B``.

    Symmetric LDL^T with Bunch's 1x1/2x2 diagonal pivoting for tridiagonal
    matrices; no interchanges are needed, so the factorization runs in one
    pass without storing the factors.
    """
    m = dA.shape[0]
    alpha = 0.5 * (math.sqrt(5.0) - 1.0)
    neg = 0
    zero = 0
    pos = 0
    if m == 0:
        return neg, zero, pos
    dk = dA[0] - s * dB[0]
    k = 0
    while k < m:
        if k == m - 1:
            if dk < 0.0:
                neg += 1
            elif dk > 0.0:
                pos += 1
            else:
                zero += 1
            break
        ek = eA[k] - s * eB[k]
        dn = dA[k + 1] - s * dB[k + 1]
        sigma = max(abs(dk), abs(ek), abs(dn))
        if k + 1 < m - 1:
            sigma = max(sigma, abs(eA[k + 1] - s * eB[k + 1]))
        if abs(dk) * sigma >= alpha * ek * ek:
            if dk < 0.0:
                neg += 1
            elif dk > 0.0:
                pos += 1
            else:
                zero += 1
            if dk != 0.0:
                dk = dn - ek * ek / dk
            else:
                dk = dn
            k += 1
        else:
            # 2x2 pivot: its determinant is strictly negative under this test
            det = dk * dn - ek * ek
            neg += 1
            pos += 1
            if k + 2 < m:
                e2 = eA[k + 1] - s * eB[k + 1]
                dk = dA[k + 2] - s * dB[k + 2] - e2 * e2 * dk / det
            k += 2
    return neg, zero, pos


@njit
def pencil_lowest_eigs(dA, eA, dB, eB, count, lower, rtol):
    """Smallest ``count`` eigenvalues of ``A x = mu B x`` by inertia bisection."""
    out = np.empty(count)
    upper = 1.0
    for _ in range(400):
        neg, zero, _p = shifted_inertia(dA, eA, dB, eB, upper)
        if neg + zero >= count:
            break
        upper = 2.0 * abs(upper) + 1.0
    for j in range(count):
        lo = lower
        hi = upper
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            if hi - lo <= rtol * max(1.0, abs(mid)):
                break
            neg, _z, _p = shifted_inertia(dA, eA, dB, eB, mid)
            if neg > j:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
    return out
