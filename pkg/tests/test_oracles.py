"""Symbolic oracles, independent of the package numerics.

Each closed form used by the acceptance tests is substituted into the radial
equation u'' + (n-1)/r u' + lam f(u) = 0 with sympy.
"""

import sympy as sp

r, mu, lam = sp.symbols("r mu lambda", positive=True)


def radial_laplacian(u, n):
    return sp.diff(u, r, 2) + (n - 1) / r * sp.diff(u, r)


def test_liouville_closed_form():
    # n = 2, f = e^u: u = 2 ln((1+mu)/(1+mu r^2)), lam = 8 mu / (1+mu)^2
    u = 2 * sp.log((1 + mu) / (1 + mu * r**2))
    lam_mu = 8 * mu / (1 + mu) ** 2
    assert sp.simplify(radial_laplacian(u, 2) + lam_mu * sp.exp(u)) == 0
    assert sp.simplify(u.subs(r, 1)) == 0
    assert sp.simplify(u.subs(r, 0) - 2 * sp.log(1 + mu)) == 0
    # the fold of lam(mu) sits at mu = 1: a = 2 ln 2, lam = 2
    crit = sp.solve(sp.diff(lam_mu, mu), mu)
    assert crit == [1]
    assert lam_mu.subs(mu, 1) == 2


def test_singular_solution_limit():
    # u = -2 ln r solves the equation with lam = 2(n-2) for every n >= 3
    for n in range(3, 11):
        u = -2 * sp.log(r)
        assert sp.simplify(radial_laplacian(u, n) + 2 * (n - 2) * sp.exp(u)) == 0


def test_critical_family_solves_equation():
    for n in range(3, 10):
        p = sp.Rational(n + 2, n - 2)
        c = mu * sp.sqrt(n * (n - 2))
        e = sp.Rational(n - 2, 2)
        bubble = (c / (mu**2 + r**2)) ** e
        alpha = (c / (1 + mu**2)) ** e
        u = bubble - alpha
        res = radial_laplacian(u, n) + (alpha + u) ** p
        for m in (sp.Rational(3, 10), sp.Rational(7, 10)):
            for x in (sp.Rational(1, 7), sp.Rational(1, 2), 1):
                assert abs(sp.N(res.subs({mu: m, r: x}), 30)) < 1e-25
        assert sp.simplify(u.subs(r, 1)) == 0


def test_critical_kernel_at_mu_one():
    # d/dmu of the family solves the linearized equation; on r = 1 it equals
    # alpha'(mu), which vanishes only at mu = 1
    n = 3
    c = mu * sp.sqrt(n * (n - 2))
    alpha = sp.sqrt(c / (1 + mu**2))
    assert sp.solve(sp.diff(alpha, mu), mu) == [1]
    bubble = sp.sqrt(c / (mu**2 + r**2))
    phi = sp.diff(bubble, mu)
    lin = radial_laplacian(phi, n) + 5 * bubble**4 * phi
    assert sp.simplify(lin) == 0
