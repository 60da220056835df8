import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gelfand_morse.nonlinearity import (
    InconsistentCertificateError,
    check_superlinearity,
    constant,
    derive_lower_bound,
    exponential,
    from_table,
    load_table,
    shifted_power,
)


def test_exponential_values():
    f = exponential()
    t = np.array([0.0, 1.0, 3.5])
    np.testing.assert_allclose(f.f(t), np.exp(t))
    np.testing.assert_allclose(f.fprime(t), np.exp(t))
    np.testing.assert_allclose(f.F(t), np.expm1(t))


def test_shifted_power_values():
    f = shifted_power(2.0, 3.0)
    assert f.f(1.0) == pytest.approx(27.0)
    assert f.fprime(1.0) == pytest.approx(27.0)
    assert f.F(1.0) == pytest.approx((81 - 16) / 4)


@pytest.mark.parametrize("alpha,p", [(0.0, 2.0), (-1.0, 2.0), (1.0, 1.0)])
def test_shifted_power_rejects(alpha, p):
    with pytest.raises(ValueError):
        shifted_power(alpha, p)


def test_log_forms_survive_overflow():
    f = exponential()
    assert f.log_f(1e3) == pytest.approx(1e3)
    assert f.log_F(1e3) == pytest.approx(1e3)
    g = shifted_power(1.0, 7.0)
    assert g.log_F(1e300) == pytest.approx(8 * math.log(1e300) - math.log(8), rel=1e-12)


def test_table_reproduces_smooth_function():
    t = np.linspace(0, 5, 401)
    f = from_table(t, np.exp(t))
    s = np.linspace(0, 5, 97)
    np.testing.assert_allclose(f.f(s), np.exp(s), rtol=1e-6)
    np.testing.assert_allclose(f.F(s), np.expm1(s), rtol=1e-6)
    np.testing.assert_allclose(f.fprime(s), np.exp(s), rtol=1e-3)


def test_table_with_derivative_column():
    t = np.linspace(0, 2, 81)
    f = from_table(t, (1 + t) ** 3, 3 * (1 + t) ** 2)
    assert f.has_derivative_samples
    assert f.fprime(1.0) == pytest.approx(12.0, rel=1e-5)


@pytest.mark.parametrize("t,f", [
    ([0, 1, 1], [1, 2, 3]),
    ([0, 1, 2], [3, 2, 4]),
    ([0.5, 1, 2], [1, 2, 3]),
    ([0, 1, 2], [1, np.nan, 3]),
])
def test_table_validation(t, f):
    with pytest.raises(ValueError):
        from_table(t, f)


def test_load_table_with_header(tmp_path):
    path = tmp_path / "f.csv"
    rows = "\n".join(f"{x},{math.exp(x)}" for x in np.linspace(0, 3, 61))
    path.write_text("# exp samples\nt,f\n" + rows + "\n")
    f = load_table(path)
    assert f.f(1.0) == pytest.approx(math.e, rel=1e-6)
    assert f.t_max == 3.0


def test_load_table_rejects_ragged(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1\n1,2,3\n")
    with pytest.raises(ValueError):
        load_table(path)


def test_growth_exp_passes_with_small_t0():
    cert = check_superlinearity(exponential(), 3, 1.0, None, 1e3)
    assert cert.holds and cert.t0_discovered
    assert cert.t0 <= 8.0
    # e^t t >= 7 (e^t - 1) exactly when t >= 7 (1 - e^-t), root near 6.9936
    root = 7.0
    for _ in range(50):
        root = 7 * (1 - math.exp(-root))
    assert root < cert.t0 < root * 1.02


def test_growth_explicit_t0():
    assert check_superlinearity(exponential(), 3, 1.0, 8.0, 1e3).holds
    cert = check_superlinearity(exponential(), 3, 1.0, 2.0, 1e3)
    assert not cert.holds and cert.first_failure is not None


def test_growth_critical_power_fails():
    # (1+t)^5: f t / F -> 6 = 2n/(n-2), so no eps > 0 works
    cert = check_superlinearity(shifted_power(1.0, 5.0), 3, 0.01, None, 1e3)
    assert not cert.holds


def test_growth_constant_fails():
    assert not check_superlinearity(constant(1.0), 3, 1.0, None, 1e3).holds


def test_growth_needs_n3():
    with pytest.raises(ValueError):
        check_superlinearity(exponential(), 2, 1.0, None, 1e3)


def test_lower_bound_requires_holding_certificate():
    cert = check_superlinearity(constant(1.0), 3, 1.0, None, 1e3)
    with pytest.raises(ValueError):
        derive_lower_bound(cert, constant(1.0), 1e3)


def test_lower_bound_detects_tampered_certificate():
    f = exponential()
    cert = check_superlinearity(f, 3, 1.0, None, 1e3)
    cert.c1 = 10.0
    with pytest.raises(InconsistentCertificateError):
        derive_lower_bound(cert, f, 1e3)


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(0.1, 5.0), p=st.floats(5.5, 12.0), n=st.integers(3, 4))
def test_passing_certificate_implies_lower_bound(alpha, p, n):
    f = shifted_power(alpha, p)
    eps = min(1.0, 0.5 * (p - (n + 2) / (n - 2)))
    cert = check_superlinearity(f, n, eps, None, 1e3, samples=400)
    if cert.holds:
        rep = derive_lower_bound(cert, f, 1e3, samples=400)
        assert rep.worst_margin >= 0
