import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from astft.window import (
    G_closed,
    G_numeric,
    KernelParams,
    WindowSpec,
    abs_G,
    abs_G0,
    abs_G_inverse,
    abs_moment,
    alpha_from_tau0,
    alpha_k,
    breve_g,
    chirp_factor,
    g_hat,
    g_hat_inverse,
    g_value,
    xi_k,
)

SIGMA = 1.0 / 16.0


def test_g_at_zero():
    assert g_value(0.0) == pytest.approx(0.3989423, abs=1e-7)


def test_g_integrates_to_one():
    val, _ = quad(g_value, -8, 8, epsabs=1e-13)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_g_hat_values():
    assert g_hat(0.0) == 1.0
    assert g_hat(0.25) == pytest.approx(np.exp(-1.2337), abs=1e-5)
    # exact value 0.291213; the rounded reference 0.29127 is within 1e-4
    assert g_hat(0.25) == pytest.approx(0.29127, abs=1e-4)


def test_g_hat_is_fourier_transform_of_g():
    xi = np.linspace(-1.5, 1.5, 31)
    num = [quad(lambda t, x=x: g_value(t) * np.cos(2 * np.pi * x * t), -10, 10)[0] for x in xi]
    np.testing.assert_allclose(num, g_hat(xi), atol=1e-10)


@pytest.mark.parametrize("tau0, alpha", [(0.1, 0.34154), (0.2, 0.28554)])
def test_alpha(tau0, alpha):
    assert alpha_from_tau0(tau0) == pytest.approx(alpha, abs=1e-5)


@given(st.floats(1e-6, 1 - 1e-6))
def test_alpha_round_trip(tau0):
    assert g_hat(alpha_from_tau0(tau0)) == pytest.approx(tau0, abs=1e-12)
    assert g_hat_inverse(tau0) == pytest.approx(alpha_from_tau0(tau0), rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
def test_alpha_domain(bad):
    with pytest.raises(ValueError):
        alpha_from_tau0(bad)


def test_breve_g_without_chirp_is_g_hat():
    xi = np.linspace(-2, 2, 41)
    np.testing.assert_allclose(breve_g(xi, 0.0), g_hat(xi), atol=1e-10)


def test_G_reduces_without_chirp():
    xi = np.linspace(-2, 2, 81)
    np.testing.assert_allclose(G_closed(xi, KernelParams(SIGMA, 0.0)), g_hat(xi), atol=1e-15)


def test_abs_G0_value():
    p = KernelParams(SIGMA, 10.0)
    expected = (1 + (20 * np.pi / 256) ** 2) ** -0.25
    assert expected == pytest.approx(0.98548, abs=1e-5)
    assert abs_G0(p.b) == pytest.approx(expected, rel=1e-14)
    assert abs(G_closed(0.0, p)) == pytest.approx(expected, rel=1e-14)


def test_G_numeric_at_zero():
    assert abs(G_numeric(0.0, KernelParams(SIGMA, 0.0)) - 1.0) < 1e-10
    p = KernelParams(1.0, 10.0 / 256.0)
    assert abs(G_numeric(0.0, p)) == pytest.approx(0.98548, abs=1e-5)
    assert abs(G_numeric(0.0, p)) == pytest.approx(float(abs_G0(p.b)), abs=1e-6)


def test_G_quadrature_converged():
    p = KernelParams(1.0, 0.5)
    xi = np.linspace(-2, 2, 21)
    a = G_numeric(xi, p, step=1e-3)
    b = G_numeric(xi, p, step=5e-4)
    assert np.max(np.abs(a - b)) < 1e-9


@given(st.floats(-1.0, 1.0), st.floats(0.0, 3.0))
def test_abs_G_even_and_monotone(lam, xi):
    b = 2 * np.pi * lam
    assert abs_G(xi, b) == pytest.approx(abs_G(-xi, b), rel=1e-15)
    assert abs_G(xi + 0.01, b) <= abs_G(xi, b)
    assert abs(G_closed(xi, KernelParams(1.0, lam))) == pytest.approx(float(abs_G(xi, b)), rel=1e-12)


@given(st.floats(-5.0, 5.0))
def test_abs_G0_at_most_one(lam):
    g0 = float(abs_G0(2 * np.pi * lam))
    assert g0 <= 1.0
    if lam != 0.0 and abs(lam) > 1e-6:
        assert g0 < 1.0


def test_abs_G0_is_one_without_chirp():
    assert abs_G0(0.0) == 1.0


def test_abs_G_inverse_examples():
    p = KernelParams(SIGMA, 10.0)
    assert abs_G_inverse(float(abs_G0(p.b)), p) == 0.0
    assert abs_G_inverse(0.2, KernelParams(SIGMA, 0.0)) == pytest.approx(alpha_from_tau0(0.2), rel=1e-12)


@given(st.floats(-2.0, 2.0), st.floats(1e-3, 1.0 - 1e-3))
def test_abs_G_inverse_round_trip(lam, frac):
    p = KernelParams(1.0, lam)
    y = frac * float(abs_G0(p.b))
    xi = abs_G_inverse(y, p)
    assert abs_G(xi, p.b) == pytest.approx(y, abs=1e-10)


def test_abs_G_inverse_domain():
    p = KernelParams(SIGMA, 10.0)
    with pytest.raises(ValueError):
        abs_G_inverse(0.999, p)


def test_alpha_k():
    a = alpha_from_tau0(0.2)
    assert alpha_k(KernelParams(SIGMA, 0.0), a) == a
    assert alpha_k(KernelParams(SIGMA, 10.0), a) == pytest.approx(0.28554 * (1 + 0.24544), abs=1e-5)
    assert alpha_k(KernelParams(SIGMA, 10.0), a) == pytest.approx(0.35563, abs=1e-5)


def test_alpha_k_dominates_exact_radius():
    # alpha_k is an upper bound for the exact tau0-crossing of |G|
    a = alpha_from_tau0(0.2)
    for r in (0.0, 5.0, 10.0, 18.0, 40.0):
        p = KernelParams(SIGMA, r)
        assert xi_k(p, 0.2) <= alpha_k(p, a) + 1e-15
        assert abs_G(xi_k(p, 0.2), p.b) == pytest.approx(0.2, abs=1e-12)


@pytest.mark.parametrize("n, expected", [(1, 0.79788), (2, 1.0), (3, 1.59577)])
def test_moments(n, expected):
    assert abs_moment(n) == pytest.approx(expected, abs=1e-5)
    val, _ = quad(lambda t: abs(t) ** n * g_value(t), -12, 12, epsabs=1e-13)
    assert abs_moment(n) == pytest.approx(val, abs=1e-10)


def test_moment_domain():
    with pytest.raises(ValueError):
        abs_moment(4)


@given(st.floats(-1e3, 1e3), st.floats(1e-3, 1.0))
def test_chirp_factor_inverts_G0(r, sigma):
    b = 2 * np.pi * r * sigma**2
    assert abs(chirp_factor(b)) * abs_G0(b) == pytest.approx(1.0, abs=1e-12)
    f = chirp_factor(b)
    # same quadrant as 1 - i b
    assert f.real > 0 and (f.imag <= 0) == (b >= 0)


def test_window_spec_validation():
    assert WindowSpec().alpha == pytest.approx(0.28554, abs=1e-5)
    with pytest.raises(ValueError):
        WindowSpec(tau0=1.0)
    with pytest.raises(ValueError):
        WindowSpec(truncation=2.0)
    with pytest.raises(ValueError):
        WindowSpec(kind="hann")
    with pytest.raises(ValueError):
        KernelParams(0.0)
