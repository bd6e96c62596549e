import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from diracinv.core import (
    B,
    I2,
    SIGMA2,
    SIGMA3,
    c_alpha,
    commutator_b,
    conj_b,
    legendre_eval,
    op_norm,
    rotation,
    sph_bessel_seq,
    sph_bessel_table,
    spline_fit_deriv,
    uniform_mesh,
)
from diracinv.core.grid import Mesh

finite = st.floats(-1e3, 1e3, allow_nan=False)
mat2 = st.lists(finite, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))


# ---- matrix algebra

def test_rotation_zero_is_identity():
    assert np.array_equal(rotation(0.0), I2)


def test_c_alpha_zero_times_sigma2_is_identity():
    np.testing.assert_allclose(c_alpha(0.0) @ SIGMA2, rotation(0.0), atol=1e-15)


@pytest.mark.parametrize("a", [0.7, -1.2, 0.0, 1.5])
def test_c_alpha_projector_identity(a):
    np.testing.assert_allclose((I2 + c_alpha(a)) @ (I2 - c_alpha(a)), np.zeros((2, 2)), atol=1e-15)


@pytest.mark.parametrize("a", [0.3, -0.9])
def test_c_alpha_sigma2_is_double_rotation(a):
    np.testing.assert_allclose(c_alpha(a) @ SIGMA2, rotation(2 * a), atol=1e-15)


def test_c_alpha_definition():
    a = 0.41
    np.testing.assert_allclose(c_alpha(a), SIGMA2 * math.cos(2 * a) + SIGMA3 * math.sin(2 * a))


@given(mat2)
def test_b_conjugation_is_exact_permutation(a):
    expect = np.array([[a[1, 1], -a[1, 0]], [-a[0, 1], a[0, 0]]])
    assert np.array_equal(B @ a @ B.T, expect)
    assert np.array_equal(conj_b(a), expect)


@given(mat2)
def test_commutator_has_potential_shape(a):
    c = commutator_b(a)
    assert c[0, 1] == c[1, 0]
    assert c[0, 0] == -c[1, 1]


@given(mat2)
def test_operator_norm_nonnegative(a):
    n = op_norm(a)
    assert np.isfinite(n) and n >= 0
    np.testing.assert_allclose(n, np.linalg.svd(a, compute_uv=False)[0], rtol=1e-12, atol=1e-300)


# ---- Legendre

@pytest.mark.parametrize("n,t,expect", [(0, 0.3, 1.0), (3, 0.5, -0.4375), (7, 1.0, 1.0)])
def test_legendre_values(n, t, expect):
    assert legendre_eval(n, t) == pytest.approx(expect, abs=1e-15)


def test_legendre_domain_errors():
    with pytest.raises(ValueError):
        legendre_eval(2, 1.1)
    with pytest.raises(ValueError):
        legendre_eval(-1, 0.2)


@settings(max_examples=50)
@given(st.integers(1, 49), st.floats(-1, 1))
def test_legendre_recurrence(n, t):
    lhs = (n + 1) * legendre_eval(n + 1, t)
    rhs = (2 * n + 1) * t * legendre_eval(n, t) - n * legendre_eval(n - 1, t)
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))


def test_legendre_matches_scipy():
    t = np.linspace(-1, 1, 41)
    for n in range(0, 30, 3):
        np.testing.assert_allclose(legendre_eval(n, t), special.eval_legendre(n, t), atol=1e-13)


# ---- spherical Bessel

def _power_series_j(n, z, terms=40):
    # independent oracle: j_n(z) = sum_k (-1)^k z^(n+2k) / (2^k k! (2n+2k+1)!!)
    total = 0.0
    for k in range(terms):
        dfact = math.prod(range(2 * n + 2 * k + 1, 0, -2))
        total += (-1) ** k * z ** (n + 2 * k) / (2**k * math.factorial(k) * dfact)
    return total


def test_bessel_j0_at_pi():
    assert abs(sph_bessel_seq(0, math.pi)[0]) < 1e-15


def test_bessel_at_origin():
    assert np.array_equal(sph_bessel_seq(2, 0.0), [1.0, 0.0, 0.0])


def test_bessel_against_power_series():
    j = sph_bessel_seq(1, 1.0)
    assert j[0] == pytest.approx(0.8414709848078965, rel=1e-15)
    assert j[1] == pytest.approx(_power_series_j(1, 1.0), rel=1e-13)
    for z in (0.05, 0.5, 2.0, 4.0):
        seq = sph_bessel_seq(8, z)
        for n in range(9):
            assert seq[n] == pytest.approx(_power_series_j(n, z), rel=1e-11, abs=1e-300)


def test_bessel_against_scipy_wide_range():
    z = np.concatenate([-np.logspace(-4, 4, 200), np.logspace(-4, 4, 300), [0.0]])
    tab = sph_bessel_table(40, z)
    n = np.arange(41)
    ref = special.spherical_jn(n[None, :], z[:, None])
    # relative error, floored near the zeros of the oscillatory regime where |j_n| ~ 1/|z|
    amplitude = np.minimum(1.0, 1.0 / np.maximum(np.abs(z), 1e-300))[:, None]
    err = np.abs(tab - ref) / np.maximum(np.abs(ref), 1e-3 * amplitude)
    small = np.abs(ref) < 1e-280
    assert np.max(np.where(small, 0.0, err)) < 1e-11


@settings(max_examples=60)
@given(st.floats(1e-3, 1e3))
def test_bessel_closed_forms(z):
    j = sph_bessel_seq(1, z)
    j0 = math.sin(z) / z
    j1 = math.sin(z) / z**2 - math.cos(z) / z
    assert abs(j[0] - j0) <= 1e-12 * max(1.0, abs(j0)) or abs(j[0] - j0) <= 1e-12 / z
    assert abs(j[1] - j1) <= 1e-12 * max(abs(j1), 1.0 / z, 1e-300) + 1e-300


def test_bessel_table_shape_and_parity():
    z = np.array([[0.3, -0.3], [5.0, -5.0]])
    tab = sph_bessel_table(5, z)
    assert tab.shape == (2, 2, 6)
    sign = (-1.0) ** np.arange(6)
    np.testing.assert_allclose(tab[:, 1], tab[:, 0] * sign, rtol=1e-15)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(-50, 50), st.integers(0, 5))
def test_legendre_cosine_sine_integrals(x, lam, n):
    cos_int = integrate.quad(lambda t: special.eval_legendre(2 * n, t / x) * math.cos(lam * t), 0, x,
                             limit=200, epsabs=1e-13, epsrel=1e-13)[0] / x
    sin_int = integrate.quad(lambda t: special.eval_legendre(2 * n + 1, t / x) * math.sin(lam * t), 0, x,
                             limit=200, epsabs=1e-13, epsrel=1e-13)[0] / x
    j = sph_bessel_seq(2 * n + 1, lam * x)
    assert cos_int == pytest.approx((-1) ** n * j[2 * n], abs=1e-9)
    assert sin_int == pytest.approx((-1) ** n * j[2 * n + 1], abs=1e-9)


# ---- mesh and spline

def test_uniform_mesh_defaults():
    m = uniform_mesh()
    assert len(m) == 100 and m.points[0] == 0.0 and m.points[-1] == 1.0 and m.uniform


@pytest.mark.parametrize("pts", [[0.0, 0.5, 0.5, 1.0], [0.1, 0.5, 1.0], [0.0, 0.6, 0.4, 1.0]])
def test_mesh_rejects_bad_points(pts):
    with pytest.raises(ValueError):
        Mesh(np.array(pts))


def test_spline_constant_has_zero_derivative():
    x = np.sort(np.random.default_rng(3).uniform(0, 1, 30))
    _, dy = spline_fit_deriv(x, np.full_like(x, 5.0))
    assert np.max(np.abs(dy)) < 1e-10


def test_spline_reproduces_quintic():
    x = uniform_mesh().points
    sp, dy = spline_fit_deriv(x, x**5)
    inner = (x > 0.02) & (x < 0.98)
    np.testing.assert_allclose(dy[inner], 5 * x[inner] ** 4, atol=1e-9)
    np.testing.assert_allclose(sp(x), x**5, atol=1e-14)


def test_spline_derivative_of_sine():
    x = uniform_mesh().points
    _, dy = spline_fit_deriv(x, np.sin(6 * x))
    inner = (x >= 0.05) & (x <= 0.95)
    assert np.max(np.abs(dy[inner] - 6 * np.cos(6 * x[inner]))) < 1e-6


def test_spline_derivative_is_continuous_quintic():
    x = uniform_mesh(40).points
    sp, _ = spline_fit_deriv(x, np.exp(x) * np.cos(3 * x))
    pp = sp.piecewise()
    assert pp.c.shape[0] == 7
    d = sp.bspline.derivative()
    knots = np.unique(sp.knots[(sp.knots > 0) & (sp.knots < 1)])
    np.testing.assert_allclose(d(knots - 1e-12), d(knots + 1e-12), atol=1e-8)


def test_spline_rejects_duplicates_and_short_input():
    x = np.linspace(0, 1, 10)
    with pytest.raises(ValueError):
        spline_fit_deriv(np.r_[x[:5], x[4:]], np.zeros(11))
    with pytest.raises(ValueError):
        spline_fit_deriv(x[:6], np.zeros(6))
