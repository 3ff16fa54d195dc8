"""Special functions against mpmath/scipy oracles, plus identities."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import spherical_jn

from hadvp.specfun import (
    SpecialFunctionError, expint, expint_diff, expint_scaled, hyp2f1, sph_bessel_j,
)

mp.mp.dps = 40


def mp_expint(n, x):
    return float(mp.expint(n, x))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("x", [1e-8, 1e-3, 0.3, 0.999, 1.0, 1.001, 2.5, 10.0, 50.0, 300.0])
def test_expint_matches_mpmath(n, x):
    assert expint(n, x) == pytest.approx(mp_expint(n, x), rel=2e-14, abs=1e-300)


def test_expint_one_reference_value():
    assert expint(1, 1.0) == pytest.approx(0.219383934395520, rel=1e-13)


@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_expint_scaled_large_argument(n):
    x = 800.0
    ref = float(mp.exp(x) * mp.expint(n, x))
    assert expint_scaled(n, x) == pytest.approx(ref, rel=1e-13)


def test_expint_vectorized_and_scalar_agree():
    x = np.array([0.1, 1.0, 7.0])
    vec = expint(2, x)
    assert vec.shape == (3,)
    assert all(vec[i] == expint(2, xi) for i, xi in enumerate(x))


def test_expint_zero_argument():
    assert expint(3, 0.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        expint(1, 0.0)
    with pytest.raises(ValueError):
        expint(2, -1.0)
    with pytest.raises(ValueError):
        expint(-1, 1.0)


@given(n=st.integers(1, 6), x=st.floats(1e-6, 200.0))
def test_expint_recurrence(n, x):
    # n E_{n+1}(x) = e^{-x} - x E_n(x), in scaled form to avoid underflow
    lhs = n * expint_scaled(n + 1, x)
    rhs = 1.0 - x * expint_scaled(n, x)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-13)


@given(n=st.integers(1, 5), x=st.floats(1e-6, 100.0))
def test_expint_positive_and_decreasing(n, x):
    assert expint(n, x) > 0.0
    assert expint(n, x * 1.01) <= expint(n, x)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("u,w", [(1e-6, 1e-10), (0.5, 1e-9), (3.0, 0.1), (50.0, 1e-6),
                                 (50.0, 40.0), (1e-3, 300.0), (200.0, 0.4), (0.0, 2.0)])
def test_expint_diff_matches_mpmath(n, u, w):
    v = u + w
    if n == 1 and u == 0.0:
        pytest.skip("E1 diverges at 0")
    ref = float(mp.expint(n, mp.mpf(u)) - mp.expint(n, mp.mpf(u) + mp.mpf(w)))
    assert expint_diff(n, u, v) == pytest.approx(ref, rel=1e-10)


def test_expint_diff_rejects_reversed_arguments():
    with pytest.raises(ValueError):
        expint_diff(2, 2.0, 1.0)


@given(n=st.integers(1, 4), u=st.floats(1e-4, 50.0), w=st.floats(0.0, 50.0))
def test_expint_diff_nonnegative(n, u, w):
    assert expint_diff(n, u, u + w) >= 0.0


@pytest.mark.parametrize("a,b,c,z", [
    (1.0, 1.0, 2.0, -0.3),
    (1.99, 1.99, 2.99, -1e-3),
    (1.2, 1.2, 2.2, -0.49),
    (2.0, 2.0, 3.0, -5.0),
    (1.6, 1.6, 2.6, -50.0),
    (1.9999733, 1.9999733, 2.9999733, -4.0e-5),
    (3.0, 0.5, 4.5, -1e4),
])
def test_hyp2f1_matches_mpmath(a, b, c, z):
    assert hyp2f1(a, b, c, z) == pytest.approx(float(mp.hyp2f1(a, b, c, z)), rel=1e-11)


def test_hyp2f1_edge_cases():
    assert hyp2f1(2.0, 3.0, 4.0, 0.0) == 1.0
    with pytest.raises(ValueError):
        hyp2f1(1.0, 1.0, -2.0, -0.5)
    with pytest.raises(ValueError):
        hyp2f1(1.0, 1.0, 2.0, 0.5)


def test_hyp2f1_log_identity():
    # 2F1(1,1;2;z) = -ln(1-z)/z
    for z in (-0.1, -0.9, -3.0, -40.0):
        assert hyp2f1(1.0, 1.0, 2.0, z) == pytest.approx(-math.log1p(-z) / z, rel=1e-12)


@given(mu=st.floats(1.0, 5.0), z=st.floats(-200.0, -1e-6))
def test_hyp2f1_e1_moment_family(mu, z):
    # the family used by the Coulomb moments: positive and below 1 for z < 0
    v = hyp2f1(mu, mu, mu + 1.0, z)
    assert 0.0 < v < 1.0


@pytest.mark.parametrize("k", [0, 1])
def test_sph_bessel_matches_scipy(k):
    x = np.concatenate([np.geomspace(1e-8, 0.2, 40), np.linspace(0.2, 60.0, 301)])
    assert np.allclose(sph_bessel_j(k, x), spherical_jn(k, x), rtol=1e-12, atol=1e-15)


def test_sph_bessel_only_low_orders():
    with pytest.raises(ValueError):
        sph_bessel_j(2, 1.0)


def test_error_type_is_arithmetic():
    assert issubclass(SpecialFunctionError, ArithmeticError)
