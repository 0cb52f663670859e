import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraccalc import kernels
from fraccalc.errors import ConvergenceError, DomainError, ResultOverflowError
from fraccalc.laplace import LaplaceQuery, laplace_ml, laplace_numeric
from fraccalc.mittag import MLParams, ml, ml_derivative, ml_terms, z_max


def mp_ml(alpha, beta, z):
    # independent oracle: plain series in working precision wide enough for the peak term,
    # summed until the terms are 40 orders of magnitude below one
    r = abs(z)
    peak = max(0.0, r ** (1.0 / alpha)) / math.log(10.0)
    with mpmath.workdps(int(peak) + 40):
        zz, a, b = mpmath.mpf(z), mpmath.mpf(alpha), mpmath.mpf(beta)
        total, k = mpmath.mpf(0), 0
        while True:
            t = zz**k * mpmath.rgamma(a * k + b)
            total += t
            if k > r ** (1.0 / alpha) / alpha + 10 and abs(t) < mpmath.mpf(10) ** -40:
                return float(total)
            k += 1


def test_params_validation():
    with pytest.raises(DomainError):
        MLParams(0, 1)
    with pytest.raises(DomainError):
        MLParams(1, -0.5)


def test_exponential_case():
    for x in (-2.0, 0.0, 1.0):
        assert ml(MLParams(1, 1), x) == pytest.approx(math.exp(x), rel=1e-12, abs=1e-12)


def test_trig_cases():
    assert ml((2, 1), -1.3**2) == pytest.approx(math.cos(1.3), rel=1e-13)
    assert ml((2, 1), -1.3**2) == pytest.approx(0.2674988, abs=1e-7)
    assert ml((2, 2), -4.0) == pytest.approx(math.sin(2.0) / 2.0, rel=1e-13)
    assert ml((2, 2), -4.0) == pytest.approx(0.4546487, abs=1e-7)


def test_zero_argument():
    assert ml((0.5, 1), 0.0) == 1.0
    assert ml((0.7, 2.5), 0.0) == pytest.approx(1 / math.gamma(2.5), rel=1e-14)


def test_half_order_against_erfc():
    # E_{1/2}(-x) = exp(x^2) erfc(x)
    for x in (0.5, 2.0, 7.0, 12.0):
        exact = float(mpmath.exp(mpmath.mpf(x) ** 2) * mpmath.erfc(x))
        assert ml((0.5, 1), -x) == pytest.approx(exact, rel=1e-12)


@given(st.floats(0.5, 2.0), st.floats(0.2, 3.0), st.floats(-10, 5))
def test_against_high_precision_series(alpha, beta, z):
    assert ml((alpha, beta), z) == pytest.approx(mp_ml(alpha, beta, z), rel=1e-10, abs=1e-14)


def test_vectorised_matches_scalar():
    z = np.linspace(-6, 3, 19)
    v = ml((0.8, 1.3), z)
    assert v.shape == z.shape
    assert np.allclose(v, [ml((0.8, 1.3), float(t)) for t in z], rtol=0, atol=0)


def test_term_count_below_200_for_small_arguments():
    for alpha in (0.5, 1.0, 1.5, 2.0):
        for z in np.linspace(-5, 5, 21):
            assert ml_terms((alpha, 1.0), z) < 200


def test_parameter_continuity():
    # absolute 1e-6 where |E| is moderate; relative where E grows like exp(z^(1/alpha))
    for z in np.linspace(-5, 5, 21):
        for alpha, beta in [(0.5, 1), (1.0, 1.0), (1.7, 0.4), (0.75, 2.0)]:
            e0 = ml((alpha, beta), z)
            e1 = ml((alpha + 1e-9, beta), z)
            assert abs(e0 - e1) < 1e-6 * max(1.0, abs(e0))


def test_domain_limit():
    with pytest.raises(DomainError):
        ml((1.0, 1.0), -101.0)
    with pytest.raises(DomainError):
        ml((0.25, 1.0), 20.0)


def test_overflow_signalled_for_large_positive_argument():
    with pytest.raises(ResultOverflowError):
        ml((0.5, 1.0), 40.0)


def test_term_cap_raises_convergence_error():
    with pytest.raises(ConvergenceError):
        ml((1.0, 1.0), 5.0, max_terms=10)


def test_cancellation_is_repaired_in_extended_precision():
    assert ml((1, 1), -50.0) == pytest.approx(math.exp(-50.0), rel=1e-12)
    assert ml((2, 1), -(9.5**2)) == pytest.approx(math.cos(9.5), rel=1e-12)


def test_large_negative_half_order_uses_asymptotic_expansion():
    mpmath.mp.dps = 40
    for x in (20.0, 50.0, 100.0):
        exact = float(mpmath.exp(mpmath.mpf(x) ** 2) * mpmath.erfc(mpmath.mpf(x)))
        assert ml((0.5, 1.0), -x) == pytest.approx(exact, rel=1e-13)
    mpmath.mp.dps = 15


@pytest.mark.parametrize("alpha,beta,z", [(0.3, 0.7, -8.0), (0.9, 1.0, -40.0), (0.75, 0.3, -30.0), (0.25, 1.5, -3.0)])
def test_negative_axis_against_wide_precision_series(alpha, beta, z):
    assert ml((alpha, beta), z) == pytest.approx(mp_ml(alpha, beta, z), rel=1e-13)


def test_strong_cancellation_above_order_one():
    # the double sum loses about 12 digits here; the extended path recovers them
    with mpmath.workdps(80):
        exact = float(mpmath.fsum(mpmath.mpf(-99) ** k * mpmath.rgamma(mpmath.mpf(1.5) * k + 1) for k in range(400)))
    assert ml((1.5, 1.0), -99.0) == pytest.approx(exact, rel=1e-13)
    assert ml((1.0, 1.0), -99.0) == pytest.approx(math.exp(-99.0), rel=1e-13)


def test_backends_agree():
    z = np.linspace(-9, 4, 27)
    for alpha, beta in [(0.5, 1.0), (1.2, 0.7), (2.0, 2.0)]:
        s1, a1, _, _ = kernels.ml_series_loop(alpha, beta, z, 1e-16, 10000)
        s2, _, _, _ = kernels.ml_series_np(alpha, beta, z, 1e-16, 10000)
        # raw double-precision sums agree up to the cancellation bound eps * sum|t_k|
        assert np.all(np.abs(s1 - s2) <= 1e-14 * np.maximum(a1, 1.0))


def test_derivative_examples():
    assert ml_derivative(1.0, 1.0, 0.7) == pytest.approx(math.exp(0.7), rel=1e-13)
    h = 1e-5
    fd = (ml((0.5, 1), -((1 + h) ** 0.5)) - ml((0.5, 1), -((1 - h) ** 0.5))) / (2 * h)
    assert ml_derivative(0.5, -1.0, 1.0) == pytest.approx(fd, abs=1e-6)
    assert ml_derivative(0.5, -1.0, 1.0) == pytest.approx(-ml((0.5, 0.5), -1.0), rel=1e-14)
    assert abs(ml_derivative(2.0, -1.0, math.pi)) < 1e-12


def test_derivative_domain():
    with pytest.raises(DomainError):
        ml_derivative(0.5, 1.0, 0.0)
    with pytest.raises(DomainError):
        ml_derivative(1.5, 1.0, -1.0)
    assert ml_derivative(1.0, 2.0, 0.0) == pytest.approx(2.0)


@given(st.floats(0.2, 1.9), st.floats(-2, 2), st.floats(0.1, 3))
def test_derivative_matches_central_difference(alpha, a, t):
    if abs(a) * (t + 1e-4) ** alpha > z_max(alpha):
        return
    h = 1e-6 * max(t, 1)
    fd = (ml((alpha, 1), a * (t + h) ** alpha) - ml((alpha, 1), a * (t - h) ** alpha)) / (2 * h)
    assert ml_derivative(alpha, a, t) == pytest.approx(fd, rel=1e-5, abs=1e-6)


def test_laplace_consistency():
    q = LaplaceQuery(2.0, 60.0)
    num = laplace_numeric(lambda t: ml((0.5, 1.0), -np.sqrt(t)), q)
    assert num == pytest.approx(laplace_ml((0.5, 1.0), -1.0, 2.0), rel=1e-3)
