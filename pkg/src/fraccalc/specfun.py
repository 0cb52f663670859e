"""Real-argument special functions: Gamma, 1/Gamma, digamma, Beta, incomplete Beta.

Scalars go through the compiled kernels; array arguments take the vectorised
numpy path.  Poles raise :class:`PoleError` instead of producing NaN or inf.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import DomainError, GammaOverflowError, PoleError

EULER_GAMMA = 0.57721566490153286061
GAMMA_XMAX = kernels.GAMMA_XMAX

# B_{2k} / (2k) for the digamma asymptotic series, k = 1..7
_DIGAMMA_ASYM = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def _is_pole(x) -> np.ndarray | bool:
    return (np.asarray(x) <= 0) & (np.floor(x) == x)


def euler_mascheroni() -> float:
    """Euler-Mascheroni constant."""
    return EULER_GAMMA


def gamma(x):
    """Gamma function for real ``x``.

    Raises :class:`PoleError` at 0, -1, -2, ... and :class:`GammaOverflowError`
    for ``x > 171.6``.
    """
    if np.ndim(x) == 0:
        x = float(x)
        if math.isnan(x):
            return math.nan
        if _is_pole(x):
            raise PoleError(f"Gamma has a pole at x = {x:g}")
        if x > GAMMA_XMAX:
            raise GammaOverflowError(f"Gamma({x:g}) overflows double precision")
        return float(kernels.IMPL.gamma(x))
    arr = np.asarray(x, dtype=float)
    if np.any(_is_pole(arr)):
        raise PoleError("Gamma has a pole at a non-positive integer in the input")
    if np.any(arr > GAMMA_XMAX):
        raise GammaOverflowError("Gamma overflows double precision for x > 171.6")
    return kernels.gamma_np(arr)


def reciprocal_gamma(x):
    """1/Gamma(x); entire, exactly 0 at the poles of Gamma."""
    if np.ndim(x) == 0:
        return float(kernels.IMPL.rgamma(float(x)))
    return kernels.rgamma_np(np.asarray(x, dtype=float))


rgamma = reciprocal_gamma


def log_gamma(x):
    """log|Gamma(x)| for x > 0."""
    if np.ndim(x) == 0:
        x = float(x)
        if not x > 0.0:
            raise DomainError("log_gamma requires x > 0")
        return float(kernels.IMPL.lgamma_pos(x))
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("log_gamma requires x > 0")
    return kernels.lgamma_pos_np(arr)


def _digamma_scalar(x: float) -> float:
    if _is_pole(x):
        raise PoleError(f"digamma has a pole at x = {x:g}")
    acc = 0.0
    if x < 0.0:
        # psi(1 - x) - psi(x) = pi cot(pi x)
        s = kernels.sinpi_loop(x)
        c = kernels.sinpi_loop(x + 0.5)
        acc -= math.pi * c / s
        x = 1.0 - x
    while x < 6.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for c in _DIGAMMA_ASYM:
        series += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def digamma(x):
    """Digamma psi(x) = Gamma'(x)/Gamma(x)."""
    if np.ndim(x) == 0:
        return _digamma_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.vectorize(_digamma_scalar, otypes=[float])(arr)


def log_beta(p: float, q: float) -> float:
    if not (p > 0 and q > 0):
        raise DomainError("beta requires p > 0 and q > 0")
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q)


def beta(p: float, q: float) -> float:
    """Complete Beta function B(p, q) for p, q > 0."""
    if not (p > 0 and q > 0):
        raise DomainError("beta requires p > 0 and q > 0")
    if p + q < GAMMA_XMAX:
        return gamma(p) * gamma(q) * reciprocal_gamma(p + q)
    return math.exp(log_beta(p, q))


def _betacf(z: float, p: float, q: float, eps=1e-15, max_iter=500) -> float:
    # modified Lentz evaluation of the incomplete Beta continued fraction
    tiny = 1e-300
    qab = p + q
    qap = p + 1.0
    qam = p - 1.0
    c = 1.0
    d = 1.0 - qab * z / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (q - m) * z / ((qam + m2) * (p + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(p + m) * (qab + m) * z / ((p + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    from .errors import ConvergenceError

    raise ConvergenceError("incomplete Beta continued fraction did not converge")


def _inc_beta_series(z: float, p: float, q: float) -> float:
    # sum_n (1-q)_n / n! * z^n / (p+n), scaled by z^p / B(p,q)
    term = 1.0
    acc = 1.0 / p
    n = 0
    while True:
        n += 1
        term *= (n - q) * z / n
        contrib = term / (p + n)
        acc += contrib
        if abs(contrib) < 1e-17 * abs(acc) or n > 2000:
            break
    return math.exp(p * math.log(z) - log_beta(p, q)) * acc


def _inc_beta_scalar(z: float, p: float, q: float) -> float:
    if not (p > 0 and q > 0):
        raise DomainError("inc_beta_reg requires p > 0 and q > 0")
    if not (0.0 <= z <= 1.0):
        raise DomainError("inc_beta_reg requires z in [0, 1]")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return 1.0
    if z < 1e-3:
        return min(1.0, _inc_beta_series(z, p, q))
    if 1.0 - z < 1e-3:
        return max(0.0, 1.0 - _inc_beta_series(1.0 - z, q, p))
    front = math.exp(p * math.log(z) + q * math.log1p(-z) - log_beta(p, q))
    if z < (p + 1.0) / (p + q + 2.0):
        return front * _betacf(z, p, q) / p
    return 1.0 - front * _betacf(1.0 - z, q, p) / q


def inc_beta_reg(z, p: float, q: float):
    """Regularised incomplete Beta I_z(p, q) = B(z; p, q) / B(p, q).

    Uses the standard convention B(z; p, q) = int_0^z u^(p-1) (1-u)^(q-1) du.
    """
    if np.ndim(z) == 0:
        return _inc_beta_scalar(float(z), float(p), float(q))
    arr = np.asarray(z, dtype=float)
    return np.vectorize(lambda t: _inc_beta_scalar(t, p, q), otypes=[float])(arr)


def gamma_ratio_neg(n: int, N: int) -> float:
    """Gamma(-n) / Gamma(-N) for non-negative integers, as a limit of the poles."""
    if n < 0 or N < 0 or int(n) != n or int(N) != N:
        raise DomainError("gamma_ratio_neg requires non-negative integers")
    n, N = int(n), int(N)
    sign = -1.0 if (N - n) % 2 else 1.0
    if N >= n:
        return sign * float(math.prod(range(n + 1, N + 1)))
    return sign / float(math.prod(range(N + 1, n + 1)))
