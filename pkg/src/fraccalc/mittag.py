"""Two-parameter Mittag-Leffler function by direct power series.

Terms are ``z**k / Gamma(alpha*k + beta)``; the kernel stops once three
consecutive, non-increasing terms fall below ``tol * |partial sum|``.  For
negative arguments the alternating series loses digits to cancellation; when
the estimated loss ``eps * sum|t_k|`` exceeds ``1e-14 * |sum|`` the value is
re-summed by Horner's rule in exact integer fixed point, with coefficients
computed once in mpmath and cached.

For 0 < alpha < 2 and large negative z the inverse-power expansion
``-sum_k z**-k / Gamma(beta - alpha*k)`` is used instead whenever its
truncation error bound, and for alpha >= 1 the size of the neglected
exponentially small terms, are below double precision.  This avoids the
cancellation entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, ResultOverflowError
from .settings import SETTINGS

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MLParams:
    """Parameter pair (alpha, beta) of E_{alpha,beta}; both must be positive."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(f"Mittag-Leffler needs alpha, beta > 0, got {self.alpha}, {self.beta}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


def z_max(alpha: float) -> float:
    """Largest |z| accepted for a given alpha.

    100 for alpha >= 0.5.  Smaller alpha make the series grow like
    exp(|z|**(1/alpha)), so the bound shrinks to keep |z|**(1/alpha) <= 1e4.
    """
    if alpha >= 0.5:
        return 100.0
    return 100.0 ** (2.0 * alpha)


@lru_cache(maxsize=64)
def _lgamma_table(alpha: float, beta: float, max_terms: int) -> np.ndarray:
    table = kernels.lgamma_pos_np(alpha * np.arange(max_terms + 1, dtype=float) + beta)
    table.flags.writeable = False
    return table


def _log_terms(alpha: float, beta: float, r: float, max_terms: int) -> np.ndarray:
    return np.arange(max_terms + 1, dtype=float) * math.log(r) - _lgamma_table(alpha, beta, max_terms)


def _budget(alpha: float, beta: float, r: float, tol: float, max_terms: int) -> tuple[int, float]:
    """(terms needed, log10 of the largest term); raises if the term budget is too small."""
    logs = _log_terms(alpha, beta, r, max_terms)
    cutoff = math.log(tol) - max(0.0, math.log(r)) - 5.0
    peak = int(np.argmax(logs))
    below = np.nonzero(logs[peak:] < cutoff)[0]
    if below.size == 0:
        raise ConvergenceError(f"E_{{{alpha:g},{beta:g}}}(-{r:g}) needs more than {max_terms} series terms")
    return peak + int(below[0]), float(logs[peak]) / math.log(10.0)


# relative rounding budget; sums whose estimated loss exceeds it are redone in higher precision
_EXTENDED_TRIGGER = 1e-14
# bits of fixed-point precision tried first; enough whenever |E| is above about 2^-60
_FIXED_START_BITS = 128
# about 2000 decimal digits
_MAX_BITS = 6656


@lru_cache(maxsize=256)
def _fixed_coefficients(alpha: float, beta: float, n: int, r: float, bits: int) -> tuple:
    """round(2^bits * r^k / Gamma(alpha k + beta)) as integers, k < n."""
    logs = _log_terms(alpha, beta, r, n - 1)
    extra = max(0.0, float(np.max(logs))) / math.log(2.0)
    with mpmath.workprec(bits + int(extra) + 40):
        a, b, rr = mpmath.mpf(alpha), mpmath.mpf(beta), mpmath.mpf(r)
        scale = mpmath.mpf(2) ** bits
        return tuple(int(mpmath.nint(scale * rr**k * mpmath.rgamma(a * k + b))) for k in range(n))


def _ml_fixed(alpha: float, beta: float, z: float, tol: float, max_terms: int) -> float:
    """Series by Horner's rule in exact integer fixed point.

    With u = z / r in [-1, 1] (r a power of two, so u is exact) every Horner
    step adds at most one unit of 2^-bits to the absolute error, however
    large the intermediate terms grow.  The precision is raised until that
    bound is small against the result, which is what a tiny value such as
    E_1(-100) ~ 4e-44 needs.
    """
    rz = abs(z)
    if rz == 0.0:
        return 1.0 / math.gamma(beta)
    r = 2.0 ** math.ceil(math.log2(rz))
    mant, ex = math.frexp(z / r)
    m = int(mant * 2**53)
    shift = 53 - ex
    bits = _FIXED_START_BITS
    while True:
        if bits > _MAX_BITS:
            raise ConvergenceError(
                f"E_{{{alpha:g},{beta:g}}}({z:g}) needs more than {_MAX_BITS} bits of working precision; "
                "cancellation is too severe"
            )
        # stop once terms fall below one unit of the fixed-point grid
        needed, _ = _budget(alpha, beta, rz, 2.0**-bits, max_terms)
        n = 16 * (needed // 16 + 1)
        coef = _fixed_coefficients(alpha, beta, n, r, bits)
        acc = 0
        for c in reversed(coef):
            acc = c + ((acc * m) >> shift)
        val = acc / (1 << bits)
        err = (2 * n + 4) * 2.0**-bits
        if val != 0.0 and err <= 1e-2 * _EXTENDED_TRIGGER * abs(val):
            return val
        scale = abs(val) if val != 0.0 else 2.0**-bits
        want = math.log2((2 * n + 4) / (1e-2 * _EXTENDED_TRIGGER * scale))
        bits = max(bits + 32, 32 * (int(want) // 32 + 1))


_ASYM_TERMS = 400


def _ml_asymptotic(alpha: float, beta: float, zs: np.ndarray) -> np.ndarray:
    """Inverse-power expansion for 0 < alpha < 2, z < 0; NaN where not accurate enough.

    The error after truncation at term K is bounded by the envelope
    |z|**-K * Gamma(alpha*K + 1 - beta) / pi (the reflected Gamma without its
    sine factor), so a value is accepted only where that envelope dips below
    the relative rounding budget times |sum|.  For 1 <= alpha < 2 the
    negative axis also carries the conjugate pair
    (1/alpha) w**(1-beta) exp(w), w = |z|**(1/alpha) exp(+-i pi/alpha), which
    is not summed; it must be below the same budget.
    """
    zs = np.asarray(zs, dtype=float)
    out = np.full(zs.shape, np.nan)
    if not 0 < alpha < 2:
        return out
    k = np.arange(1, _ASYM_TERMS + 1, dtype=float)
    x = beta - alpha * k
    arg = 1.0 - x
    # the envelope is only meaningful once alpha*K + 1 - beta exceeds 1
    valid = arg > 1.0
    if not np.any(valid) or not np.any(zs < 0):
        return out
    neg = np.nonzero(zs < 0)[0]
    logr = np.log(-zs[neg])[:, None]
    lg = kernels.lgamma_pos_np(np.where(arg > 0, arg, 1.0))
    env = -k * logr + np.where(x < 1.0, lg, -kernels.lgamma_pos_np(np.maximum(x, 1.0))) - math.log(math.pi)
    kmin = np.argmin(np.where(valid, env, np.inf), axis=1)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    # 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi for x < 1, kept in log form
    # terms past kmin may overflow; they are masked out below
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        refl = np.exp(-k * logr + lg) * (kernels.sinpi_np(x) / math.pi)
        direct = np.exp(-k * logr) * kernels.rgamma_np(np.maximum(x, 1.0))
        terms = sign * np.where(x < 1.0, refl, direct)
    terms = np.where(np.arange(k.size) <= kmin[:, None], terms, 0.0)
    total = -np.sum(terms, axis=1)
    bound = env[np.arange(neg.size), kmin]
    if alpha >= 1:
        w = np.exp(logr[:, 0] / alpha)
        pair = math.log(2.0 / alpha) + (1.0 - beta) * logr[:, 0] / alpha + w * math.cos(math.pi / alpha)
        bound = np.maximum(bound, pair)
    with np.errstate(divide="ignore"):
        accept = (total != 0) & (bound <= np.log(_EXTENDED_TRIGGER * np.abs(total)))
    out[neg[accept]] = total[accept]
    return out


def _needs_extended(alpha, beta, z, s, abs_s, status, max_terms) -> bool:
    if status == kernels.ML_TERM_CAP:
        raise ConvergenceError(f"E_{{{alpha:g},{beta:g}}}({z:g}) did not converge in {max_terms} terms")
    if status == kernels.ML_NONFINITE or not math.isfinite(s):
        if z > 0:
            raise ResultOverflowError(f"E_{{{alpha:g},{beta:g}}}({z:g}) exceeds double range")
        return True
    return _EPS * abs_s > _EXTENDED_TRIGGER * abs(s)


def ml(params: MLParams | tuple, z, tol: float | None = None, max_terms: int | None = None):
    """E_{alpha,beta}(z) for real z (scalar or array).

    ``params`` may be an :class:`MLParams` or an ``(alpha, beta)`` tuple.
    Raises :class:`DomainError` for |z| above :func:`z_max`,
    :class:`ConvergenceError` when the term cap is hit or the required
    extended precision is out of reach.
    """
    if not isinstance(params, MLParams):
        params = MLParams(*params)
    tol = SETTINGS.ml_tol if tol is None else tol
    max_terms = SETTINGS.ml_max_terms if max_terms is None else max_terms
    alpha, beta = params.alpha, params.beta
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    if np.any(np.isnan(zs)):
        raise DomainError("Mittag-Leffler argument is NaN")
    limit = z_max(alpha)
    if np.any(np.abs(zs) > limit):
        raise DomainError(f"|z| > {limit:g} is outside the supported range for alpha = {alpha:g}")
    out = np.full_like(zs, np.nan)
    if alpha < 2:
        far = np.nonzero(zs <= -1.0)[0]
        out[far] = _ml_asymptotic(alpha, beta, zs[far])
    todo = np.nonzero(np.isnan(out))[0]
    if todo.size:
        s, a, _, status = kernels.IMPL.ml_series(alpha, beta, zs[todo], tol, max_terms)
        hard = []
        for j, i in enumerate(todo):
            if _needs_extended(alpha, beta, zs[i], s[j], a[j], status[j], max_terms):
                hard.append(i)
            else:
                out[i] = s[j]
        for i in hard:
            out[i] = _ml_fixed(alpha, beta, float(zs[i]), tol, max_terms)
    if scalar:
        return float(out[0])
    return out.reshape(np.shape(z))


def ml_terms(params: MLParams | tuple, z: float, tol: float | None = None) -> int:
    """Number of series terms the stopping rule consumed at z."""
    if not isinstance(params, MLParams):
        params = MLParams(*params)
    tol = SETTINGS.ml_tol if tol is None else tol
    _, _, used, _ = kernels.IMPL.ml_series(
        params.alpha, params.beta, np.array([float(z)]), tol, SETTINGS.ml_max_terms
    )
    return int(used[0])


def ml_derivative(alpha: float, a: float, t):
    """d/dt E_alpha(a t**alpha) = a t**(alpha-1) E_{alpha,alpha}(a t**alpha).

    Defined for t > 0; t = 0 is accepted only when alpha >= 1.
    """
    if not (0 < alpha <= 2):
        raise DomainError("ml_derivative requires alpha in (0, 2]")
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0) or (alpha < 1 and np.any(tt <= 0)):
        raise DomainError("ml_derivative requires t > 0 (t >= 0 when alpha >= 1)")
    val = a * tt ** (alpha - 1.0) * ml((alpha, alpha), a * tt**alpha)
    if np.ndim(t) == 0:
        return float(val)
    return val

