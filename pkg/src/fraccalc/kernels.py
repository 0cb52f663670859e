"""Hot numeric kernels, each in a numba loop form and a numpy form.

Loop forms (suffix ``_loop``) are written against scalar ``math`` so numba can
compile them; without numba they still run, slowly, as plain Python.  The
numpy forms (suffix ``_np``) are independent vectorised implementations of the
same recurrences.  :data:`IMPL` points at whichever family the
``FRACCALC_BACKEND`` flag selected; callers go through the dispatch helpers at
the bottom of the module.

Kernels here do no argument validation; the public modules do that.
"""

from __future__ import annotations

import math
from types import SimpleNamespace

import numpy as np

from ._backend import BACKEND, njit

# Lanczos approximation, g = 7, 9 coefficients.
LANCZOS_G = 7.0
LANCZOS_COEF = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
GAMMA_XMAX = 171.6
# exact (to rounding) n! for n = 0..170, used at positive integer arguments
FACTORIALS = np.array([float(math.factorial(n)) for n in range(171)])

# 8-point Gauss-Legendre rule mapped to [0, 1].
_gl_x, _gl_w = np.polynomial.legendre.leggauss(8)
GL8_NODES = 0.5 * (_gl_x + 1.0)
GL8_WEIGHTS = 0.5 * _gl_w
del _gl_x, _gl_w

# Panels with far/near distance ratio below this use the quadrature branch.
_PANEL_RATIO = 0.25


# ---------------------------------------------------------------------------
# Gamma family, scalar loop forms
# ---------------------------------------------------------------------------


@njit
def sinpi_loop(x):
    # exact reduction to [0, 2) keeps sin(pi x) accurate for large |x|
    r = x - 2.0 * math.floor(0.5 * x)
    if r == 0.0 or r == 1.0:
        return 0.0
    if r > 1.0:
        return -math.sin(math.pi * (r - 1.0))
    return math.sin(math.pi * r)


@njit
def _lanczos_sum(xm1):
    a = LANCZOS_COEF[0]
    for i in range(1, 9):
        a += LANCZOS_COEF[i] / (xm1 + i)
    return a


@njit
def gamma_loop(x):
    if x >= 1.0 and x <= 171.0 and x == math.floor(x):
        return FACTORIALS[int(x) - 1]
    if x < 0.5:
        s = sinpi_loop(x)
        if 1.0 - x > GAMMA_XMAX:
            return math.pi / s * math.exp(-lgamma_pos_loop(1.0 - x))
        return math.pi / (s * gamma_loop(1.0 - x))
    xm1 = x - 1.0
    t = xm1 + LANCZOS_G + 0.5
    half = t ** (0.5 * (xm1 + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * _lanczos_sum(xm1)


@njit
def lgamma_pos_loop(x):
    """log Gamma(x) for x > 0."""
    if x < 0.5:
        return math.log(math.pi / sinpi_loop(x)) - lgamma_pos_loop(1.0 - x)
    xm1 = x - 1.0
    t = xm1 + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (xm1 + 0.5) * math.log(t) - t + math.log(_lanczos_sum(xm1))


@njit
def rgamma_loop(x):
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > GAMMA_XMAX:
        return math.exp(-lgamma_pos_loop(x))
    if x >= 1.0 and x <= 171.0 and x == math.floor(x):
        return 1.0 / FACTORIALS[int(x) - 1]
    if x < 0.5:
        s = sinpi_loop(x)
        if 1.0 - x > GAMMA_XMAX:
            # magnitude grows without bound for large negative x
            return s / math.pi * math.exp(lgamma_pos_loop(1.0 - x))
        return s * gamma_loop(1.0 - x) / math.pi
    return 1.0 / gamma_loop(x)


# ---------------------------------------------------------------------------
# Gamma family, numpy forms
# ---------------------------------------------------------------------------


def sinpi_np(x):
    x = np.asarray(x, dtype=float)
    r = x - 2.0 * np.floor(0.5 * x)
    out = np.where(r > 1.0, -np.sin(np.pi * (r - 1.0)), np.sin(np.pi * r))
    return np.where((r == 0.0) | (r == 1.0), 0.0, out)


def _lanczos_sum_np(xm1):
    a = np.full_like(xm1, LANCZOS_COEF[0])
    for i in range(1, 9):
        a = a + LANCZOS_COEF[i] / (xm1 + i)
    return a


def lgamma_pos_np(x):
    x = np.asarray(x, dtype=float)
    refl = x < 0.5
    xx = np.where(refl, 1.0 - x, x)
    xm1 = xx - 1.0
    t = xm1 + LANCZOS_G + 0.5
    base = _HALF_LOG_2PI + (xm1 + 0.5) * np.log(t) - t + np.log(_lanczos_sum_np(xm1))
    with np.errstate(divide="ignore"):
        refl_val = np.log(np.pi / np.where(refl, sinpi_np(x), 1.0)) - base
    return np.where(refl, refl_val, base)


def _gamma_right_np(x):
    xm1 = x - 1.0
    t = xm1 + LANCZOS_G + 0.5
    half = t ** (0.5 * (xm1 + 0.5))
    return _SQRT_2PI * half * (half * np.exp(-t)) * _lanczos_sum_np(xm1)


def _exact_integers(x, out, invert):
    ints = (x >= 1.0) & (x <= 171.0) & (x == np.floor(x))
    if not np.any(ints):
        return out
    idx = np.where(ints, x, 1.0).astype(np.int64) - 1
    exact = FACTORIALS[idx]
    return np.where(ints, 1.0 / exact if invert else exact, out)


def gamma_np(x):
    x = np.asarray(x, dtype=float)
    refl = x < 0.5
    xx = np.where(refl, 1.0 - x, x)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        g = np.where(xx > GAMMA_XMAX, np.inf, _gamma_right_np(np.minimum(xx, GAMMA_XMAX)))
        big = np.exp(-lgamma_pos_np(np.where(xx > GAMMA_XMAX, xx, 2.0)))
        s = sinpi_np(x)
        left = np.where(xx > GAMMA_XMAX, np.pi / s * big, np.pi / (s * g))
    return _exact_integers(x, np.where(refl, left, g), invert=False)


def rgamma_np(x):
    x = np.asarray(x, dtype=float)
    pole = (x <= 0.0) & (x == np.floor(x))
    refl = x < 0.5
    xx = np.where(refl, 1.0 - x, x)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        finite_g = _gamma_right_np(np.minimum(xx, GAMMA_XMAX))
        huge = xx > GAMMA_XMAX
        lg = lgamma_pos_np(np.where(huge, xx, 2.0))
        s = sinpi_np(x)
        right = np.where(huge, np.exp(-lg), 1.0 / finite_g)
        left = np.where(huge, s / np.pi * np.exp(lg), s * finite_g / np.pi)
        out = np.where(refl, left, right)
    return _exact_integers(x, np.where(pole, 0.0, out), invert=True)


# ---------------------------------------------------------------------------
# Grunwald-Letnikov
# ---------------------------------------------------------------------------


@njit
def gl_weights_loop(q, n):
    w = np.empty(n)
    w[0] = 1.0
    for k in range(1, n):
        w[k] = w[k - 1] * (k - 1 - q) / k
    return w


def gl_weights_np(q, n):
    k = np.arange(1, n, dtype=float)
    w = np.empty(n)
    w[0] = 1.0
    w[1:] = np.cumprod((k - 1.0 - q) / k)
    return w


@njit
def gl_sum_loop(values, q):
    """sum_k w_k(q) * values[k] with the weight recurrence run inline."""
    w = 1.0
    acc = values[0]
    for k in range(1, values.shape[0]):
        w *= (k - 1 - q) / k
        acc += w * values[k]
    return acc


def gl_sum_np(values, q):
    return float(np.dot(gl_weights_np(q, values.shape[0]), values))


# ---------------------------------------------------------------------------
# Product integration against (x - t)**(mu - 1) with a piecewise-linear
# interpolant of the smooth factor.
# ---------------------------------------------------------------------------


@njit
def panel_pair_loop(d, dd, mu):
    """Weights (far, near) of one panel whose ends sit at distances dd > d >= 0
    from the evaluation point."""
    delta = dd - d
    if d == 0.0:
        p = delta**mu
        return p / (mu + 1.0), p / (mu * (mu + 1.0))
    if delta < _PANEL_RATIO * d:
        wf = 0.0
        wn = 0.0
        for i in range(8):
            v = GL8_NODES[i]
            k = GL8_WEIGHTS[i] * (d + delta * v) ** (mu - 1.0)
            wf += k * v
            wn += k * (1.0 - v)
        return delta * wf, delta * wn
    m0 = (dd**mu - d**mu) / mu
    m1 = (dd ** (mu + 1.0) - d ** (mu + 1.0)) / (mu + 1.0)
    return (m1 - d * m0) / delta, (dd * m0 - m1) / delta


@njit
def product_weights_loop(nodes, x, mu):
    m = nodes.shape[0]
    w = np.zeros(m)
    for j in range(m - 1):
        far, near = panel_pair_loop(x - nodes[j + 1], x - nodes[j], mu)
        w[j] += far
        w[j + 1] += near
    return w


def panel_pair_np(d, dd, mu):
    d = np.asarray(d, dtype=float)
    dd = np.asarray(dd, dtype=float)
    delta = dd - d
    far = np.empty_like(d)
    near = np.empty_like(d)

    touch = d == 0.0
    p = delta[touch] ** mu
    far[touch] = p / (mu + 1.0)
    near[touch] = p / (mu * (mu + 1.0))

    quad = (~touch) & (delta < _PANEL_RATIO * d)
    if quad.any():
        dq = d[quad][:, None]
        hq = delta[quad][:, None]
        k = GL8_WEIGHTS * (dq + hq * GL8_NODES) ** (mu - 1.0)
        far[quad] = hq[:, 0] * (k @ GL8_NODES)
        near[quad] = hq[:, 0] * (k @ (1.0 - GL8_NODES))

    rest = ~(touch | quad)
    if rest.any():
        dr, ddr, hr = d[rest], dd[rest], delta[rest]
        m0 = (ddr**mu - dr**mu) / mu
        m1 = (ddr ** (mu + 1.0) - dr ** (mu + 1.0)) / (mu + 1.0)
        far[rest] = (m1 - dr * m0) / hr
        near[rest] = (ddr * m0 - m1) / hr
    return far, near


def product_weights_np(nodes, x, mu):
    dist = x - nodes
    far, near = panel_pair_np(dist[1:], dist[:-1], mu)
    w = np.zeros(nodes.shape[0])
    w[:-1] += far
    w[1:] += near
    return w


@njit
def _toeplitz_loop(m, mu):
    # unit spacing: panel u spans distances [u-1, u]
    a = np.zeros(m + 1)
    b = np.zeros(m + 2)
    for u in range(1, m + 1):
        far, near = panel_pair_loop(u - 1.0, float(u), mu)
        a[u] = far
        b[u] = near
    c = np.zeros(m + 1)
    c[0] = b[1]
    for u in range(1, m + 1):
        c[u] = a[u] + b[u + 1]
    return a, c


@njit
def frac_integral_nodes_loop(g, h, mu):
    """Product-integration values at every node of a uniform grid (node 0 -> 0)."""
    m = g.shape[0] - 1
    a, c = _toeplitz_loop(m, mu)
    scale = h**mu
    out = np.zeros(m + 1)
    for n in range(1, m + 1):
        acc = a[n] * g[0]
        for k in range(n):
            acc += c[k] * g[n - k]
        out[n] = scale * acc
    return out


def frac_integral_nodes_np(g, h, mu):
    g = np.asarray(g, dtype=float)
    m = g.shape[0] - 1
    u = np.arange(1, m + 1, dtype=float)
    far, near = panel_pair_np(u - 1.0, u, mu)
    a = np.concatenate(([0.0], far))
    b = np.concatenate(([0.0], near, [0.0]))
    c = np.empty(m + 1)
    c[0] = b[1]
    c[1:] = a[1:] + b[2:]
    conv = np.convolve(c, g)[: m + 1]
    out = conv + (a - c) * g[0]
    out[0] = 0.0
    return h**mu * out


# ---------------------------------------------------------------------------
# Mittag-Leffler power series
# ---------------------------------------------------------------------------

ML_OK = 0
ML_TERM_CAP = 1
ML_NONFINITE = 2


@njit
def _ml_term(alpha, beta, z, k, zpow):
    arg = alpha * k + beta
    if arg < 160.0 and abs(zpow) < 1e280 and (zpow == 0.0 or abs(zpow) > 1e-280):
        return zpow * rgamma_loop(arg)
    if z == 0.0:
        return 0.0
    mag = math.exp(k * math.log(abs(z)) - lgamma_pos_loop(arg))
    if z < 0.0 and k % 2 == 1:
        return -mag
    return mag


@njit
def ml_one_loop(alpha, beta, z, tol, max_terms):
    """Returns (sum, sum of |terms|, terms used, status)."""
    s = 0.0
    abs_s = 0.0
    small = 0
    prev = math.inf
    zpow = 1.0
    k = 0
    step = 2 if z < 0.0 else 1
    while k < max_terms:
        t0 = _ml_term(alpha, beta, z, k, zpow)
        zpow *= z
        if step == 2:
            t1 = _ml_term(alpha, beta, z, k + 1, zpow)
            zpow *= z
            s += t0 + t1  # alternating pair first, then accumulate
            abs_s += abs(t0) + abs(t1)
            mags = (abs(t0), abs(t1))
        else:
            s += t0
            abs_s += abs(t0)
            t1 = 0.0
            mags = (abs(t0), abs(t0))
        if not math.isfinite(abs_s):
            return s, abs_s, k + step, ML_NONFINITE
        for i in range(step):
            m = mags[i]
            if m <= prev and m < tol * abs(s):
                small += 1
            else:
                small = 0
            prev = m
            if small >= 3:
                if i + 1 < step:
                    # rule met on the first term of the pair; drop the second
                    s -= t1
                    abs_s -= abs(t1)
                return s, abs_s, k + i + 1, ML_OK
        k += step
    return s, abs_s, k, ML_TERM_CAP


@njit
def ml_series_loop(alpha, beta, z, tol, max_terms):
    n = z.shape[0]
    s = np.empty(n)
    a = np.empty(n)
    used = np.empty(n, dtype=np.int64)
    status = np.empty(n, dtype=np.int64)
    for i in range(n):
        s[i], a[i], used[i], status[i] = ml_one_loop(alpha, beta, z[i], tol, max_terms)
    return s, a, used, status


def ml_series_np(alpha, beta, z, tol, max_terms, block=64):
    """Block-vectorised twin of :func:`ml_series_loop` (plain cumulative sums)."""
    z = np.asarray(z, dtype=float)
    n = z.shape[0]
    s = np.zeros(n)
    a = np.zeros(n)
    used = np.zeros(n, dtype=np.int64)
    status = np.full(n, ML_TERM_CAP, dtype=np.int64)
    small = np.zeros(n, dtype=np.int64)
    prev = np.full(n, np.inf)
    active = np.arange(n)
    absz = np.abs(z)
    logz = np.log(np.where(absz > 0.0, absz, 1.0))
    start = 0
    while active.size and start < max_terms:
        stop = min(start + block, max_terms)
        k = np.arange(start, stop, dtype=float)
        arg = alpha * k + beta
        za = z[active][:, None]
        with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
            direct = za**k * rgamma_np(arg)
            logmag = k * logz[active][:, None] - lgamma_pos_np(arg)
            sign = np.where((za < 0.0) & (k % 2 == 1), -1.0, 1.0)
            viaexp = sign * np.exp(logmag)
            safe = (arg < 160.0) & np.isfinite(direct) & (np.abs(direct) < 1e280)
            terms = np.where(safe, direct, viaexp)
            terms = np.where(za == 0.0, np.where(k == 0, terms, 0.0), terms)
            partial = s[active][:, None] + np.cumsum(terms, axis=1)
            mags = np.abs(terms)
            abs_partial = a[active][:, None] + np.cumsum(mags, axis=1)
            prevs = np.concatenate((prev[active][:, None], mags[:, :-1]), axis=1)
            is_small = (mags <= prevs) & (mags < tol * np.abs(partial))

        # run length of consecutive small terms, carried across blocks
        run = np.empty_like(mags, dtype=np.int64)
        carry = small[active].copy()
        for j in range(mags.shape[1]):
            carry = np.where(is_small[:, j], carry + 1, 0)
            run[:, j] = carry
        done = run >= 3
        bad = ~np.isfinite(abs_partial)
        stop_mask = done | bad
        has_stop = stop_mask.any(axis=1)
        first = np.where(has_stop, stop_mask.argmax(axis=1), mags.shape[1] - 1)
        rows = np.arange(active.size)
        s[active] = partial[rows, first]
        a[active] = abs_partial[rows, first]
        used[active] = start + first + 1
        small[active] = run[rows, first]
        prev[active] = mags[rows, first]
        finished = has_stop
        status[active[finished & bad[rows, first]]] = ML_NONFINITE
        status[active[finished & ~bad[rows, first]]] = ML_OK
        active = active[~finished]
        start = stop
    return s, a, used, status


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

numba_impl = SimpleNamespace(
    gamma=gamma_loop,
    rgamma=rgamma_loop,
    lgamma_pos=lgamma_pos_loop,
    gl_sum=gl_sum_loop,
    gl_weights=gl_weights_loop,
    product_weights=product_weights_loop,
    frac_integral_nodes=frac_integral_nodes_loop,
    ml_series=ml_series_loop,
)

numpy_impl = SimpleNamespace(
    gamma=lambda x: float(gamma_np(x)),
    rgamma=lambda x: float(rgamma_np(x)),
    lgamma_pos=lambda x: float(lgamma_pos_np(x)),
    gl_sum=gl_sum_np,
    gl_weights=gl_weights_np,
    product_weights=product_weights_np,
    frac_integral_nodes=frac_integral_nodes_np,
    ml_series=ml_series_np,
)

IMPL = numba_impl if BACKEND == "numba" else numpy_impl
