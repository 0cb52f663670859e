"""Numeric differintegral engines on a left-sided interval (a, x).

* :func:`gl_differint` -- Grunwald-Letnikov weighted backward sums (first order).
* :func:`frac_integral`, :func:`rl_derivative`, :func:`caputo_derivative` --
  product integration: the kernel ``(x - t)**(mu - 1)`` is integrated exactly
  against a piecewise-linear interpolant of the smooth factor.
* :func:`taylor_differint` -- term-wise application to a Taylor expansion at a.

Product-integration results are computed on ``GridSpec.refinement_levels``
successively doubled grids; the finest value is returned and a
:class:`ResolutionWarning` is emitted when the last two disagree.
"""

from __future__ import annotations

import math
import warnings
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ResolutionWarning, SeriesDivergenceError, SingularEndpointWarning
from .settings import SETTINGS
from .specfun import gamma, reciprocal_gamma

# substitution exponent used when the integrand is singular at the lower endpoint
GRADED_EXPONENT = 4
_MAX_EXPONENT = 64
_NEAR_ENDPOINT = 1e-3
# a jump across the first cell this many times the function's size marks a boundary layer
_LAYER_FACTOR = 10.0


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DifferintOrder:
    """Order ``alpha`` (negative means integration) on the interval (a, x)."""

    alpha: float
    a: float
    x: float

    def __post_init__(self):
        if not self.x > self.a:
            raise DomainError(f"need x > a, got a = {self.a:g}, x = {self.x:g}")

    @property
    def n(self) -> int:
        """Auxiliary integer order floor(alpha) + 1."""
        return math.floor(self.alpha) + 1


@dataclass(frozen=True)
class GridSpec:
    n_points: int = field(default_factory=lambda: SETTINGS.grid_points)
    refinement_levels: int = field(default_factory=lambda: SETTINGS.grid_levels)

    def __post_init__(self):
        if self.n_points < 8:
            raise DomainError("GridSpec.n_points must be >= 8")
        if self.refinement_levels < 1:
            raise DomainError("GridSpec.refinement_levels must be >= 1")

    def levels(self) -> list[int]:
        return [self.n_points * 2**i for i in range(self.refinement_levels)]

    @property
    def finest(self) -> int:
        return self.levels()[-1]


def _vectorised(fn: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def call(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            try:
                out = np.asarray(fn(t), dtype=float)
                if out.shape == t.shape:
                    return out
                if out.ndim == 0:
                    return np.full(t.shape, float(out))
            except (TypeError, ValueError):
                pass
        return np.vectorize(lambda s: _safe_scalar(fn, s), otypes=[float])(t)

    return call


def _safe_scalar(fn, s):
    try:
        return float(fn(float(s)))
    except (ValueError, ZeroDivisionError, OverflowError):
        return math.nan


def _central_difference(fn, order: int, h: float):
    """Central difference of the given order applied to a vectorised fn."""
    coeffs = [(-1) ** j * math.comb(order, j) for j in range(order + 1)]
    offsets = [(order / 2.0 - j) * h for j in range(order + 1)]
    forward = [j * h for j in range(order + 1)][::-1]

    def d(t):
        t = np.asarray(t, dtype=float)
        acc = sum(c * fn(t + o) for c, o in zip(coeffs, offsets)) / h**order
        bad = ~np.isfinite(acc)
        if np.any(bad):
            # one-sided fallback where the function is undefined left of t
            tb = t[bad] if acc.ndim else t
            alt = sum(c * fn(tb + o) for c, o in zip(coeffs, forward)) / h**order
            if acc.ndim:
                acc = np.array(acc, dtype=float)
                acc[bad] = alt
            else:
                acc = alt
        return acc

    return d


@dataclass
class RealFunction:
    """Real function of one variable with optional analytic derivatives.

    ``derivatives[k-1]`` is the k-th derivative.  Callables should accept
    numpy arrays; scalar-only callables are wrapped automatically.  They must
    be reentrant: engines may evaluate them from several threads.
    """

    eval: Callable
    derivatives: Sequence[Callable] = ()
    domain: tuple[float, float] = (-math.inf, math.inf)
    name: str = ""

    def __post_init__(self):
        self._f = _vectorised(self.eval)
        self._d = [_vectorised(d) for d in self.derivatives]

    def __call__(self, t):
        out = self._f(t)
        return float(out) if np.ndim(t) == 0 else out

    @property
    def max_analytic_order(self) -> int:
        return len(self._d)

    def derivative(self, k: int, h: float | None = None) -> Callable:
        """Vectorised k-th derivative; finite differences beyond the analytic ones."""
        if k == 0:
            return self._f
        if k <= len(self._d):
            return self._d[k - 1]
        base_order = len(self._d)
        base = self._d[-1] if base_order else self._f
        return _central_difference(base, k - base_order, 1e-5 if h is None else h)

    def derivative_at(self, k: int, t: float, h: float | None = None) -> float:
        return float(self.derivative(k, h)(np.asarray(float(t))))

    def reflected(self, pivot: float) -> "RealFunction":
        """t -> f(pivot - t), with derivatives carrying (-1)**k."""
        f = self._f
        derivs = [
            (lambda d, s: (lambda t: s * d(pivot - np.asarray(t, dtype=float))))(d, (-1.0) ** (i + 1))
            for i, d in enumerate(self._d)
        ]
        return RealFunction(lambda t: f(pivot - np.asarray(t, dtype=float)), derivs, name=f"reflected {self.name}")


def as_function(f) -> RealFunction:
    if isinstance(f, RealFunction):
        return f
    if callable(f):
        return RealFunction(f)
    raise TypeError("expected a RealFunction or a callable")


# ---------------------------------------------------------------------------
# function catalogue
# ---------------------------------------------------------------------------


def power(mu: float, shift: float = 0.0, orders: int = 8) -> RealFunction:
    """(t - shift)**mu with analytic derivatives."""

    def make(k):
        coef = 1.0
        for j in range(k):
            coef *= mu - j
        e = mu - k
        if coef == 0.0:
            return lambda t: np.zeros_like(np.asarray(t, dtype=float))
        return lambda t: coef * (np.asarray(t, dtype=float) - shift) ** e

    return RealFunction(make(0), [make(k) for k in range(1, orders + 1)], name=f"t^{mu:g}")


def constant(K: float = 1.0) -> RealFunction:
    zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))  # noqa: E731
    return RealFunction(lambda t: np.full_like(np.asarray(t, dtype=float), K), [zero] * 4, name=f"{K:g}")


def _cycle(funcs, orders=8):
    return [funcs[(k + 1) % len(funcs)] for k in range(orders)]


def _sin_family():
    fs = [np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)]
    return RealFunction(fs[0], _cycle(fs), name="sin")


def _cos_family():
    fs = [np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t), np.sin]
    return RealFunction(fs[0], _cycle(fs), name="cos")


def _log_function():
    derivs = []
    for k in range(1, 7):
        c = (-1.0) ** (k - 1) * math.factorial(k - 1)
        derivs.append((lambda c, k: lambda t: c * np.asarray(t, dtype=float) ** (-k))(c, k))
    return RealFunction(np.log, derivs, domain=(0.0, math.inf), name="log")


def _exp_neg():
    return RealFunction(
        lambda t: np.exp(-np.asarray(t, dtype=float)),
        [(lambda s: lambda t: s * np.exp(-np.asarray(t, dtype=float)))((-1.0) ** k) for k in range(1, 9)],
        name="exp(-t)",
    )


FUNCTIONS: dict[str, Callable[[], RealFunction]] = {
    "one": lambda: constant(1.0),
    "identity": lambda: power(1.0),
    "sqrt": lambda: power(0.5),
    "square": lambda: power(2.0),
    "sin": _sin_family,
    "cos": _cos_family,
    "exp": lambda: RealFunction(np.exp, [np.exp] * 8, name="exp"),
    "exp_neg": _exp_neg,
    "log": _log_function,
}


def catalogue(tag: str) -> RealFunction:
    try:
        return FUNCTIONS[tag]()
    except KeyError:
        raise DomainError(f"unknown function tag {tag!r}; choose from {sorted(FUNCTIONS)}") from None


# ---------------------------------------------------------------------------
# Grunwald-Letnikov
# ---------------------------------------------------------------------------


def gl_weights(q: float, n: int) -> np.ndarray:
    """Coefficients Gamma(k-q)/(Gamma(k+1) Gamma(-q)), k < n, by recurrence."""
    return np.asarray(kernels.IMPL.gl_weights(float(q), int(n)))


def gl_differint(f, order: DifferintOrder, N: int | None = None) -> float:
    """Grunwald-Letnikov differintegral of order ``order.alpha`` at x."""
    f = as_function(f)
    N = SETTINGS.gl_points if N is None else int(N)
    if N < 2:
        raise DomainError("gl_differint needs N >= 2")
    q = float(order.alpha)
    if q == 0.0:
        return f(order.x)
    h = (order.x - order.a) / N
    values = f(order.x - h * np.arange(N))
    return float(h ** (-q) * kernels.IMPL.gl_sum(np.ascontiguousarray(values), q))


# ---------------------------------------------------------------------------
# product integration
# ---------------------------------------------------------------------------


def _lower_value(g, a):
    with np.errstate(all="ignore"):
        try:
            return float(g(np.asarray([a]))[0])
        except (ValueError, ZeroDivisionError, OverflowError):
            return math.nan


def _needs_grading(g, a: float, x: float, n: int) -> bool:
    """True when g is infinite at a or changes by far more than its size across the first cell."""
    ga = _lower_value(g, a)
    if not math.isfinite(ga):
        return True
    with np.errstate(all="ignore"):
        g1, gm = np.asarray(g(np.array([a + (x - a) / n, 0.5 * (a + x)])), dtype=float)
    if not (math.isfinite(g1) and math.isfinite(gm)):
        return True
    return abs(ga - g1) > _LAYER_FACTOR * (abs(g1) + abs(gm))


def _endpoint_exponent(g, a: float, x: float) -> int:
    """Substitution power q so that s^(q-1) g(a + (x-a) s^q) ~ s^(>=1) near s = 0."""
    d = 1e-8 * (x - a)
    with np.errstate(all="ignore"):
        g1, g2 = np.abs(np.asarray(g(np.array([a + d, a + 2.0 * d])), dtype=float))
    if not (np.isfinite(g1) and np.isfinite(g2)) or g1 == 0.0 or g2 == 0.0:
        return GRADED_EXPONENT
    p = math.log(g2 / g1) / math.log(2.0)
    if p >= 0.0:
        return GRADED_EXPONENT
    if p <= -1.0 + 2.0 / _MAX_EXPONENT:
        return _MAX_EXPONENT
    return max(GRADED_EXPONENT, math.ceil(2.0 / (p + 1.0)))


def _product_integral_level(g, mu: float, a: float, x: float, N: int, graded, q: int = GRADED_EXPONENT) -> float:
    s = np.linspace(0.0, 1.0, N + 1)
    if not graded:
        t = a + (x - a) * s
        t[-1] = x
        w = kernels.IMPL.product_weights(t, float(x), float(mu))
        return float(np.dot(w, np.asarray(g(t), dtype=float)))
    # t = a + (x - a) s^q turns an endpoint factor (t - a)^p into a smooth
    # power of s; the kernel becomes (x - a)^(mu - 1) (1 - s)^(mu - 1) r(s)^(mu - 1)
    # with r(s) = (1 - s^q)/(1 - s) = 1 + s + ... + s^(q-1)
    t = a + (x - a) * s**q
    t[-1] = x
    r = np.polyval(np.ones(q), s)
    with np.errstate(all="ignore"):
        G = r ** (mu - 1.0) * q * s ** (q - 1) * np.asarray(g(t), dtype=float)
    if not math.isfinite(G[0]):
        G[0] = 2.0 * G[1] - G[2]
    w = kernels.IMPL.product_weights(s, 1.0, float(mu))
    return float((x - a) ** mu * np.dot(w, G))


def product_integral(
    g,
    mu: float,
    a: float,
    x: float,
    grid: GridSpec | None = None,
    tol: float | None = None,
    graded: bool | None = None,
) -> float:
    """int_a^x (x - t)**(mu - 1) g(t) dt by product integration.

    When g is not finite at a the substitution t = a + (x - a) s^q is applied
    first, with q >= 4 chosen from the observed endpoint exponent p so that
    behaviour like (t - a)^p turns into a smooth power of s.
    """
    if not mu > 0:
        raise DomainError("product integration needs mu > 0")
    grid = GridSpec() if grid is None else grid
    tol = SETTINGS.quad_tol if tol is None else tol
    g = g if not isinstance(g, RealFunction) else g.derivative(0)
    if graded is None:
        graded = _needs_grading(g, a, x, grid.n_points)
    q = _endpoint_exponent(g, a, x) if graded else GRADED_EXPONENT
    values = [_product_integral_level(g, mu, a, x, N, graded, q) for N in grid.levels()]
    best = values[-1]
    if len(values) > 1 and abs(values[-1] - values[-2]) > 10.0 * tol * max(1.0, abs(best)):
        warnings.warn(
            f"refinement levels disagree: {values[-2]:.10g} vs {values[-1]:.10g}; "
            "result may need a finer grid",
            ResolutionWarning,
            stacklevel=3,
        )
    return best


def frac_integral(f, alpha: float, a: float, x: float, grid: GridSpec | None = None) -> float:
    """Riemann-Liouville fractional integral of order alpha > 0 at x."""
    if not alpha > 0:
        raise DomainError("frac_integral needs alpha > 0")
    if not x > a:
        raise DomainError("frac_integral needs x > a")
    f = as_function(f)
    return product_integral(f.derivative(0), alpha, a, x, grid) / gamma(alpha)


def _check_derivative_order(alpha: float, engine: str) -> int:
    if alpha != math.floor(alpha):
        return math.floor(alpha) + 1
    raise DomainError(
        f"{engine} derivative of integer order {alpha:g} is the classical derivative; "
        "differentiate directly or use a non-integer order"
    )


def _fd_step(order: DifferintOrder) -> float:
    return max(1e-5 * (order.x - order.a), 1e-7)


def local_terms(f, order: DifferintOrder) -> float:
    """sum_{k<n} f^(k)(a) (x-a)^(k-alpha) / Gamma(1+k-alpha): the RL minus Caputo difference."""
    f = as_function(f)
    n = order.n
    h = _fd_step(order)
    dx = order.x - order.a
    total = 0.0
    blows_up = False
    for k in range(n):
        fk = f.derivative_at(k, order.a, h)
        if fk == 0.0:
            continue
        if k < order.alpha:
            blows_up = True
        total += fk * dx ** (k - order.alpha) * reciprocal_gamma(1.0 + k - order.alpha)
    if blows_up and dx < _NEAR_ENDPOINT * max(1.0, abs(order.a)):
        warnings.warn(
            f"x is within {dx:.3g} of the endpoint; the value grows like (x - a)^(-{order.alpha:g})",
            SingularEndpointWarning,
            stacklevel=3,
        )
    return total


def caputo_derivative(f, order: DifferintOrder, grid: GridSpec | None = None) -> float:
    """Caputo derivative I^(n - alpha) f^(n) at x.

    Order 0 returns f(x), negative orders the fractional integral.
    """
    f = as_function(f)
    alpha = float(order.alpha)
    if alpha == 0.0:
        return f(order.x)
    if alpha < 0:
        return frac_integral(f, -alpha, order.a, order.x, grid)
    n = _check_derivative_order(alpha, "Caputo")
    mu = n - alpha
    g = f.derivative(n, _fd_step(order))
    return product_integral(g, mu, order.a, order.x, grid) * reciprocal_gamma(mu)


def rl_derivative(f, order: DifferintOrder, grid: GridSpec | None = None) -> float:
    """Riemann-Liouville derivative of non-integer order at x.

    Uses the representation sum of endpoint terms plus I^(n - alpha) f^(n),
    which only needs f^(n) on (a, x).
    """
    f = as_function(f)
    alpha = float(order.alpha)
    if alpha == 0.0:
        return f(order.x)
    if alpha < 0:
        return frac_integral(f, -alpha, order.a, order.x, grid)
    _check_derivative_order(alpha, "Riemann-Liouville")
    return local_terms(f, order) + caputo_derivative(f, order, grid)


_ENGINES = {"rl": rl_derivative, "caputo": caputo_derivative}


def right_sided(f, alpha: float, x: float, b: float, engine: str = "rl", grid: GridSpec | None = None) -> float:
    """Right-sided operator on (x, b) via the reflection t -> x + b - t."""
    f = as_function(f)
    g = f.reflected(x + b)
    order = DifferintOrder(alpha, x, b)
    if engine == "integral":
        return frac_integral(g, alpha, x, b, grid)
    try:
        op = _ENGINES[engine]
    except KeyError:
        raise DomainError(f"engine must be 'rl', 'caputo' or 'integral', got {engine!r}") from None
    return op(g, order, grid)


# ---------------------------------------------------------------------------
# Taylor engine
# ---------------------------------------------------------------------------

TaylorResult = namedtuple("TaylorResult", "value last_term n_terms")


def taylor_differint(
    derivs_at_a: Sequence[float], alpha: float, a: float, x: float, engine: str = "rl"
) -> TaylorResult:
    """Apply the RL or Caputo operator term-wise to the Taylor series at a.

    RL terms are f^(k)(a) (x-a)^(k-alpha) / Gamma(k-alpha+1); Caputo terms
    f^(k+1)(a) (x-a)^(k+1-alpha) / Gamma(k-alpha+2).
    """
    if not 0 < alpha < 1:
        raise DomainError("taylor_differint needs alpha in (0, 1)")
    if not x > a:
        raise DomainError("taylor_differint needs x > a")
    d = [float(v) for v in derivs_at_a]
    if len(d) < 5:
        raise DomainError("supply at least five derivatives f(a), f'(a), ... f''''(a)")
    dx = x - a
    if engine == "rl":
        terms = ((d[k], k - alpha, k - alpha + 1.0) for k in range(len(d)))
    elif engine == "caputo":
        terms = ((d[k + 1], k + 1.0 - alpha, k - alpha + 2.0) for k in range(len(d) - 1))
    else:
        raise DomainError(f"engine must be 'rl' or 'caputo', got {engine!r}")
    total = 0.0
    last = 0.0
    growth = 0
    count = 0
    for coef, expo, garg in terms:
        term = coef * dx**expo * reciprocal_gamma(garg) if coef != 0.0 else 0.0
        if count and term != 0.0 and last != 0.0 and abs(term) > abs(last):
            growth += 1
            if growth >= 5:
                raise SeriesDivergenceError(
                    f"Taylor terms grew 5 times in a row; x - a = {dx:g} is outside the expansion radius"
                )
        elif term != 0.0:
            growth = 0
        total += term
        if term != 0.0 or count == 0:
            last = term
        count += 1
    return TaylorResult(total, abs(last), count)


# ---------------------------------------------------------------------------
# semigroup
# ---------------------------------------------------------------------------


def frac_integral_nodes(f, alpha: float, a: float, x: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """I^alpha f at every node of the uniform grid a + j (x - a)/n, j = 0..n."""
    if not alpha > 0:
        raise DomainError("frac_integral_nodes needs alpha > 0")
    f = as_function(f)
    t = np.linspace(a, x, n + 1)
    g = np.ascontiguousarray(f(t), dtype=float)
    h = (x - a) / n
    vals = np.asarray(kernels.IMPL.frac_integral_nodes(g, h, float(alpha))) / gamma(alpha)
    return t, vals


def semigroup_check(
    f, alpha: float, beta: float, a: float, x: float, grid: GridSpec | None = None
) -> tuple[float, float]:
    """(I^beta I^alpha f, I^(alpha+beta) f) at x, for comparison."""
    if not (alpha > 0 and beta > 0):
        raise DomainError("semigroup_check needs alpha, beta > 0")
    grid = GridSpec() if grid is None else grid
    t, inner = frac_integral_nodes(f, alpha, a, x, grid.finest)
    w = kernels.IMPL.product_weights(t, float(x), float(beta))
    lhs = float(np.dot(w, inner)) / gamma(beta)
    rhs = frac_integral(f, alpha + beta, a, x, grid)
    return lhs, rhs
