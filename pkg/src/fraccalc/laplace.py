"""Truncated numerical Laplace transform and the analytic transform table."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .differint import as_function
from .errors import DomainError
from .mittag import MLParams
from .settings import SETTINGS
from .specfun import gamma

_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)
# geometric subpanels toward t = 0 absorb t^(-k) type endpoint singularities
_GEOM_LEVELS = 30
_GEOM_RATIO = 0.15
TRUNCATION_BOUND = 1e-10


@dataclass(frozen=True)
class LaplaceQuery:
    """Transform variable s, truncation horizon T and node budget.

    ``n_nodes`` sets the uniform 16-point panels (n_nodes // 16 of them); the
    first panel is further split geometrically, adding 16 * 30 nodes.
    """

    s: float
    horizon_T: float | None = None
    n_nodes: int = field(default_factory=lambda: 16 * SETTINGS.laplace_panels)

    def __post_init__(self):
        if not self.s > 0:
            raise DomainError("Laplace variable s must be > 0")
        if self.horizon_T is None:
            object.__setattr__(self, "horizon_T", 30.0 / self.s)
        if not self.horizon_T > 0:
            raise DomainError("horizon_T must be > 0")
        if not math.exp(-self.s * self.horizon_T) < TRUNCATION_BOUND:
            raise DomainError(
                f"exp(-s T) = {math.exp(-self.s * self.horizon_T):.3g} is not below {TRUNCATION_BOUND:g}; "
                "increase horizon_T"
            )
        if self.n_nodes < 16:
            raise DomainError("n_nodes must be >= 16")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        panels = max(1, self.n_nodes // 16)
        edges = np.linspace(0.0, self.horizon_T, panels + 1)
        first = edges[1] * _GEOM_RATIO ** np.arange(_GEOM_LEVELS, -1, -1)
        breaks = np.concatenate((first, edges[2:]))
        lo, hi = breaks[:-1], breaks[1:]
        half = 0.5 * (hi - lo)
        t = (lo + half)[:, None] + half[:, None] * _GL16_X
        w = half[:, None] * _GL16_W
        return t.ravel(), w.ravel()


def laplace_numeric(f, q: LaplaceQuery) -> float:
    """int_0^T exp(-s t) f(t) dt by composite Gauss-Legendre."""
    f = as_function(f)
    t, w = q.nodes()
    vals = np.asarray(f(t), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise DomainError("integrand is not finite at some quadrature node")
    return float(np.dot(w, np.exp(-q.s * t) * vals))


def laplace_monomial(n: float, s: float) -> float:
    """L{t^n}(s) = Gamma(n + 1) / s^(n + 1), real n > -1."""
    if not n > -1:
        raise DomainError("laplace_monomial needs n > -1")
    if not s > 0:
        raise DomainError("laplace_monomial needs s > 0")
    return gamma(n + 1.0) / s ** (n + 1.0)


def laplace_ml(params: MLParams | tuple, a_coef: float, s: float) -> float:
    """L{t^(beta-1) E_{alpha,beta}(a t^alpha)}(s) = s^(alpha-beta) / (s^alpha - a)."""
    if not isinstance(params, MLParams):
        params = MLParams(*params)
    if not s > 0:
        raise DomainError("laplace_ml needs s > 0")
    sa = s**params.alpha
    if not sa > a_coef:
        raise DomainError("laplace_ml needs s^alpha > a")
    return s ** (params.alpha - params.beta) / (sa - a_coef)


def _unit_order(alpha):
    if not 0 < alpha < 1:
        raise DomainError("transform rules are implemented for alpha in (0, 1)")


def caputo_transform_rhs(f, alpha: float, s: float, q: LaplaceQuery | None = None) -> float:
    """s^alpha L{f} - s^(alpha-1) f(0): the transform of the Caputo derivative."""
    _unit_order(alpha)
    f = as_function(f)
    q = LaplaceQuery(s) if q is None else q
    if q.s != s:
        raise DomainError("query s and s disagree")
    return s**alpha * laplace_numeric(f, q) - s ** (alpha - 1.0) * f(0.0)


def rl_transform_rhs(
    f, alpha: float, s: float, q: LaplaceQuery | None = None, init_term: float = 0.0
) -> float:
    """s^alpha L{f} - [I^(1-alpha) f](0+): the transform of the RL derivative.

    ``init_term`` is the caller-supplied initial value; it is zero for f
    bounded near 0.
    """
    _unit_order(alpha)
    f = as_function(f)
    q = LaplaceQuery(s) if q is None else q
    if q.s != s:
        raise DomainError("query s and s disagree")
    return s**alpha * laplace_numeric(f, q) - init_term
