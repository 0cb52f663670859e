"""Fractional falling body with linear drag, and the tautochrone Abel equation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .differint import DifferintOrder, GridSpec, RealFunction, as_function, caputo_derivative, product_integral
from .errors import DomainError
from .mittag import ml


@dataclass(frozen=True)
class FallingBodyParams:
    """m C D^alpha v = m g - b v, parametrised by the time constant m/b."""

    m_over_b: float = 4.0
    g: float = 9.81
    v0: float = 0.0
    alpha: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.m_over_b > 0:
            raise DomainError("m_over_b must be > 0")
        if not 0 < self.alpha <= 1:
            raise DomainError("alpha must lie in (0, 1]")
        if not self.g > 0:
            raise DomainError("g must be > 0")
        if not self.mass > 0:
            raise DomainError("mass must be > 0")

    @property
    def rate(self) -> float:
        return 1.0 / self.m_over_b

    @property
    def terminal_velocity(self) -> float:
        return self.g * self.m_over_b


def falling_velocity(p: FallingBodyParams, t):
    """v(t) = g t^alpha E_{alpha,alpha+1}(-t^alpha b/m) + v0 E_alpha(-t^alpha b/m)."""
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise DomainError("falling_velocity needs t >= 0")
    ta = tt**p.alpha
    z = -p.rate * ta
    out = p.g * ta * ml((p.alpha, p.alpha + 1.0), z) + p.v0 * ml((p.alpha, 1.0), z)
    return float(out) if np.ndim(t) == 0 else out


def falling_acceleration(p: FallingBodyParams, t):
    """dv/dt = (g - v0 b/m) t^(alpha-1) E_{alpha,alpha}(-t^alpha b/m); infinite at 0 for alpha < 1."""
    tt = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        ta1 = tt ** (p.alpha - 1.0)
    z = -p.rate * tt**p.alpha
    out = (p.g - p.v0 * p.rate) * ta1 * ml((p.alpha, p.alpha), z)
    return float(out) if np.ndim(t) == 0 else out


def classical_velocity(p: FallingBodyParams, t):
    """alpha = 1 solution mg/b + (v0 - mg/b) exp(-t b/m)."""
    vt = p.terminal_velocity
    return vt + (p.v0 - vt) * np.exp(-np.asarray(t, dtype=float) * p.rate)


def falling_residual(p: FallingBodyParams, t: float, grid: GridSpec | None = None) -> float:
    """m C D^alpha v(t) - (m g - b v(t)) with the Caputo derivative done by quadrature."""
    if not p.alpha < 1:
        raise DomainError("falling_residual needs 0 < alpha < 1")
    if not t > 0:
        raise DomainError("falling_residual needs t > 0")
    v = RealFunction(lambda s: falling_velocity(p, s), [lambda s: falling_acceleration(p, s)])
    dv = caputo_derivative(v, DifferintOrder(p.alpha, 0.0, t), grid)
    b = p.mass * p.rate
    return p.mass * dv - (p.mass * p.g - b * falling_velocity(p, t))


@dataclass(frozen=True)
class TautochroneSpec:
    T: float = 1.0
    g: float = 9.81
    y_max: float = 4.0

    def __post_init__(self):
        if not (self.T > 0 and self.g > 0 and self.y_max > 0):
            raise DomainError("TautochroneSpec fields must be positive")

    @property
    def phi(self) -> float:
        """Constant right-hand side sqrt(2 g) T of the Abel equation."""
        return math.sqrt(2.0 * self.g) * self.T


def _check_height(spec: TautochroneSpec, y):
    yy = np.asarray(y, dtype=float)
    if np.any(yy <= 0) or np.any(yy > spec.y_max):
        raise DomainError(f"y must lie in (0, {spec.y_max:g}]")
    return yy


def tautochrone_arclength(spec: TautochroneSpec, y, method: str = "closed", grid: GridSpec | None = None):
    """Arc length S(y) = (1/pi) int_0^y (y - y0)^(-1/2) phi dy0 = 2 phi sqrt(y) / pi.

    ``method="quadrature"`` evaluates the integral by product integration.
    """
    yy = _check_height(spec, y)
    if method == "closed":
        out = 2.0 * spec.phi * np.sqrt(yy) / math.pi
    elif method == "quadrature":
        const = RealFunction(lambda u: np.full_like(np.asarray(u, dtype=float), spec.phi))
        vals = [product_integral(const, 0.5, 0.0, float(v), grid) / math.pi for v in np.ravel(yy)]
        out = np.reshape(vals, yy.shape)
    else:
        raise DomainError("method must be 'closed' or 'quadrature'")
    return float(out) if np.ndim(y) == 0 else out


def arclength_general(spec: TautochroneSpec, y, n: float = 0.5):
    """S(y) = sin(n pi)/pi int_0^y (y - y0)^(n-1) phi dy0 for constant phi."""
    if not 0 < n < 1:
        raise DomainError("n must lie in (0, 1)")
    yy = _check_height(spec, y)
    out = math.sin(n * math.pi) / math.pi * spec.phi * yy**n / n
    return float(out) if np.ndim(y) == 0 else out


def arclength_slope(spec: TautochroneSpec, n: float = 0.5) -> RealFunction:
    """dS/dy of :func:`arclength_general`, as a RealFunction (singular at y = 0)."""
    if not 0 < n < 1:
        raise DomainError("n must lie in (0, 1)")
    c = math.sin(n * math.pi) / math.pi * spec.phi

    def slope(y):
        with np.errstate(divide="ignore"):
            return c * np.asarray(y, dtype=float) ** (n - 1.0)

    return RealFunction(slope, name="dS/dy")


def abel_forward(S_derivative, y0: float, n: float = 0.5, grid: GridSpec | None = None) -> float:
    """int_0^y0 (y0 - y)^(-n) S'(y) dy by product integration."""
    if not 0 < n < 1:
        raise DomainError("n must lie in (0, 1)")
    if not y0 > 0:
        raise DomainError("y0 must be > 0")
    f = as_function(S_derivative)
    return product_integral(f.derivative(0), 1.0 - n, 0.0, float(y0), grid)
