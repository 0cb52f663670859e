"""Exact fractional derivatives and integrals for a small table of functions.

Each rule returns a :class:`ClosedFormResult` whose ``evaluate`` accepts
scalars or numpy arrays.  These serve as oracles for the numeric engines.

Order conventions: ``alpha`` in [0, 1] for the derivative rules, with
``alpha == 1`` giving the classical derivative and ``alpha == 0`` the
identity operator for both engines.  (The Caputo formulas tend to
``f - f(a)`` rather than ``f`` as alpha -> 0+; at exactly 0 the operator is
taken to be the identity.)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .mittag import ml
from .specfun import EULER_GAMMA, digamma, gamma, inc_beta_reg, reciprocal_gamma


class RuleId(str, enum.Enum):
    POWER = "power"
    SHIFTED_MONOMIAL_RL = "shifted_monomial_rl"
    SHIFTED_MONOMIAL_CAPUTO = "shifted_monomial_caputo"
    CONSTANT_RL = "constant_rl"
    CONSTANT_CAPUTO = "constant_caputo"
    SIN_ML_RL = "sin_ml_rl"
    SIN_ML_CAPUTO = "sin_ml_caputo"
    COS_ML_CAPUTO = "cos_ml_caputo"
    EXP_WEYL = "exp_weyl"
    LOG_RL = "log_rl"
    IDENTITY_RL = "identity_rl"
    IDENTITY_CAPUTO = "identity_caputo"


@dataclass(frozen=True)
class ClosedFormResult:
    """Evaluable closed form.  ``valid_domain`` is the open interval of x."""

    rule_id: RuleId
    valid_domain: tuple[float, float]
    evaluate: Callable
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        xx = np.asarray(x, dtype=float)
        lo, hi = self.valid_domain
        if np.any(xx <= lo) or np.any(xx >= hi):
            raise DomainError(f"{self.rule_id.value}: x must lie in ({lo:g}, {hi:g})")
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.evaluate(xx)
        out = np.asarray(out, dtype=float)
        if np.ndim(x) == 0:
            return float(out)
        return np.broadcast_to(out, xx.shape).copy()


def _check_unit_order(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"order must lie in [0, 1], got {alpha:g}")
    return alpha


def _check_engine(engine: str) -> str:
    if engine not in ("rl", "caputo"):
        raise DomainError(f"engine must be 'rl' or 'caputo', got {engine!r}")
    return engine


def power_rule(mu: float, alpha: float, scale_a: float = 1.0, shift_b: float = 0.0) -> ClosedFormResult:
    """D^alpha (a x + b)^mu on (-b/a, x): a^alpha Gamma(mu+1)/Gamma(mu-alpha+1) (a x + b)^(mu-alpha).

    Any real alpha (negative means integration).  When mu - alpha + 1 is a
    pole of Gamma the result is identically zero.
    """
    if not mu > -1:
        raise DomainError("power_rule needs mu > -1")
    if not scale_a > 0:
        raise DomainError("power_rule needs scale_a > 0")
    coef = scale_a**alpha * gamma(mu + 1.0) * reciprocal_gamma(mu - alpha + 1.0)
    lower = -shift_b / scale_a

    def ev(x):
        if coef == 0.0:
            return np.zeros_like(x)
        return coef * (scale_a * x + shift_b) ** (mu - alpha)

    return ClosedFormResult(
        RuleId.POWER, (lower, math.inf), ev, dict(mu=mu, alpha=alpha, scale_a=scale_a, shift_b=shift_b)
    )


def shifted_monomial(m: float, alpha: float, a: float, c0: float, engine: str = "rl") -> ClosedFormResult:
    """Derivative of (t - c0)^m on (a, x) with c0 <= a, via the regularised incomplete Beta."""
    if not m > 0:
        raise DomainError("shifted_monomial needs m > 0")
    alpha = _check_unit_order(alpha)
    _check_engine(engine)
    if c0 > a:
        raise DomainError("shifted_monomial needs c0 <= a")

    def z_of(x):
        z = (a - c0) / (x - c0)
        if np.any((z < 0) | (z >= 1)):
            raise DomainError("incomplete Beta argument (a - c0)/(x - c0) must lie in [0, 1)")
        return z

    if alpha == 1.0:

        def ev(x):
            return m * (x - c0) ** (m - 1.0)

    elif alpha == 0.0:

        def ev(x):
            return (x - c0) ** m

    elif engine == "rl":
        lead = gamma(m + 1.0) * reciprocal_gamma(m + 2.0 - alpha) * (m + 1.0 - alpha)
        rg = reciprocal_gamma(1.0 - alpha)

        def ev(x):
            z = z_of(x)
            u = x - c0
            tail = 1.0 - inc_beta_reg(z, m + 1.0, 1.0 - alpha)
            return u ** (m - alpha) * (lead * tail + z ** (m + 1.0) * (1.0 - z) ** (-alpha) * rg)

    else:
        lead = gamma(m + 1.0) * reciprocal_gamma(m + 1.0 - alpha)

        def ev(x):
            z = z_of(x)
            return lead * (1.0 - inc_beta_reg(z, m, 1.0 - alpha)) * (x - c0) ** (m - alpha)

    rule = RuleId.SHIFTED_MONOMIAL_RL if engine == "rl" else RuleId.SHIFTED_MONOMIAL_CAPUTO
    return ClosedFormResult(rule, (a, math.inf), ev, dict(m=m, alpha=alpha, a=a, c0=c0))


def constant_rule(K: float, alpha: float, a: float, engine: str = "rl") -> ClosedFormResult:
    """Derivative of the constant K on (a, x)."""
    alpha = _check_unit_order(alpha)
    _check_engine(engine)
    if engine == "caputo":
        value = K if alpha == 0.0 else 0.0
        return ClosedFormResult(
            RuleId.CONSTANT_CAPUTO, (a, math.inf), lambda x: np.full_like(x, value), dict(K=K, alpha=alpha, a=a)
        )
    coef = K * reciprocal_gamma(1.0 - alpha)
    return ClosedFormResult(
        RuleId.CONSTANT_RL, (a, math.inf), lambda x: coef * (x - a) ** (-alpha), dict(K=K, alpha=alpha, a=a)
    )


def identity_rule(alpha: float, a: float, engine: str = "rl") -> ClosedFormResult:
    """Derivative of f(t) = t on (a, x)."""
    alpha = _check_unit_order(alpha)
    _check_engine(engine)
    rg = reciprocal_gamma(2.0 - alpha)
    if engine == "rl":
        ev = lambda x: rg * (x - a) ** (-alpha) * (x - alpha * a)  # noqa: E731
        rule = RuleId.IDENTITY_RL
    elif alpha == 0.0:
        ev = lambda x: x * 1.0  # noqa: E731
        rule = RuleId.IDENTITY_CAPUTO
    else:
        ev = lambda x: rg * (x - a) ** (1.0 - alpha)  # noqa: E731
        rule = RuleId.IDENTITY_CAPUTO
    return ClosedFormResult(rule, (a, math.inf), ev, dict(alpha=alpha, a=a))


def trig_ml(kind: str, c: float, alpha: float, a: float) -> ClosedFormResult:
    """Derivatives of sin(c (t - a)) and cos(c (t - a)) on (a, x) via Mittag-Leffler functions.

    kind is one of ``sin_caputo``, ``sin_rl``, ``cos_caputo``.  The RL sine
    is the x-derivative of c u^(2-alpha) E_{2,3-alpha}(-c^2 u^2) taken term by
    term, which yields c u^(1-alpha) E_{2,2-alpha}(-c^2 u^2), the same
    function as the Caputo sine because sin vanishes at the endpoint.
    """
    if c == 0:
        raise DomainError("trig_ml needs c != 0")
    alpha = _check_unit_order(alpha)
    c = float(c)

    if kind in ("sin_caputo", "sin_rl"):

        def ev(x):
            u = x - a
            return c * u ** (1.0 - alpha) * ml((2.0, 2.0 - alpha), -(c * u) ** 2)

        rule = RuleId.SIN_ML_CAPUTO if kind == "sin_caputo" else RuleId.SIN_ML_RL
    elif kind == "cos_caputo":
        if alpha == 0.0:

            def ev(x):
                return np.cos(c * (x - a))

        else:

            def ev(x):
                u = x - a
                return -c * c * u ** (2.0 - alpha) * ml((2.0, 3.0 - alpha), -(c * u) ** 2)

        rule = RuleId.COS_ML_CAPUTO
    else:
        raise DomainError(f"unknown trig rule {kind!r}")
    # E_{2,beta}(-w) is only accepted for w <= 100
    hi = a + 10.0 / abs(c)
    return ClosedFormResult(rule, (a, hi), ev, dict(kind=kind, c=c, alpha=alpha, a=a))


def exp_weyl(p: float, alpha: float) -> ClosedFormResult:
    """Weyl operator on (x, inf) applied to exp(-p x): p^alpha exp(-p x).

    Negative alpha is the Weyl integral, p^(-|alpha|) exp(-p x).
    """
    if not p > 0:
        raise DomainError("exp_weyl needs p > 0")
    coef = p**alpha
    return ClosedFormResult(
        RuleId.EXP_WEYL, (-math.inf, math.inf), lambda x: coef * np.exp(-p * x), dict(p=p, alpha=alpha)
    )


def _psi_over_gamma(y: float) -> float:
    # psi(y)/Gamma(y) written to stay finite as y -> 0 (limit -1)
    return y * digamma(y + 1.0) * reciprocal_gamma(y + 1.0) - reciprocal_gamma(y + 1.0)


def log_rl(alpha: float, variant: str = "derivative") -> ClosedFormResult:
    """RL operator on (0, x) applied to log.

    ``variant="derivative"``: x^(-alpha)/Gamma(1-alpha) (log x - gamma - psi(1-alpha)), alpha in [0, 1].
    ``variant="integral"``: x^alpha/Gamma(alpha+1) (log x - psi(alpha+1) + psi(1)), alpha > 0.
    """
    if variant == "integral":
        if not alpha > 0:
            raise DomainError("log integral needs alpha > 0")
        rg = reciprocal_gamma(alpha + 1.0)
        shift = digamma(alpha + 1.0) + EULER_GAMMA

        def ev(x):
            return rg * x**alpha * (np.log(x) - shift)

    elif variant == "derivative":
        alpha = _check_unit_order(alpha)
        rg = reciprocal_gamma(1.0 - alpha)
        pg = _psi_over_gamma(1.0 - alpha)

        def ev(x):
            return x ** (-alpha) * (rg * (np.log(x) - EULER_GAMMA) - pg)

    else:
        raise DomainError("variant must be 'derivative' or 'integral'")
    return ClosedFormResult(RuleId.LOG_RL, (0.0, math.inf), ev, dict(alpha=alpha, variant=variant))


_POWER_TAGS = {"identity": 1.0, "sqrt": 0.5, "square": 2.0}


def lookup(tag: str, engine: str, alpha: float, a: float = 0.0, **params) -> ClosedFormResult:
    """Rule for a catalogue function tag (see :data:`fraccalc.differint.FUNCTIONS`)."""
    _check_engine(engine)
    if tag == "one":
        return constant_rule(params.get("K", 1.0), alpha, a, engine)
    if tag == "identity":
        return identity_rule(alpha, a, engine)
    if tag in _POWER_TAGS:
        if a < 0:
            raise DomainError(f"{tag} closed form needs a >= 0")
        return shifted_monomial(_POWER_TAGS[tag], alpha, a, 0.0, engine)
    if tag in ("sin", "cos"):
        if a != 0.0:
            raise DomainError(f"{tag} closed form is tabulated only for a = 0")
        if tag == "sin":
            return trig_ml("sin_rl" if engine == "rl" else "sin_caputo", params.get("c", 1.0), alpha, a)
        if engine == "rl":
            raise DomainError("no RL closed form for cos in the table")
        return trig_ml("cos_caputo", params.get("c", 1.0), alpha, a)
    if tag == "log":
        if a != 0.0 or engine != "rl":
            raise DomainError("log closed form is tabulated only for RL on (0, x)")
        return log_rl(alpha)
    raise DomainError(f"no closed form for {tag!r}")
