import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraccalc.differint import RealFunction
from fraccalc.errors import DomainError
from fraccalc.physics import (
    FallingBodyParams,
    TautochroneSpec,
    abel_forward,
    arclength_general,
    arclength_slope,
    classical_velocity,
    falling_acceleration,
    falling_residual,
    falling_velocity,
    tautochrone_arclength,
)

FIGURE_V0 = (0.0, 10.0, 20.0, 30.0, 39.24, 50.0, 60.0)


def test_params_validation():
    with pytest.raises(DomainError):
        FallingBodyParams(m_over_b=0)
    with pytest.raises(DomainError):
        FallingBodyParams(alpha=1.2)
    with pytest.raises(DomainError):
        FallingBodyParams(alpha=0)
    with pytest.raises(DomainError):
        TautochroneSpec(T=-1)
    assert FallingBodyParams().terminal_velocity == pytest.approx(39.24)


def test_terminal_velocity_reached():
    assert falling_velocity(FallingBodyParams(), 100.0) == pytest.approx(39.24, rel=1e-9)


@pytest.mark.parametrize("v0", FIGURE_V0)
def test_classical_limit_over_figure_range(v0):
    p = FallingBodyParams(v0=v0)
    t = np.linspace(0.0, 30.0, 601)
    assert np.max(np.abs(falling_velocity(p, t) - classical_velocity(p, t))) < 1e-8


@given(st.floats(0.05, 1.0), st.floats(-20, 80), st.floats(0.5, 10))
def test_initial_value(alpha, v0, mb):
    assert falling_velocity(FallingBodyParams(mb, 9.81, v0, alpha), 0.0) == pytest.approx(v0, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9, 1.0])
@pytest.mark.parametrize("v0", FIGURE_V0)
def test_monotone_approach_to_terminal_velocity(alpha, v0):
    p = FallingBodyParams(v0=v0, alpha=alpha)
    v = falling_velocity(p, np.linspace(0.0, 30.0, 301))
    d = np.diff(v)
    if v0 < p.terminal_velocity:
        assert np.all(d >= -1e-12)
    elif v0 > p.terminal_velocity:
        assert np.all(d <= 1e-12)


def test_acceleration_is_derivative():
    p = FallingBodyParams(v0=5.0, alpha=0.6)
    h = 1e-6
    for t in (0.3, 2.0, 11.0):
        fd = (falling_velocity(p, t + h) - falling_velocity(p, t - h)) / (2 * h)
        assert falling_acceleration(p, t) == pytest.approx(fd, rel=1e-6)


def test_residual_half_order():
    p = FallingBodyParams(alpha=0.5)
    for t in (0.5, 2.0, 10.0):
        assert abs(falling_residual(p, t)) < 1e-2 * p.mass * p.g


def test_residual_near_equilibrium():
    p = FallingBodyParams(v0=39.24, alpha=0.9)
    assert abs(falling_residual(p, 1.0)) < 1e-2 * p.mass * p.g


def test_residual_with_mass_scaling():
    p = FallingBodyParams(alpha=0.7, v0=12.0, mass=3.0)
    assert abs(falling_residual(p, 4.0)) < 1e-2 * p.mass * p.g


def test_residual_rejects_classical_order():
    with pytest.raises(DomainError):
        falling_residual(FallingBodyParams(alpha=1.0), 1.0)
    with pytest.raises(DomainError):
        falling_residual(FallingBodyParams(alpha=0.5), 0.0)


def test_arclength_examples():
    spec = TautochroneSpec()
    assert tautochrone_arclength(spec, 1.0) == pytest.approx(2 * math.sqrt(19.62) / math.pi, rel=1e-14)
    assert tautochrone_arclength(spec, 1e-12) < 1e-5
    for y in (0.25, 1.0, 4.0):
        q = tautochrone_arclength(spec, y, method="quadrature")
        assert q == pytest.approx(tautochrone_arclength(spec, y), rel=1e-4)


def test_arclength_domain():
    spec = TautochroneSpec(y_max=2.0)
    with pytest.raises(DomainError):
        tautochrone_arclength(spec, 0.0)
    with pytest.raises(DomainError):
        tautochrone_arclength(spec, 3.0)
    with pytest.raises(DomainError):
        tautochrone_arclength(spec, 1.0, method="spline")


def test_general_n_reduces_to_half_order_case():
    spec = TautochroneSpec()
    assert arclength_general(spec, 1.7, 0.5) == pytest.approx(tautochrone_arclength(spec, 1.7), rel=1e-14)


def test_abel_examples():
    zero = RealFunction(lambda y: np.zeros_like(np.asarray(y, dtype=float)))
    assert abel_forward(zero, 1.0) == 0.0
    one = RealFunction(lambda y: np.ones_like(np.asarray(y, dtype=float)))
    assert abel_forward(one, 1.0) == pytest.approx(2.0, rel=1e-12)


def test_tautochrone_round_trip_constant_descent_time():
    spec = TautochroneSpec()
    slope = arclength_slope(spec)
    values = [abel_forward(slope, y0) for y0 in (0.5, 1.0, 2.0, 3.0, 4.0)]
    for v in values:
        assert v == pytest.approx(spec.phi, rel=1e-3)
    assert (max(values) - min(values)) / spec.phi < 1e-3


@pytest.mark.parametrize("n", [0.25, 0.5, 0.75])
def test_general_n_round_trip(n):
    spec = TautochroneSpec(T=2.0)
    slope = arclength_slope(spec, n)
    for y0 in (0.5, 2.0):
        assert abel_forward(slope, y0, n) == pytest.approx(spec.phi, rel=1e-3)
