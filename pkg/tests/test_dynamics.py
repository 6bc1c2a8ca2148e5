import math

import pytest
from hypothesis import given, strategies as st

from planarquad.dynamics import (Input, MotorForces, QuadParams, State, deriv_nonlinear,
                                 equilibrium, mix, unmix)

PARAMS = QuadParams()

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


def test_default_params_are_reference_vehicle():
    assert (PARAMS.m, PARAMS.g, PARAMS.L, PARAMS.J) == (0.18, 9.8, 0.086, 2.5e-4)


@pytest.mark.parametrize("kwargs", [
    {"m": 0.0}, {"m": -1.0}, {"J": 0.0}, {"L": -0.1}, {"g": -9.8},
])
def test_param_validation(kwargs):
    with pytest.raises(ValueError):
        QuadParams(**kwargs)


def test_mix_symmetric_hover():
    u = mix(MotorForces(0.882, 0.882), PARAMS)
    assert u.u1 == pytest.approx(1.764, abs=1e-15)
    assert u.u2 == 0.0


def test_mix_single_rotor():
    u = mix(MotorForces(1.0, 0.0), PARAMS)
    assert u.u1 == 1.0
    assert u.u2 == pytest.approx(0.043, rel=1e-12)


def test_mix_zero():
    assert mix(MotorForces(0.0, 0.0), PARAMS) == Input(0.0, 0.0)


def test_unmix_symmetric():
    f = unmix(Input(1.764, 0.0), PARAMS)
    assert f.f1 == pytest.approx(0.882, rel=1e-12)
    assert f.f2 == pytest.approx(0.882, rel=1e-12)


def test_unmix_single_rotor():
    f = unmix(Input(1.0, 0.043), PARAMS)
    assert f.f1 == pytest.approx(1.0, rel=1e-12)
    assert f.f2 == pytest.approx(0.0, abs=1e-12)


def test_unmix_pure_moment():
    # solve u1 = f1 + f2, u2 = L/2 (f1 - f2) by hand for (0, 0.086), L = 0.086
    f = unmix(Input(0.0, 0.086), PARAMS)
    assert f.f1 == pytest.approx(1.0, rel=1e-12)
    assert f.f2 == pytest.approx(-1.0, rel=1e-12)


@given(u1=finite, u2=finite)
def test_mix_unmix_round_trip(u1, u2):
    # identity to 1e-12 relative to the pair's magnitude: the f1 +/- u2/L
    # cancellation makes per-component relative error meaningless when the
    # channels differ by many orders of magnitude
    u = Input(u1, u2)
    back = mix(unmix(u, PARAMS), PARAMS)
    tol = 1e-12 * max(1.0, abs(u1), abs(u2))
    assert abs(back.u1 - u.u1) <= tol
    assert abs(back.u2 - u.u2) <= tol


@given(f1=finite, f2=finite)
def test_unmix_mix_round_trip(f1, f2):
    f = MotorForces(f1, f2)
    back = unmix(mix(f, PARAMS), PARAMS)
    tol = 1e-12 * max(1.0, abs(f1), abs(f2))
    assert abs(back.f1 - f.f1) <= tol
    assert abs(back.f2 - f.f2) <= tol


def test_deriv_hover_is_exactly_zero():
    d = deriv_nonlinear(State(), Input(u1=PARAMS.m * PARAMS.g, u2=0.0), PARAMS)
    assert d.as_tuple() == (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def test_deriv_free_fall():
    d = deriv_nonlinear(State(), Input(0.0, 0.0), PARAMS)
    assert d.as_tuple() == (0.0, 0.0, 0.0, 0.0, -9.8, 0.0)


def test_deriv_sideways_at_quarter_turn():
    d = deriv_nonlinear(State(phi=math.pi / 2), Input(u1=1.764, u2=0.0), PARAMS)
    assert d.ax == pytest.approx(-9.8, rel=1e-12)
    assert d.ay == pytest.approx(-9.8, rel=1e-12)


def test_equilibrium_reference_vehicle():
    state, inp = equilibrium(PARAMS)
    assert state == State()
    assert inp.u1 == pytest.approx(1.764, abs=1e-15)
    assert inp.u2 == 0.0
    d = deriv_nonlinear(state, inp, PARAMS)
    assert d.as_tuple() == (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def test_equilibrium_unit_mass():
    _, inp = equilibrium(QuadParams(m=1.0))
    assert inp.u1 == pytest.approx(9.8)


def test_equilibrium_zero_gravity():
    params = QuadParams(g=0.0)
    state, inp = equilibrium(params)
    assert inp == Input(0.0, 0.0)
    assert deriv_nonlinear(state, inp, params).as_tuple() == (0.0,) * 6


@given(x=finite, y=finite, vx=finite, vy=finite, omega=finite)
def test_hover_acceleration_vanishes_anywhere(x, y, vx, vy, omega):
    # the (x, y) family of hover points: level attitude + hover thrust kills
    # every acceleration regardless of position and velocity
    state = State(x=x, y=y, phi=0.0, vx=vx, vy=vy, omega=omega)
    d = deriv_nonlinear(state, Input(u1=PARAMS.m * PARAMS.g, u2=0.0), PARAMS)
    assert (d.vx, d.vy, d.omega) == (vx, vy, omega)
    assert (d.ax, d.ay, d.alpha) == (0.0, 0.0, 0.0)


@given(phi=st.floats(-10, 10), u1=finite, x=finite, vx=finite)
def test_thrust_magnitude_is_tilt_invariant(phi, u1, x, vx):
    state = State(x=x, phi=phi, vx=vx)
    d = deriv_nonlinear(state, Input(u1=u1, u2=0.0), PARAMS)
    lhs = d.ax ** 2 + (d.ay + PARAMS.g) ** 2
    rhs = (u1 / PARAMS.m) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-9)


def test_zero_input_vertical_acceleration_is_exactly_minus_g():
    for phi in (0.0, 0.3, 2.0, -1.1):
        d = deriv_nonlinear(State(phi=phi), Input(0.0, 0.0), PARAMS)
        assert d.ay == -PARAMS.g
        assert d.alpha == 0.0
