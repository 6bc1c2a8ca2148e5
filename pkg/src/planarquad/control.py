"""Three-loop cascaded PD position controller.

Loops, outermost first:

  altitude:  u1      = m g + kp_y (y_des - y) + kd_y (0 - vy)
  position:  phi_des = sign * [kp_x (x_des - x) + kd_x (0 - vx)]
  attitude:  u2      = kp_phi (phi_des - phi) + kd_phi (phi_des_dot - omega)

The horizontal loop commands a desired tilt rather than a force: tilting by
phi redirects thrust, with x'' = -u1 sin(phi)/m, so a positive x error needs
a negative tilt; sign = -1 encodes that (sign = +1 is selectable to
demonstrate the resulting positive feedback).

phi_des_dot defaults to the model-based rate obtained by differentiating the
position loop with the small-angle estimate x'' ~= -g phi. This lead term is
load-bearing: with the default gains the attitude loop alone is slow
(poles near -6.2 and -25.8 rad/s), and dropping the rate term ("zero" mode)
leaves the x loop with a right-half-plane pole pair near +0.11 +/- 5.3j.

The law is stateless and affine in the state for fixed gains and setpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from .dynamics import Input, QuadParams, State

PhiRateMode = Literal["model", "zero"]


@dataclass(frozen=True)
class PdGains:
    """Gains for the three loops. Defaults are the tuned values.

    (kp_y, kd_y) drive thrust from altitude error, (kp_x, kd_x) turn
    horizontal error into a desired tilt, (kp_phi, kd_phi) drive the moment
    from tilt error.
    """

    kp_y: float = 7.0
    kd_y: float = 1.42
    kp_x: float = 2.5
    kd_x: float = 0.56
    kp_phi: float = 0.04
    kd_phi: float = 0.008

    @classmethod
    def swapped_mapping(cls) -> "PdGains":
        """Variant with the position and attitude gain pairs exchanged.

        Kept selectable for comparison studies. With the stock values the
        horizontal loop collapses to wn = 0.63 rad/s at zeta = 0.06 (about
        82% overshoot, minutes to settle) and turns outright unstable under
        the "zero" rate mode, which is why it is not the default.
        """
        return cls(kp_x=0.04, kd_x=0.008, kp_phi=2.5, kd_phi=0.56)


@dataclass(frozen=True)
class Setpoint:
    """Target position (x_des, y_des) [m]; reference velocities are zero."""

    x: float = 0.0
    y: float = 0.0


@dataclass(frozen=True)
class InputLimits:
    """Optional channel-wise saturation bounds; None leaves a side open."""

    u1_min: Optional[float] = None
    u1_max: Optional[float] = None
    u2_min: Optional[float] = None
    u2_max: Optional[float] = None

    def __post_init__(self):
        for lo, hi, name in ((self.u1_min, self.u1_max, "u1"), (self.u2_min, self.u2_max, "u2")):
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"{name} limits are not well-ordered: [{lo}, {hi}]")


@dataclass(frozen=True)
class ControlDiagnostics:
    """Per-evaluation internals: inner-loop reference, its rate, raw command."""

    phi_des: float
    phi_des_dot: float
    u_raw: Input


def control_law(
    state: State,
    setpoint: Setpoint,
    gains: PdGains,
    params: QuadParams,
    *,
    angle_cmd_sign: float = -1.0,
    phi_rate_mode: PhiRateMode = "model",
) -> tuple[Input, ControlDiagnostics]:
    """Evaluate the cascaded PD law at one state. Pure arithmetic, no memory."""
    u1 = (params.m * params.g
          + gains.kp_y * (setpoint.y - state.y)
          + gains.kd_y * (0.0 - state.vy))
    phi_des = angle_cmd_sign * (gains.kp_x * (setpoint.x - state.x)
                                + gains.kd_x * (0.0 - state.vx))
    if phi_rate_mode == "model":
        ax_est = -params.g * state.phi
        phi_des_dot = angle_cmd_sign * (gains.kp_x * (0.0 - state.vx)
                                        + gains.kd_x * (0.0 - ax_est))
    elif phi_rate_mode == "zero":
        phi_des_dot = 0.0
    else:
        raise ValueError(f"unknown phi_rate_mode: {phi_rate_mode!r}")
    u2 = (gains.kp_phi * (phi_des - state.phi)
          + gains.kd_phi * (phi_des_dot - state.omega))
    u = Input(u1=u1, u2=u2)
    return u, ControlDiagnostics(phi_des=phi_des, phi_des_dot=phi_des_dot, u_raw=u)


def clamp_policy(inp: Input, limits: Optional[InputLimits] = None) -> Input:
    """Channel-wise clamp; identity when no limits are given."""
    if limits is None:
        return inp
    u1, u2 = inp.u1, inp.u2
    if limits.u1_min is not None and u1 < limits.u1_min:
        u1 = limits.u1_min
    if limits.u1_max is not None and u1 > limits.u1_max:
        u1 = limits.u1_max
    if limits.u2_min is not None and u2 < limits.u2_min:
        u2 = limits.u2_min
    if limits.u2_max is not None and u2 > limits.u2_max:
        u2 = limits.u2_max
    return Input(u1=u1, u2=u2)
