"""Planar quadrotor rigid-body model.

A planar quadrotor is constrained to a vertical plane: two effective rotors,
three degrees of freedom (horizontal position x, altitude y, attitude phi).
The rotors produce thrusts f1 and f2 perpendicular to the frame; the control
inputs are their sum (net thrust u1) and scaled difference (net moment u2).

Equations of motion (Newton-Euler, no drag, no rotor spin dynamics):

    x''   = -u1 sin(phi) / m
    y''   = -g + u1 cos(phi) / m
    phi'' =  u2 / J

The attitude angle is deliberately not wrapped to (-pi, pi]: open-loop
studies rely on watching it grow past pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

STATE_FIELDS = ("x", "y", "phi", "vx", "vy", "omega")


@dataclass(frozen=True)
class QuadParams:
    """Physical constants. Defaults are the reference vehicle.

    m: mass [kg], g: gravitational acceleration [m/s^2],
    L: rotor-to-rotor span [m], J: moment of inertia [kg m^2].
    """

    m: float = 0.18
    g: float = 9.8
    L: float = 0.086
    J: float = 2.5e-4

    def __post_init__(self):
        if not (self.m > 0 and self.J > 0 and self.L > 0):
            raise ValueError(f"m, J, L must be positive (got m={self.m}, J={self.J}, L={self.L})")
        if not self.g >= 0:
            raise ValueError(f"g must be non-negative (got {self.g})")

    @property
    def hover_thrust(self) -> float:
        """Net thrust that exactly cancels gravity [N]."""
        return self.m * self.g


@dataclass(frozen=True)
class State:
    """Six-vector (x, y, phi, vx, vy, omega); this ordering is fixed everywhere."""

    x: float = 0.0
    y: float = 0.0
    phi: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.x, self.y, self.phi, self.vx, self.vy, self.omega)

    @classmethod
    def from_sequence(cls, seq) -> "State":
        x, y, phi, vx, vy, omega = (float(v) for v in seq)
        return cls(x, y, phi, vx, vy, omega)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.as_tuple())


@dataclass(frozen=True)
class Input:
    """Net thrust u1 [N] and net moment u2 [N m]. No sign restriction."""

    u1: float = 0.0
    u2: float = 0.0

    def as_tuple(self) -> tuple[float, float]:
        return (self.u1, self.u2)


@dataclass(frozen=True)
class MotorForces:
    """Individual rotor thrusts f1, f2 [N]."""

    f1: float = 0.0
    f2: float = 0.0


@dataclass(frozen=True)
class StateDeriv:
    """Time derivative of State: (vx, vy, omega, ax, ay, alpha)."""

    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0
    ax: float = 0.0
    ay: float = 0.0
    alpha: float = 0.0

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.vx, self.vy, self.omega, self.ax, self.ay, self.alpha)


def mix(forces: MotorForces, params: QuadParams) -> Input:
    """Combine rotor thrusts into net thrust and net moment.

    u1 = f1 + f2, u2 = (L/2)(f1 - f2).
    """
    return Input(
        u1=forces.f1 + forces.f2,
        u2=0.5 * params.L * (forces.f1 - forces.f2),
    )


def unmix(inp: Input, params: QuadParams) -> MotorForces:
    """Recover the rotor thrusts from net thrust and moment (inverse of mix)."""
    return MotorForces(
        f1=0.5 * inp.u1 + inp.u2 / params.L,
        f2=0.5 * inp.u1 - inp.u2 / params.L,
    )


def deriv_nonlinear(state: State, inp: Input, params: QuadParams) -> StateDeriv:
    """Full nonlinear state derivative at the given state and input."""
    return StateDeriv(
        vx=state.vx,
        vy=state.vy,
        omega=state.omega,
        ax=-inp.u1 * math.sin(state.phi) / params.m,
        ay=-params.g + inp.u1 * math.cos(state.phi) / params.m,
        alpha=inp.u2 / params.J,
    )


def equilibrium(params: QuadParams) -> tuple[State, Input]:
    """Hover equilibrium: origin state with u1 = m g, u2 = 0.

    Level hover (phi = 0) is the only attitude with zero net force; the origin
    is chosen among the (x, y)-family of hover points. The returned pair gives
    an exactly zero derivative under deriv_nonlinear.
    """
    return State(), Input(u1=params.hover_thrust, u2=0.0)
