"""Fixed-step simulation of the linear or nonlinear plant.

Integration is classical 4th-order Runge-Kutta with a uniform step. On the
linear plant this is not an approximation: holding the input constant over a
step makes the augmented system matrix nilpotent, so each RK4 step equals the
exact matrix exponential and trajectories match the closed-form integrator
chain responses to rounding error at any step size.

Inputs are either scripted signals (step, sinusoid, constant) or the cascaded
PD feedback law evaluated once per step at the step's start state and held
across the stages (zero-order hold). The gravity channel of the linear plant
is always driven with the constant g, mirroring the (u1, u2, g) input vector
of the linearized model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Union

import numpy as np

from .control import InputLimits, PdGains, Setpoint, clamp_policy, control_law
from .dynamics import Input, QuadParams, State
from .linear_model import linearize

Plant = Literal["linear", "nonlinear"]

CHANNELS = {"x": 0, "y": 1, "phi": 2, "vx": 3, "vy": 4, "omega": 5}

STATE_NORM_CEILING = 1e9
MAX_STEPS = 10 ** 8


@dataclass(frozen=True)
class Step:
    """Constant input from t = 0: u1 = u1_amp (+ m g if hover_offset), u2 = u2_amp."""

    u1_amp: float = 0.0
    u2_amp: float = 0.0
    hover_offset: bool = False


@dataclass(frozen=True)
class Sinusoid:
    """offset + amplitude sin(2 pi f t) on one channel; the other is zero."""

    channel: Literal["u1", "u2"] = "u1"
    amplitude: float = 1.0
    frequency: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError(f"frequency must be positive, got {self.frequency}")
        if self.channel not in ("u1", "u2"):
            raise ValueError(f"channel must be 'u1' or 'u2', got {self.channel!r}")


@dataclass(frozen=True)
class Constant:
    """Fixed (u1, u2) for the whole run."""

    u1: float = 0.0
    u2: float = 0.0


@dataclass(frozen=True)
class ClosedLoop:
    """Cascaded PD feedback toward a setpoint, evaluated once per step."""

    gains: PdGains = field(default_factory=PdGains)
    setpoint: Setpoint = field(default_factory=Setpoint)
    angle_cmd_sign: float = -1.0
    phi_rate_mode: str = "model"
    limits: Optional[InputLimits] = None


InputSignal = Union[Step, Sinusoid, Constant, ClosedLoop]


@dataclass(frozen=True)
class SimConfig:
    plant: Plant = "nonlinear"
    dt: float = 1e-4
    t_end: float = 2.0
    initial_state: State = field(default_factory=State)

    def __post_init__(self):
        if self.plant not in ("linear", "nonlinear"):
            raise ValueError(f"plant must be 'linear' or 'nonlinear', got {self.plant!r}")
        if not (0 < self.dt <= self.t_end):
            raise ValueError(f"need 0 < dt <= t_end, got dt={self.dt}, t_end={self.t_end}")
        if self.t_end / self.dt > MAX_STEPS:
            raise ValueError(f"t_end/dt = {self.t_end / self.dt:.3g} exceeds {MAX_STEPS:.0e} steps")

    @property
    def n_steps(self) -> int:
        # guard against 19999.999... ratios from binary rounding
        return max(1, int(math.ceil(self.t_end / self.dt - 1e-9)))


@dataclass
class Trajectory:
    """Recorded run: uniform time grid, states, applied inputs, tilt references.

    Arrays are write-protected after construction; states has one row per
    sample in the fixed (x, y, phi, vx, vy, omega) order and phi_des is zero
    for open-loop signals.
    """

    t: np.ndarray
    states: np.ndarray
    inputs: np.ndarray
    phi_des: np.ndarray

    def __post_init__(self):
        n = len(self.t)
        if not (self.states.shape == (n, 6) and self.inputs.shape == (n, 2)
                and self.phi_des.shape == (n,)):
            raise ValueError("trajectory arrays have inconsistent lengths")
        for arr in (self.t, self.states, self.inputs, self.phi_des):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0

    def channel(self, name: str) -> np.ndarray:
        if name in CHANNELS:
            return self.states[:, CHANNELS[name]]
        if name == "u1":
            return self.inputs[:, 0]
        if name == "u2":
            return self.inputs[:, 1]
        if name == "phi_des":
            return self.phi_des
        raise KeyError(f"unknown channel {name!r}")

    @property
    def x(self): return self.states[:, 0]
    @property
    def y(self): return self.states[:, 1]
    @property
    def phi(self): return self.states[:, 2]
    @property
    def vx(self): return self.states[:, 3]
    @property
    def vy(self): return self.states[:, 4]
    @property
    def omega(self): return self.states[:, 5]
    @property
    def u1(self): return self.inputs[:, 0]
    @property
    def u2(self): return self.inputs[:, 1]

    def state_at(self, i: int) -> State:
        return State.from_sequence(self.states[i])

    def final_state(self) -> State:
        return self.state_at(len(self) - 1)


class DivergenceError(RuntimeError):
    """State left the finite / norm-bounded region; carries the partial run."""

    def __init__(self, message: str, trajectory: Trajectory, time: float):
        super().__init__(message)
        self.trajectory = trajectory
        self.time = time


def _input_fn(signal: InputSignal, params: QuadParams):
    """Returns u(t, state) -> (u1, u2, phi_des)."""
    if isinstance(signal, Step):
        base = params.hover_thrust if signal.hover_offset else 0.0
        u1 = base + signal.u1_amp
        u2 = signal.u2_amp
        return lambda t, s: (u1, u2, 0.0)
    if isinstance(signal, Constant):
        return lambda t, s: (signal.u1, signal.u2, 0.0)
    if isinstance(signal, Sinusoid):
        two_pi_f = 2.0 * math.pi * signal.frequency
        amp, off = signal.amplitude, signal.offset
        if signal.channel == "u1":
            return lambda t, s: (off + amp * math.sin(two_pi_f * t), 0.0, 0.0)
        return lambda t, s: (0.0, off + amp * math.sin(two_pi_f * t), 0.0)
    if isinstance(signal, ClosedLoop):
        gains, sp = signal.gains, signal.setpoint
        sign, mode, limits = signal.angle_cmd_sign, signal.phi_rate_mode, signal.limits

        def feedback(t, s):
            u_raw, diag = control_law(State(*s), sp, gains, params,
                                      angle_cmd_sign=sign, phi_rate_mode=mode)
            u = clamp_policy(u_raw, limits)
            return u.u1, u.u2, diag.phi_des

        return feedback
    raise TypeError(f"unknown input signal {signal!r}")


def integrate(config: SimConfig, signal: InputSignal, params: QuadParams) -> Trajectory:
    """Run the configured plant under the signal; raises DivergenceError on blow-up."""
    if not config.initial_state.is_finite():
        raise ValueError("initial state must be finite")
    n = config.n_steps
    h = config.dt
    t_grid = np.arange(n + 1) * h
    states = np.empty((n + 1, 6))
    inputs = np.empty((n + 1, 2))
    phi_des = np.empty(n + 1)

    m, g, J = params.m, params.g, params.J
    if config.plant == "nonlinear":
        sin, cos = math.sin, math.cos

        def f(x, y, phi, vx, vy, om, u1, u2):
            return vx, vy, om, -u1 * sin(phi) / m, -g + u1 * cos(phi) / m, u2 / J
    else:
        ss = linearize(params)
        a32 = ss.A[3, 2]
        b40, b42, b51 = ss.B[4, 0], ss.B[4, 2], ss.B[5, 1]
        grav_in = b42 * g  # constant third input channel

        def f(x, y, phi, vx, vy, om, u1, u2):
            return vx, vy, om, a32 * phi, b40 * u1 + grav_in, b51 * u2

    u_of = _input_fn(signal, params)
    x, y, phi, vx, vy, om = config.initial_state.as_tuple()
    states[0] = (x, y, phi, vx, vy, om)

    for i in range(n):
        u1, u2, pdes = u_of(t_grid[i], (x, y, phi, vx, vy, om))
        inputs[i] = (u1, u2)
        phi_des[i] = pdes
        a1 = f(x, y, phi, vx, vy, om, u1, u2)
        a2 = f(x + 0.5 * h * a1[0], y + 0.5 * h * a1[1], phi + 0.5 * h * a1[2],
               vx + 0.5 * h * a1[3], vy + 0.5 * h * a1[4], om + 0.5 * h * a1[5], u1, u2)
        a3 = f(x + 0.5 * h * a2[0], y + 0.5 * h * a2[1], phi + 0.5 * h * a2[2],
               vx + 0.5 * h * a2[3], vy + 0.5 * h * a2[4], om + 0.5 * h * a2[5], u1, u2)
        a4 = f(x + h * a3[0], y + h * a3[1], phi + h * a3[2],
               vx + h * a3[3], vy + h * a3[4], om + h * a3[5], u1, u2)
        x += h / 6.0 * (a1[0] + 2.0 * a2[0] + 2.0 * a3[0] + a4[0])
        y += h / 6.0 * (a1[1] + 2.0 * a2[1] + 2.0 * a3[1] + a4[1])
        phi += h / 6.0 * (a1[2] + 2.0 * a2[2] + 2.0 * a3[2] + a4[2])
        vx += h / 6.0 * (a1[3] + 2.0 * a2[3] + 2.0 * a3[3] + a4[3])
        vy += h / 6.0 * (a1[4] + 2.0 * a2[4] + 2.0 * a3[4] + a4[4])
        om += h / 6.0 * (a1[5] + 2.0 * a2[5] + 2.0 * a3[5] + a4[5])
        sq = x * x + y * y + phi * phi + vx * vx + vy * vy + om * om
        if not math.isfinite(sq) or sq > STATE_NORM_CEILING ** 2:
            partial = Trajectory(t=t_grid[:i + 1].copy(), states=states[:i + 1].copy(),
                                 inputs=inputs[:i + 1].copy(), phi_des=phi_des[:i + 1].copy())
            raise DivergenceError(
                f"state norm exceeded {STATE_NORM_CEILING:.0e} at t = {t_grid[i + 1]:.6g} s",
                trajectory=partial, time=float(t_grid[i + 1]))
        states[i + 1] = (x, y, phi, vx, vy, om)

    u1, u2, pdes = u_of(t_grid[n], (x, y, phi, vx, vy, om))
    inputs[n] = (u1, u2)
    phi_des[n] = pdes
    return Trajectory(t=t_grid, states=states, inputs=inputs, phi_des=phi_des)


def open_loop_step(
    plant: Plant,
    channel: Literal["u1", "u2"],
    params: QuadParams,
    *,
    dt: float = 1e-4,
    t_end: float = 2.0,
    hover_offset: Optional[bool] = None,
    initial_state: State = State(),
) -> Trajectory:
    """Unit step on one input channel at t = 0, gravity always acting.

    For the u2 channel the thrust defaults to hover (u1 = m g) so the
    horizontal dynamics of the nonlinear plant are excited; pass
    hover_offset=False for the bare (0, 1) input instead.
    """
    if channel not in ("u1", "u2"):
        raise ValueError(f"channel must be 'u1' or 'u2', got {channel!r}")
    if hover_offset is None:
        hover_offset = channel == "u2"
    signal = Step(u1_amp=1.0 if channel == "u1" else 0.0,
                  u2_amp=1.0 if channel == "u2" else 0.0,
                  hover_offset=hover_offset)
    config = SimConfig(plant=plant, dt=dt, t_end=t_end, initial_state=initial_state)
    return integrate(config, signal, params)


def divergence_time(traj_a: Trajectory, traj_b: Trajectory, channel: str,
                    threshold: float) -> Optional[float]:
    """First time the channel difference exceeds the threshold, or None.

    Both trajectories must share the time grid exactly.
    """
    if len(traj_a) != len(traj_b) or not np.array_equal(traj_a.t, traj_b.t):
        raise ValueError("trajectories are on different time grids")
    diff = np.abs(traj_a.channel(channel) - traj_b.channel(channel))
    idx = np.nonzero(diff > threshold)[0]
    if idx.size == 0:
        return None
    return float(traj_a.t[idx[0]])
