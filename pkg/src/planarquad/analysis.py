"""Step-response metrics, plant comparisons, and stability probes.

Conventions, stated once because downstream comparisons depend on them:

  rise time       time from the 10% to the 90% crossing of the step, with
                  linear interpolation between samples; a 0 -> 100%
                  first-crossing variant is reported alongside
  overshoot       peak excess past the target, percent of step magnitude
  settling time   first time after which the response stays within a 2%
                  band of the step magnitude for the rest of the record
  steady state    terminal |error| as a fraction of the step

All crossing times are measured from the start of the record, so metrics are
invariant under shifting the time axis. Fields are None when the response
never reaches the relevant level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .control import PdGains, Setpoint, control_law
from .dynamics import Input, QuadParams, State
from .linear_model import linearize
from .sim import (ClosedLoop, DivergenceError, InputSignal, Plant, SimConfig, Trajectory,
                  divergence_time, integrate)

SETTLING_BAND_PCT = 2.0


@dataclass(frozen=True)
class StepMetrics:
    overshoot_pct: Optional[float]
    rise_time_s: Optional[float]
    rise_time_0_100_s: Optional[float]
    settling_time_s: Optional[float]
    steady_state_error: Optional[float]
    rise_convention: str = "10-90"
    settling_band_pct: float = SETTLING_BAND_PCT

    def to_json_dict(self) -> dict:
        return {
            "overshoot_pct": self.overshoot_pct,
            "rise_time_s": self.rise_time_s,
            "rise_time_0_100_s": self.rise_time_0_100_s,
            "settling_time_s": self.settling_time_s,
            "steady_state_error": self.steady_state_error,
            "rise_convention": self.rise_convention,
            "settling_band_pct": self.settling_band_pct,
        }


def _first_crossing(t: np.ndarray, series: np.ndarray, level: float) -> Optional[float]:
    """Time of the first upward crossing of `level`, linearly interpolated."""
    above = series >= level
    if not above.any():
        return None
    i = int(np.argmax(above))
    if i == 0:
        return float(t[0])
    frac = (level - series[i - 1]) / (series[i] - series[i - 1])
    return float(t[i - 1] + frac * (t[i] - t[i - 1]))


def step_metrics_from_series(t, series, target: float, *, initial: Optional[float] = None) -> StepMetrics:
    """Metrics for an arbitrary sampled response approaching `target`."""
    t = np.asarray(t, dtype=float)
    series = np.asarray(series, dtype=float)
    if len(t) != len(series) or len(t) == 0:
        raise ValueError("time grid and series must be equal-length and nonempty")
    y0 = float(series[0]) if initial is None else float(initial)
    step = target - y0
    if step == 0.0:
        raise ValueError("target equals the initial value; step metrics are undefined")
    rel = t - t[0]
    norm = (series - y0) / step  # 0 at start, 1 at target
    overshoot = max(0.0, (float(norm.max()) - 1.0) * 100.0)
    t10 = _first_crossing(rel, norm, 0.1)
    t90 = _first_crossing(rel, norm, 0.9)
    rise = t90 - t10 if (t10 is not None and t90 is not None) else None
    rise_full = _first_crossing(rel, norm, 1.0)
    band = SETTLING_BAND_PCT / 100.0
    inside = np.abs(norm - 1.0) <= band
    settle = None
    if inside[-1]:
        # last index after which the response never leaves the band
        out = np.nonzero(~inside)[0]
        first_ok = int(out[-1]) + 1 if out.size else 0
        settle = float(rel[first_ok])
    sse = float(abs(norm[-1] - 1.0))
    return StepMetrics(overshoot_pct=overshoot, rise_time_s=rise, rise_time_0_100_s=rise_full,
                       settling_time_s=settle, steady_state_error=sse)


def step_metrics(traj: Trajectory, channel: Literal["x", "y"], target: float) -> StepMetrics:
    """Step metrics for one position channel of a trajectory."""
    if channel not in ("x", "y"):
        raise ValueError(f"channel must be 'x' or 'y', got {channel!r}")
    return step_metrics_from_series(traj.t, traj.channel(channel), target)


def linear_failure_time(params: QuadParams, angle_threshold: float) -> float:
    """Time for the tilt to reach `angle_threshold` under a unit moment step.

    The moment equation phi'' = u2 / J is exactly linear, so phi(t) = t^2/(2J)
    and the crossing time is sqrt(2 J threshold); past ~pi the small-angle
    model of the horizontal motion has fully broken down.
    """
    if angle_threshold < 0:
        raise ValueError(f"angle threshold must be non-negative, got {angle_threshold}")
    return math.sqrt(2.0 * params.J * angle_threshold)


@dataclass(frozen=True)
class StabilityVerdict:
    converged: bool
    final_state_norm: float
    time_to_converge: Optional[float]
    diverged_at: Optional[float] = None

    def to_json_dict(self) -> dict:
        return {
            "converged": self.converged,
            "final_state_norm": self.final_state_norm,
            "time_to_converge_s": self.time_to_converge,
            "diverged_at_s": self.diverged_at,
        }


def _error_norm(states: np.ndarray, setpoint: Setpoint) -> np.ndarray:
    d = states.copy()
    d[:, 0] -= setpoint.x
    d[:, 1] -= setpoint.y
    return np.sqrt((d * d).sum(axis=1))


def stability_probe(
    plant: Plant,
    gains: PdGains,
    initial: State,
    setpoint: Setpoint,
    t_end: float = 5.0,
    tol: float = 0.01,
    *,
    params: QuadParams = QuadParams(),
    dt: float = 1e-4,
) -> StabilityVerdict:
    """Closed-loop run from `initial`; converged if the mixed-unit error norm
    (position error, tilt, velocities) enters the `tol` ball and stays there.
    """
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    config = SimConfig(plant=plant, dt=dt, t_end=t_end, initial_state=initial)
    signal = ClosedLoop(gains=gains, setpoint=setpoint)
    try:
        traj = integrate(config, signal, params)
    except DivergenceError as err:
        norm = _error_norm(err.trajectory.states, setpoint)
        return StabilityVerdict(converged=False, final_state_norm=float(norm[-1]),
                                time_to_converge=None, diverged_at=err.time)
    norm = _error_norm(traj.states, setpoint)
    inside = norm <= tol
    if not inside[-1]:
        return StabilityVerdict(converged=False, final_state_norm=float(norm[-1]),
                                time_to_converge=None)
    out = np.nonzero(~inside)[0]
    first_ok = int(out[-1]) + 1 if out.size else 0
    return StabilityVerdict(converged=True, final_state_norm=float(norm[-1]),
                            time_to_converge=float(traj.t[first_ok]))


@dataclass(frozen=True)
class ComparisonReport:
    """Side-by-side linear vs nonlinear run on an identical grid and signal."""

    max_deviation: dict
    divergence_channel: str
    divergence_threshold: float
    divergence_time_s: Optional[float]
    metrics_linear: dict
    metrics_nonlinear: dict
    trajectory_linear: Trajectory
    trajectory_nonlinear: Trajectory

    def to_json_dict(self) -> dict:
        flat = {
            "divergence_channel": self.divergence_channel,
            "divergence_threshold": self.divergence_threshold,
            "divergence_time_s": self.divergence_time_s,
        }
        for ch, dev in self.max_deviation.items():
            flat[f"max_deviation_{ch}"] = dev
        for plant, metrics in (("linear", self.metrics_linear),
                               ("nonlinear", self.metrics_nonlinear)):
            for ch, sm in metrics.items():
                for key, val in sm.to_json_dict().items():
                    flat[f"{plant}_{ch}_{key}"] = val
        return flat


def compare_models(
    signal: InputSignal,
    params: QuadParams,
    *,
    dt: float = 1e-4,
    t_end: float = 2.0,
    initial_state: State = State(),
    divergence_channel: str = "x",
    divergence_threshold: float = 0.1,
) -> ComparisonReport:
    """Run both plants under the same signal and bundle deviations + metrics.

    Step metrics are computed per output channel when the signal is a
    closed-loop one with a setpoint that actually moves that channel.
    """
    trajs = {}
    for plant in ("linear", "nonlinear"):
        config = SimConfig(plant=plant, dt=dt, t_end=t_end, initial_state=initial_state)
        trajs[plant] = integrate(config, signal, params)
    lin, non = trajs["linear"], trajs["nonlinear"]
    max_dev = {ch: float(np.abs(lin.channel(ch) - non.channel(ch)).max())
               for ch in ("x", "y", "phi", "vx", "vy", "omega")}
    div_t = divergence_time(lin, non, divergence_channel, divergence_threshold)
    metrics_lin: dict = {}
    metrics_non: dict = {}
    if isinstance(signal, ClosedLoop):
        sp = signal.setpoint
        for ch, target, start in (("x", sp.x, initial_state.x), ("y", sp.y, initial_state.y)):
            if target != start:
                metrics_lin[ch] = step_metrics(lin, ch, target)
                metrics_non[ch] = step_metrics(non, ch, target)
    return ComparisonReport(
        max_deviation=max_dev,
        divergence_channel=divergence_channel,
        divergence_threshold=divergence_threshold,
        divergence_time_s=div_t,
        metrics_linear=metrics_lin,
        metrics_nonlinear=metrics_non,
        trajectory_linear=lin,
        trajectory_nonlinear=non,
    )


def _closed_loop_matrix(params, gains, angle_cmd_sign, phi_rate_mode) -> np.ndarray:
    """A + B[:, :2] K for the linear plant under the PD law.

    The law is affine in the state, so its gradient K is recovered exactly
    from unit probes of control_law.
    """
    ss = linearize(params)
    sp = Setpoint()
    base, _ = control_law(State(), sp, gains, params,
                          angle_cmd_sign=angle_cmd_sign, phi_rate_mode=phi_rate_mode)
    K = np.zeros((2, 6))
    for i in range(6):
        probe = [0.0] * 6
        probe[i] = 1.0
        u, _ = control_law(State(*probe), sp, gains, params,
                           angle_cmd_sign=angle_cmd_sign, phi_rate_mode=phi_rate_mode)
        K[0, i] = u.u1 - base.u1
        K[1, i] = u.u2 - base.u2
    return ss.A + ss.B[:, :2] @ K


def closed_loop_poles(
    params: QuadParams,
    gains: PdGains,
    *,
    angle_cmd_sign: float = -1.0,
    phi_rate_mode: str = "model",
) -> np.ndarray:
    """Eigenvalues of the linear plant under the PD law."""
    return np.linalg.eigvals(_closed_loop_matrix(params, gains, angle_cmd_sign, phi_rate_mode))


def dominant_mode_frequencies(
    params: QuadParams,
    gains: PdGains,
    *,
    angle_cmd_sign: float = -1.0,
    phi_rate_mode: str = "model",
) -> dict:
    """Natural frequency and damping of the slowest mode per output axis.

    Modes are attributed to an axis by eigenvector participation: the closed
    loop decouples into an altitude block (y, vy) and a horizontal block
    (x, phi, vx, omega). Returns {"x": (wn, zeta), "y": (wn, zeta)}.
    """
    a_cl = _closed_loop_matrix(params, gains, angle_cmd_sign, phi_rate_mode)
    vals, vecs = np.linalg.eig(a_cl)
    y_rows = (1, 4)
    result = {}
    for axis in ("x", "y"):
        picks = []
        for lam, vec in zip(vals, vecs.T):
            w = np.abs(vec)
            y_part = w[list(y_rows)].sum() / w.sum()
            is_y = y_part > 0.5
            if (axis == "y") == is_y:
                picks.append(lam)
        if not picks:
            raise RuntimeError(f"no closed-loop modes attributed to axis {axis}")
        slowest = max(picks, key=lambda lam: lam.real)
        wn = abs(slowest)
        zeta = -slowest.real / wn if wn > 0 else float("nan")
        result[axis] = (float(wn), float(zeta))
    return result
