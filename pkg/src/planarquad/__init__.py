"""Planar quadrotor dynamics, linearization, cascaded PD control, and analysis."""

from .analysis import (ComparisonReport, StabilityVerdict, StepMetrics, compare_models,
                       dominant_mode_frequencies, linear_failure_time, stability_probe,
                       step_metrics, step_metrics_from_series)
from .control import (ControlDiagnostics, InputLimits, PdGains, Setpoint, clamp_policy,
                      control_law)
from .dynamics import (Input, MotorForces, QuadParams, State, StateDeriv, deriv_nonlinear,
                       equilibrium, mix, unmix)
from .linear_model import (Polynomial, PoleReport, RationalTF, StateSpace, TfMatrix,
                           UnsupportedTransferFunctionError, analytic_step_response,
                           deriv_linear, linearize, pole_report, tf_from_ss)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario, serialize_scenario
from .sim import (ClosedLoop, Constant, DivergenceError, InputSignal, SimConfig, Sinusoid, Step,
                  Trajectory, divergence_time, integrate, open_loop_step)

__version__ = "0.1.0"

__all__ = [
    "ClosedLoop", "ComparisonReport", "Constant", "ControlDiagnostics", "DivergenceError",
    "Input", "InputLimits", "InputSignal", "MotorForces", "PdGains", "PoleReport",
    "Polynomial", "QuadParams", "RationalTF", "Scenario", "ScenarioError", "Setpoint",
    "SimConfig", "Sinusoid", "StabilityVerdict", "State", "StateDeriv", "StateSpace",
    "Step", "StepMetrics", "TfMatrix", "Trajectory", "UnsupportedTransferFunctionError",
    "analytic_step_response", "clamp_policy", "compare_models", "control_law",
    "deriv_linear", "deriv_nonlinear", "divergence_time", "dominant_mode_frequencies",
    "equilibrium", "integrate", "linear_failure_time", "linearize", "load_scenario", "mix",
    "open_loop_step", "parse_scenario", "pole_report", "serialize_scenario",
    "stability_probe", "step_metrics", "step_metrics_from_series", "tf_from_ss", "unmix",
]
