"""Command-line front end.

Subcommands:

  simulate     run a scenario file, write CSV / JSON / PNG artifacts
  tf           print the open-loop transfer-function matrix
  equilibrium  print the hover state and input
  step         canonical step studies (open-loop channels and closed-loop axes)
  compare      linear-vs-nonlinear comparison for a scenario's signal
  probe        closed-loop stability sweep over initial tilt angles

Exit codes: 0 success, 1 configuration or scenario error, 2 simulation
divergence (an expected physical outcome for open-loop runs, reported with
the partial trajectory rather than treated as a crash).

Trajectory CSV schema, one row per sample, 15 significant digits:

    t,x,y,phi,vx,vy,omega,u1,u2,phi_des

The scenario directory for bare scenario names defaults to ./scenarios and
can be overridden with the PLANARQUAD_SCENARIO_DIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, plots
from .control import PdGains, Setpoint
from .dynamics import QuadParams, State, equilibrium
from .linear_model import format_tf_matrix, format_tf_symbolic, linearize, tf_from_ss
from .scenario import SCENARIO_SUFFIX, Scenario, ScenarioError, load_scenario
from .sim import ClosedLoop, DivergenceError, SimConfig, Trajectory, integrate, open_loop_step

CSV_HEADER = "t,x,y,phi,vx,vy,omega,u1,u2,phi_des"
_FMT = "%.15g"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def trajectory_to_csv(traj: Trajectory) -> str:
    lines = [CSV_HEADER]
    for i in range(len(traj)):
        row = (traj.t[i], *traj.states[i], *traj.inputs[i], traj.phi_des[i])
        lines.append(",".join(_FMT % v for v in row))
    return "\n".join(lines) + "\n"


def write_csv(traj: Trajectory, path: Path) -> Path:
    path.write_text(trajectory_to_csv(traj))
    return path


def _write_json(payload: dict, path: Path) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _out_dir(args) -> Path:
    out = Path(getattr(args, "out", None) or "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _resolve_scenario(ref: str) -> Path:
    path = Path(ref)
    if path.exists():
        return path
    if not path.suffix:
        base = Path(os.environ.get("PLANARQUAD_SCENARIO_DIR", "scenarios"))
        candidate = base / (ref + SCENARIO_SUFFIX)
        if candidate.exists():
            return candidate
    raise ScenarioError(f"scenario file not found: {ref}")


def _report_divergence(err: DivergenceError, out: Path, name: str, no_plot: bool) -> int:
    csv_path = write_csv(err.trajectory, out / f"{name}_partial.csv")
    print(f"divergence at t = {err.time:.6g} s: {err}", file=sys.stderr)
    print(f"wrote partial trajectory: {csv_path}")
    if not no_plot:
        fig = plots.save_trajectory_figure(err.trajectory, out / f"{name}_partial.png",
                                           title=f"{name} (diverged at {err.time:.4g} s)")
        print(f"wrote figure: {fig}")
    return EXIT_DIVERGED


def _metrics_payload(traj: Trajectory, signal: ClosedLoop, initial: State) -> dict:
    payload = {}
    for ch, target, start in (("x", signal.setpoint.x, initial.x),
                              ("y", signal.setpoint.y, initial.y)):
        if target != start:
            sm = analysis.step_metrics(traj, ch, target)
            for key, val in sm.to_json_dict().items():
                payload[f"{ch}_{key}"] = val
    return payload


def cmd_simulate(args) -> int:
    sc = load_scenario(_resolve_scenario(args.scenario))
    out = _out_dir(args)
    config = sc.sim_config(dt=args.dt, t_end=args.t_end)
    try:
        traj = integrate(config, sc.signal, sc.params)
    except DivergenceError as err:
        return _report_divergence(err, out, sc.name, args.no_plot)
    written = []
    if "csv" in sc.outputs:
        written.append(write_csv(traj, out / f"{sc.name}.csv"))
    if "metrics" in sc.outputs:
        if not isinstance(sc.signal, ClosedLoop):
            raise ScenarioError("metrics output requires a closed_loop signal")
        payload = _metrics_payload(traj, sc.signal, sc.initial_state)
        if not payload:
            raise ScenarioError("metrics output needs a setpoint that moves x or y")
        written.append(_write_json(payload, out / f"{sc.name}_metrics.json"))
    if "comparison" in sc.outputs:
        report = analysis.compare_models(
            sc.signal, sc.params, dt=config.dt, t_end=config.t_end,
            initial_state=sc.initial_state, divergence_channel=sc.compare_channel,
            divergence_threshold=sc.compare_threshold)
        written.append(_write_json(report.to_json_dict(), out / f"{sc.name}_comparison.json"))
        if not args.no_plot:
            written.append(plots.save_comparison_figure(
                report, out / f"{sc.name}_comparison.png", title=sc.name))
    if not args.no_plot:
        written.append(plots.save_trajectory_figure(traj, out / f"{sc.name}.png", title=sc.name))
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_tf(args) -> int:
    if args.symbolic:
        print(format_tf_symbolic())
    else:
        print(format_tf_matrix(tf_from_ss(linearize(QuadParams()))))
    return EXIT_OK


def cmd_equilibrium(args) -> int:
    params = QuadParams()
    state, inp = equilibrium(params)
    print(f"state = origin {state.as_tuple()}")
    print(f"u1 = {inp.u1:.6g} N, u2 = {inp.u2:.6g} N m")
    return EXIT_OK


def cmd_step(args) -> int:
    params = QuadParams()
    out = _out_dir(args)
    name = f"step_{args.plant}_{args.channel.replace('-', '_')}"
    if args.channel in ("u1", "u2"):
        dt = args.dt or 1e-4
        t_end = args.t_end or 2.0
        try:
            traj = open_loop_step(args.plant, args.channel, params, dt=dt, t_end=t_end)
        except DivergenceError as err:
            return _report_divergence(err, out, name, args.no_plot)
        payload = {
            "final_x_m": float(traj.x[-1]),
            "final_y_m": float(traj.y[-1]),
            "final_phi_rad": float(traj.phi[-1]),
            "t_end_s": float(traj.t[-1]),
        }
    else:
        axis = args.channel.split("-")[1]
        setpoint = Setpoint(x=1.0, y=0.0) if axis == "x" else Setpoint(x=0.0, y=1.0)
        signal = ClosedLoop(gains=PdGains(), setpoint=setpoint)
        config = SimConfig(plant=args.plant, dt=args.dt or 1e-4, t_end=args.t_end or 5.0)
        try:
            traj = integrate(config, signal, params)
        except DivergenceError as err:
            return _report_divergence(err, out, name, args.no_plot)
        payload = _metrics_payload(traj, signal, config.initial_state)
    print(json.dumps(payload, indent=2, sort_keys=True))
    write_csv(traj, out / f"{name}.csv")
    _write_json(payload, out / f"{name}_metrics.json")
    if not args.no_plot:
        plots.save_trajectory_figure(traj, out / f"{name}.png", title=name)
    print(f"wrote {out / (name + '.csv')}")
    return EXIT_OK


def cmd_compare(args) -> int:
    sc = load_scenario(_resolve_scenario(args.scenario))
    out = _out_dir(args)
    try:
        report = analysis.compare_models(
            sc.signal, sc.params, dt=args.dt or sc.dt, t_end=args.t_end or sc.t_end,
            initial_state=sc.initial_state, divergence_channel=sc.compare_channel,
            divergence_threshold=sc.compare_threshold)
    except DivergenceError as err:
        return _report_divergence(err, out, sc.name, args.no_plot)
    payload = report.to_json_dict()
    print(json.dumps(payload, indent=2, sort_keys=True))
    _write_json(payload, out / f"{sc.name}_comparison.json")
    write_csv(report.trajectory_linear, out / f"{sc.name}_linear.csv")
    write_csv(report.trajectory_nonlinear, out / f"{sc.name}_nonlinear.csv")
    if not args.no_plot:
        plots.save_comparison_figure(report, out / f"{sc.name}_comparison.png", title=sc.name)
    print(f"wrote {out / (sc.name + '_comparison.json')}")
    return EXIT_OK


def cmd_probe(args) -> int:
    try:
        angles = [float(tok) for tok in args.phi0.replace(",", " ").split()]
    except ValueError as err:
        raise ScenarioError(f"bad --phi0 list {args.phi0!r}: {err}") from err
    if not angles:
        raise ScenarioError("--phi0 needs at least one angle")
    params = QuadParams()
    gains = PdGains()
    out = _out_dir(args)
    verdicts = {}
    traces = []
    for phi0 in angles:
        initial = State(phi=phi0)
        verdict = analysis.stability_probe(args.plant, gains, initial, Setpoint(),
                                           t_end=args.t_end or 5.0, tol=args.tol, params=params)
        verdicts[f"phi0_{phi0:g}"] = verdict.to_json_dict()
        config = SimConfig(plant=args.plant, dt=1e-4, t_end=args.t_end or 5.0,
                           initial_state=initial)
        try:
            traj = integrate(config, ClosedLoop(gains=gains, setpoint=Setpoint()), params)
        except DivergenceError as err:
            traj = err.trajectory
        traces.append((phi0, traj))
        write_csv(traj, out / f"probe_phi0_{phi0:g}.csv")
    print(json.dumps(verdicts, indent=2, sort_keys=True))
    _write_json(verdicts, out / "probe_verdicts.json")
    if not args.no_plot:
        plots.save_probe_figure(traces, out / "probe.png", title=f"stability probe ({args.plant})")
    if not all(v["converged"] for v in verdicts.values()):
        return EXIT_DIVERGED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="planarquad",
                     description="Planar quadrotor simulation and analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=False):
        p.add_argument("--out", default=None, help="output directory (default: ./out)")
        p.add_argument("--dt", type=float, default=None, help="integration step override [s]")
        p.add_argument("--t-end", type=float, default=None, help="horizon override [s]")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
        p.add_argument("--seedless", action="store_true",
                       help="reserved; runs are deterministic, no randomness exists")
        if scenario:
            p.add_argument("--scenario", required=True,
                           help="scenario file path or bare name under the scenario dir")

    p_sim = sub.add_parser("simulate", help="run a scenario file")
    common(p_sim, scenario=True)
    p_sim.set_defaults(func=cmd_simulate)

    p_tf = sub.add_parser("tf", help="print the open-loop transfer-function matrix")
    p_tf.add_argument("--symbolic", action="store_true",
                      help="parametric entries instead of numeric gains")
    p_tf.set_defaults(func=cmd_tf)

    p_eq = sub.add_parser("equilibrium", help="print the hover state and input")
    p_eq.set_defaults(func=cmd_equilibrium)

    p_step = sub.add_parser("step", help="canonical step studies")
    p_step.add_argument("--plant", choices=("linear", "nonlinear"), required=True)
    p_step.add_argument("--channel", choices=("u1", "u2", "closed-x", "closed-y"), required=True)
    common(p_step)
    p_step.set_defaults(func=cmd_step)

    p_cmp = sub.add_parser("compare", help="linear vs nonlinear comparison")
    common(p_cmp, scenario=True)
    p_cmp.set_defaults(func=cmd_compare)

    p_probe = sub.add_parser("probe", help="stability probe sweep over initial tilts")
    p_probe.add_argument("--phi0", required=True, help="comma-separated initial tilts [rad]")
    p_probe.add_argument("--plant", choices=("linear", "nonlinear"), default="nonlinear")
    p_probe.add_argument("--tol", type=float, default=0.01, help="convergence norm tolerance")
    common(p_probe)
    p_probe.set_defaults(func=cmd_probe)
    return parser


def _join_phi0(argv):
    """Fold '--phi0 -0.5,1' into '--phi0=-0.5,1' so leading dashes parse."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--phi0" and i + 1 < len(argv):
            out.append(f"--phi0={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_phi0(list(argv))
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ScenarioError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
