"""Declarative scenario files: a flat INI dialect, one section of nesting.

Example::

    [scenario]
    name = closed_step_xy_nonlinear
    plant = nonlinear
    outputs = csv, metrics

    [sim]
    dt = 1e-4
    t_end = 8.0
    initial_state = 0 0 0 0 0 0

    [signal]
    type = closed_loop

    [gains]
    kp_y = 7.0
    kd_y = 1.42
    kp_x = 2.5
    kd_x = 0.56
    kp_phi = 0.04
    kd_phi = 0.008

    [setpoint]
    x = 1.0
    y = 1.0

[gains] and [setpoint] apply to closed_loop signals; open-loop signal types
are step (u1_amp, u2_amp, hover_offset), constant (u1, u2) and sinusoid
(channel, amplitude, frequency, offset). An optional [params] section
overrides the physical constants and an optional [compare] section sets the
channel/threshold used by comparison runs. Parsing then re-serializing a
file yields an equivalent scenario, so runs reproduce bit for bit.
"""

from __future__ import annotations

import configparser
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .control import InputLimits, PdGains, Setpoint
from .dynamics import QuadParams, State
from .sim import ClosedLoop, Constant, InputSignal, SimConfig, Sinusoid, Step

_NAME_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._-]*")
VALID_OUTPUTS = ("csv", "metrics", "comparison")
SCENARIO_SUFFIX = ".scn"


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


@dataclass(frozen=True)
class Scenario:
    name: str
    plant: str = "nonlinear"
    signal: InputSignal = field(default_factory=Step)
    dt: float = 1e-4
    t_end: float = 2.0
    initial_state: State = field(default_factory=State)
    outputs: tuple = ("csv",)
    params: QuadParams = field(default_factory=QuadParams)
    compare_channel: str = "x"
    compare_threshold: float = 0.1

    def __post_init__(self):
        if not _NAME_RE.fullmatch(self.name):
            raise ScenarioError(f"scenario name {self.name!r} is not filesystem-safe")
        if self.plant not in ("linear", "nonlinear"):
            raise ScenarioError(f"plant must be 'linear' or 'nonlinear', got {self.plant!r}")
        bad = [o for o in self.outputs if o not in VALID_OUTPUTS]
        if bad:
            raise ScenarioError(f"unknown outputs {bad}; valid: {VALID_OUTPUTS}")

    def sim_config(self, *, dt: Optional[float] = None, t_end: Optional[float] = None) -> SimConfig:
        return SimConfig(plant=self.plant, dt=dt if dt is not None else self.dt,
                         t_end=t_end if t_end is not None else self.t_end,
                         initial_state=self.initial_state)


def _get_float(section, key, default=None):
    if key not in section:
        if default is None:
            raise ScenarioError(f"missing key {key!r} in [{section.name}]")
        return default
    try:
        return float(section[key])
    except ValueError as err:
        raise ScenarioError(f"bad float for {key!r} in [{section.name}]: {section[key]!r}") from err


def _get_bool(section, key, default=False):
    if key not in section:
        return default
    raw = section[key].strip().lower()
    if raw in ("true", "yes", "on", "1"):
        return True
    if raw in ("false", "no", "off", "0"):
        return False
    raise ScenarioError(f"bad boolean for {key!r}: {section[key]!r}")


def _parse_signal(cp: configparser.ConfigParser) -> InputSignal:
    if "signal" not in cp:
        raise ScenarioError("missing [signal] section")
    sig = cp["signal"]
    kind = sig.get("type", "").strip().lower()
    if kind == "step":
        return Step(u1_amp=_get_float(sig, "u1_amp", 0.0),
                    u2_amp=_get_float(sig, "u2_amp", 0.0),
                    hover_offset=_get_bool(sig, "hover_offset"))
    if kind == "constant":
        return Constant(u1=_get_float(sig, "u1", 0.0), u2=_get_float(sig, "u2", 0.0))
    if kind == "sinusoid":
        channel = sig.get("channel", "u1").strip()
        try:
            return Sinusoid(channel=channel,
                            amplitude=_get_float(sig, "amplitude", 1.0),
                            frequency=_get_float(sig, "frequency", 1.0),
                            offset=_get_float(sig, "offset", 0.0))
        except ValueError as err:
            raise ScenarioError(str(err)) from err
    if kind == "closed_loop":
        gains = PdGains()
        if "gains" in cp:
            gs = cp["gains"]
            gains = PdGains(kp_y=_get_float(gs, "kp_y", gains.kp_y),
                            kd_y=_get_float(gs, "kd_y", gains.kd_y),
                            kp_x=_get_float(gs, "kp_x", gains.kp_x),
                            kd_x=_get_float(gs, "kd_x", gains.kd_x),
                            kp_phi=_get_float(gs, "kp_phi", gains.kp_phi),
                            kd_phi=_get_float(gs, "kd_phi", gains.kd_phi))
        if "setpoint" not in cp:
            raise ScenarioError("closed_loop signal needs a [setpoint] section")
        sp_sec = cp["setpoint"]
        setpoint = Setpoint(x=_get_float(sp_sec, "x", 0.0), y=_get_float(sp_sec, "y", 0.0))
        limit_keys = ("u1_min", "u1_max", "u2_min", "u2_max")
        limits = None
        if any(k in sig for k in limit_keys):
            vals = {k: (_get_float(sig, k) if k in sig else None) for k in limit_keys}
            try:
                limits = InputLimits(**vals)
            except ValueError as err:
                raise ScenarioError(str(err)) from err
        mode = sig.get("phi_rate_mode", "model").strip()
        if mode not in ("model", "zero"):
            raise ScenarioError(f"phi_rate_mode must be 'model' or 'zero', got {mode!r}")
        return ClosedLoop(gains=gains, setpoint=setpoint,
                          angle_cmd_sign=_get_float(sig, "angle_cmd_sign", -1.0),
                          phi_rate_mode=mode, limits=limits)
    raise ScenarioError(f"unknown signal type {kind!r}")


def parse_scenario(text: str) -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ScenarioError(f"unparseable scenario file: {err}") from err
    if "scenario" not in cp:
        raise ScenarioError("missing [scenario] section")
    head = cp["scenario"]
    name = head.get("name", "").strip()
    plant = head.get("plant", "nonlinear").strip()
    outputs = tuple(part.strip() for part in head.get("outputs", "csv").split(",") if part.strip())

    params = QuadParams()
    if "params" in cp:
        ps = cp["params"]
        try:
            params = QuadParams(m=_get_float(ps, "m", params.m), g=_get_float(ps, "g", params.g),
                                L=_get_float(ps, "L", params.L), J=_get_float(ps, "J", params.J))
        except ValueError as err:
            raise ScenarioError(str(err)) from err

    dt, t_end, initial = 1e-4, 2.0, State()
    if "sim" in cp:
        sm = cp["sim"]
        dt = _get_float(sm, "dt", dt)
        t_end = _get_float(sm, "t_end", t_end)
        if "initial_state" in sm:
            parts = sm["initial_state"].replace(",", " ").split()
            if len(parts) != 6:
                raise ScenarioError(f"initial_state needs 6 numbers, got {len(parts)}")
            try:
                initial = State.from_sequence(float(p) for p in parts)
            except ValueError as err:
                raise ScenarioError(f"bad initial_state: {err}") from err

    compare_channel, compare_threshold = "x", 0.1
    if "compare" in cp:
        comp = cp["compare"]
        compare_channel = comp.get("channel", compare_channel).strip()
        compare_threshold = _get_float(comp, "threshold", compare_threshold)

    signal = _parse_signal(cp)
    try:
        return Scenario(name=name, plant=plant, signal=signal, dt=dt, t_end=t_end,
                        initial_state=initial, outputs=outputs, params=params,
                        compare_channel=compare_channel, compare_threshold=compare_threshold)
    except ValueError as err:
        raise ScenarioError(str(err)) from err


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ScenarioError(f"cannot read scenario file {path}: {err}") from err
    return parse_scenario(text)


def serialize_scenario(sc: Scenario) -> str:
    """Canonical text form; parse(serialize(sc)) reproduces the scenario."""
    cp = configparser.ConfigParser()
    cp["scenario"] = {"name": sc.name, "plant": sc.plant, "outputs": ", ".join(sc.outputs)}
    cp["sim"] = {
        "dt": repr(sc.dt),
        "t_end": repr(sc.t_end),
        "initial_state": " ".join(repr(v) for v in sc.initial_state.as_tuple()),
    }
    default = QuadParams()
    if sc.params != default:
        cp["params"] = {k: repr(getattr(sc.params, k)) for k in ("m", "g", "L", "J")}
    sig = sc.signal
    if isinstance(sig, Step):
        cp["signal"] = {"type": "step", "u1_amp": repr(sig.u1_amp), "u2_amp": repr(sig.u2_amp),
                        "hover_offset": str(sig.hover_offset).lower()}
    elif isinstance(sig, Constant):
        cp["signal"] = {"type": "constant", "u1": repr(sig.u1), "u2": repr(sig.u2)}
    elif isinstance(sig, Sinusoid):
        cp["signal"] = {"type": "sinusoid", "channel": sig.channel,
                        "amplitude": repr(sig.amplitude), "frequency": repr(sig.frequency),
                        "offset": repr(sig.offset)}
    else:
        entry = {"type": "closed_loop", "phi_rate_mode": sig.phi_rate_mode,
                 "angle_cmd_sign": repr(sig.angle_cmd_sign)}
        if sig.limits is not None:
            for k in ("u1_min", "u1_max", "u2_min", "u2_max"):
                v = getattr(sig.limits, k)
                if v is not None:
                    entry[k] = repr(v)
        cp["signal"] = entry
        cp["gains"] = {k: repr(getattr(sig.gains, k))
                       for k in ("kp_y", "kd_y", "kp_x", "kd_x", "kp_phi", "kd_phi")}
        cp["setpoint"] = {"x": repr(sig.setpoint.x), "y": repr(sig.setpoint.y)}
    if (sc.compare_channel, sc.compare_threshold) != ("x", 0.1):
        cp["compare"] = {"channel": sc.compare_channel, "threshold": repr(sc.compare_threshold)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
