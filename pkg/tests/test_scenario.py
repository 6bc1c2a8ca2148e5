from pathlib import Path

import pytest

from planarquad.control import PdGains, Setpoint
from planarquad.dynamics import QuadParams, State
from planarquad.scenario import (Scenario, ScenarioError, load_scenario, parse_scenario,
                                 serialize_scenario)
from planarquad.sim import ClosedLoop, Constant, Sinusoid, Step

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL = """
[scenario]
name = demo

[signal]
type = step
u2_amp = 1.0
hover_offset = true
"""

FULL = """
[scenario]
name = full_demo
plant = linear
outputs = csv, metrics

[sim]
dt = 1e-3
t_end = 4.0
initial_state = 0 0 0.1 0 0 0

[params]
m = 0.2
g = 9.81
L = 0.1
J = 3e-4

[signal]
type = closed_loop
phi_rate_mode = model
u1_min = 0.0
u1_max = 10.0

[gains]
kp_y = 6.0
kd_y = 1.0
kp_x = 2.0
kd_x = 0.5
kp_phi = 0.05
kd_phi = 0.01

[setpoint]
x = 1.0
y = 2.0

[compare]
channel = y
threshold = 0.05
"""


def test_minimal_defaults():
    sc = parse_scenario(MINIMAL)
    assert sc.name == "demo"
    assert sc.plant == "nonlinear"
    assert sc.outputs == ("csv",)
    assert sc.signal == Step(u1_amp=0.0, u2_amp=1.0, hover_offset=True)
    assert sc.dt == 1e-4 and sc.t_end == 2.0
    assert sc.params == QuadParams()


def test_full_round_fields():
    sc = parse_scenario(FULL)
    assert sc.plant == "linear"
    assert sc.outputs == ("csv", "metrics")
    assert sc.initial_state == State(phi=0.1)
    assert sc.params == QuadParams(m=0.2, g=9.81, L=0.1, J=3e-4)
    assert isinstance(sc.signal, ClosedLoop)
    assert sc.signal.gains == PdGains(kp_y=6.0, kd_y=1.0, kp_x=2.0, kd_x=0.5,
                                      kp_phi=0.05, kd_phi=0.01)
    assert sc.signal.setpoint == Setpoint(x=1.0, y=2.0)
    assert sc.signal.limits is not None and sc.signal.limits.u1_max == 10.0
    assert sc.compare_channel == "y"
    assert sc.compare_threshold == 0.05


@pytest.mark.parametrize("text,fragment", [
    ("[scenario]\nname = a\n", "signal"),
    ("[signal]\ntype = step\n", "scenario"),
    ("[scenario]\nname = bad name!\n[signal]\ntype = step\n", "filesystem-safe"),
    ("[scenario]\nname = a\nplant = cubic\n[signal]\ntype = step\n", "plant"),
    ("[scenario]\nname = a\noutputs = csv, movie\n[signal]\ntype = step\n", "movie"),
    ("[scenario]\nname = a\n[signal]\ntype = warble\n", "warble"),
    ("[scenario]\nname = a\n[signal]\ntype = closed_loop\n", "setpoint"),
    ("[scenario]\nname = a\n[signal]\ntype = step\nu1_amp = fast\n", "float"),
    ("[scenario]\nname = a\n[signal]\ntype = sinusoid\nfrequency = 0\n", "frequency"),
    ("[scenario]\nname = a\n[sim]\ninitial_state = 1 2 3\n[signal]\ntype = step\n", "6"),
    ("[scenario]\nname = a\n[signal]\ntype = closed_loop\nu1_min = 5\nu1_max = 1\n"
     "[setpoint]\nx = 1\n", "well-ordered"),
    ("[scenario]\nname = a\n[signal]\ntype = closed_loop\nphi_rate_mode = finite\n"
     "[setpoint]\nx = 1\n", "phi_rate_mode"),
])
def test_rejects_bad_files(text, fragment):
    with pytest.raises(ScenarioError) as excinfo:
        parse_scenario(text)
    assert fragment in str(excinfo.value)


@pytest.mark.parametrize("text", [MINIMAL, FULL])
def test_round_trip(text):
    sc = parse_scenario(text)
    again = parse_scenario(serialize_scenario(sc))
    assert again == sc


def test_round_trip_all_signal_kinds():
    for signal in (Step(u1_amp=0.5, hover_offset=True), Constant(u1=1.764),
                   Sinusoid(channel="u2", amplitude=0.1, frequency=2.0, offset=0.05),
                   ClosedLoop(gains=PdGains(), setpoint=Setpoint(x=1.0))):
        sc = Scenario(name="roundtrip", signal=signal)
        assert parse_scenario(serialize_scenario(sc)) == sc


def test_committed_scenarios_parse():
    files = sorted(SCENARIO_DIR.glob("*.scn"))
    assert len(files) >= 10
    for path in files:
        sc = load_scenario(path)
        assert sc.name == path.stem


def test_sim_config_overrides():
    sc = parse_scenario(MINIMAL)
    config = sc.sim_config(dt=1e-3, t_end=0.5)
    assert config.dt == 1e-3 and config.t_end == 0.5
    assert sc.sim_config().dt == sc.dt


def test_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("/nonexistent/path.scn")
