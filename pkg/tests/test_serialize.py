import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmaxrel import ParticleState, constant_force, simulate_trajectory
from cmaxrel.collision import CollisionScenario
from cmaxrel.serialize import (
    EVENT_COLUMNS,
    field_to_csv,
    fmt,
    json_line,
    read_events_csv,
    read_field_csv,
    read_scenarios_csv,
    read_trajectory_csv,
    trajectory_to_csv,
    write_csv,
    write_scenarios_csv,
)
from cmaxrel.wavesolver import ScalarFieldGrid, SpinorFieldGrid


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip(x):
    assert float(fmt(x)) == x


def test_fmt_special_values():
    assert fmt(True) == "true" and fmt(False) == "false"
    assert fmt(None) == "null" and fmt(3) == "3"
    assert fmt(float("nan")) == "NaN" and fmt(float("-inf")) == "-Infinity"
    assert fmt(np.float64(0.1)) == "0.10000000000000001"


def test_json_line_parses():
    rec = json.loads(json_line({"a": 0.1, "b": [1.0, 2.5], "ok": True, "name": "kg"}))
    assert rec == {"a": 0.1, "b": [1.0, 2.5], "ok": True, "name": "kg"}


def test_events_round_trip(rng):
    events = rng.normal(size=(10, 4))
    text = write_csv(EVENT_COLUMNS, events.tolist())
    assert text.endswith("\n") and "\r" not in text
    np.testing.assert_array_equal(read_events_csv(text), events)


def test_events_missing_column():
    with pytest.raises(ValueError, match="missing"):
        read_events_csv("x,y,t\n1,2,3\n")


def test_scenarios_round_trip():
    scenarios = [CollisionScenario(1.0, 2.0, 0.3, -1.1), CollisionScenario(1.0, 1.0, 1.9, 0.0)]
    assert read_scenarios_csv(write_scenarios_csv(scenarios)) == scenarios


def test_trajectory_round_trip(ctx):
    s0 = ParticleState.create(ctx, 1.0, velocity=(1.0, 0.1, 0))
    rec = simulate_trajectory(ctx, constant_force((0.5, 0, 0)), s0, 0.01, 30)
    text = trajectory_to_csv(rec, rec.work_energy_residual())
    data = read_trajectory_csv(text)
    np.testing.assert_array_equal(data[:, 0], rec.t)
    np.testing.assert_array_equal(data[:, 7:10], rec.momentum)
    np.testing.assert_array_equal(data[:, 10], rec.energy)


def test_field_round_trip(rng):
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    x, back = read_field_csv(field_to_csv(ScalarFieldGrid(psi, 0 * psi, 0.25)))
    np.testing.assert_array_equal(back, psi)
    np.testing.assert_array_equal(x, 0.25 * np.arange(16))
    spin = rng.normal(size=(2, 16)) + 1j * rng.normal(size=(2, 16))
    _, back = read_field_csv(field_to_csv(SpinorFieldGrid(spin, 0.25)))
    np.testing.assert_array_equal(back, spin)
    with pytest.raises(ValueError):
        read_field_csv("a,b\n1,2\n")
