import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cmaxrel import serialize
from cmaxrel.cli import CONFIG_ENV, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:] if not line.startswith("#")]


def jsonl(text):
    return [json.loads(line) for line in text.strip().splitlines()]


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


# --- boost ------------------------------------------------------------------

def test_boost_identity():
    code, out, err = run("boost", "--cm", "2", "--v", "0", "--event", "0,0,0,1")
    assert code == 0 and err == ""
    (row,) = csv_rows(out)
    assert {k: float(v) for k, v in row.items()} == {"x": 0.0, "y": 0.0, "z": 0.0, "t": 1.0}


def test_boost_example():
    code, out, _ = run("boost", "--cm", "2", "--v", "1.2", "--event", "0,0,0,1")
    assert code == 0
    (row,) = csv_rows(out)
    assert float(row["x"]) == pytest.approx(1.5, rel=1e-15)
    assert float(row["t"]) == pytest.approx(1.25, rel=1e-15)


def test_boost_at_max_speed_exits_2():
    code, out, err = run("boost", "--cm", "2", "--v", "2.0", "--event", "0,0,0,1")
    assert code == 2 and out == ""
    assert "BoostAtMaximumSpeed" in err


def test_boost_events_csv_and_inverse_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    events = rng.normal(size=(20, 4))
    src = tmp_path / "events.csv"
    src.write_text(serialize.write_csv(serialize.EVENT_COLUMNS, events.tolist()))
    fwd = tmp_path / "fwd.csv"
    assert run("boost", "--cm", "2", "--v", "1.3", "--events-csv", str(src), "--output", str(fwd))[0] == 0
    code, out, _ = run("boost", "--cm", "2", "--v", "1.3", "--inverse", "--events-csv", str(fwd))
    assert code == 0
    np.testing.assert_allclose(serialize.read_events_csv(out), events, rtol=1e-13, atol=1e-13)


def test_boost_missing_file_exits_1(tmp_path):
    code, out, err = run("boost", "--cm", "2", "--v", "1", "--events-csv", str(tmp_path / "nope.csv"))
    assert code == 1 and out == "" and err.startswith("error:")


def test_boost_jsonl_format():
    code, out, _ = run("boost", "--cm", "2", "--v", "1.2", "--event", "0,0,0,1",
                       "--event", "1,0,0,0", "--format", "jsonl")
    assert code == 0
    recs = jsonl(out)
    assert len(recs) == 2 and recs[0]["x"] == pytest.approx(1.5)


# --- compose ----------------------------------------------------------------

def test_compose_light_frame_inverse():
    code, out, _ = run("compose", "--cm", "2", "--v", "1.0", "--u", "-1.0", "--inverse")
    assert code == 0
    assert float(csv_rows(out)[0]["ux"]) == pytest.approx(-1.6, rel=1e-15)


def test_compose_fixed_point():
    code, out, _ = run("compose", "--cm", "2", "--v", "0.7", "--u", "2.0")
    assert code == 0
    assert float(csv_rows(out)[0]["ux"]) == pytest.approx(2.0, rel=1e-15)


def test_compose_rejects_v_at_cm():
    code, out, err = run("compose", "--cm", "1.5", "--v", "1.5", "--u", "0.1")
    assert code == 2 and out == "" and "error:" in err


def test_light_frame_check_mode():
    code, out, _ = run("compose", "--cm", "2", "--light-frame-check", "--format", "jsonl")
    (rec,) = jsonl(out)
    assert code == 0
    assert rec["u_prime_x_of_minus_c"] == pytest.approx(-1.6, rel=1e-15)
    assert rec["closed_form"] == pytest.approx(-1.6, rel=1e-15)
    assert rec["between_minus_2c_and_minus_c"] is True


# --- collide ----------------------------------------------------------------

def test_collide_single():
    code, out, _ = run("collide", "--cm", "2", "--v", "1.2", "--vprime", "0.5", "--mc", "1")
    assert code == 0
    (rec,) = jsonl(out)
    assert rec["momentum_residual"] <= 1e-12
    assert rec["mass_ratio_residual"] <= 1e-12
    assert {"v1", "v2", "m1", "m2", "energy_before", "energy_after"} <= set(rec)


def test_collide_vprime_zero():
    code, out, _ = run("collide", "--cm", "2", "--v", "1.2", "--vprime", "0", "--mc", "1")
    (rec,) = jsonl(out)
    assert code == 0 and rec["v1"] == rec["v2"] == 1.2


def test_collide_batch_of_100(tmp_path):
    rng = np.random.default_rng(7)
    rows = [(1.0, 1.0, *rng.uniform(-1.99, 1.99, 2)) for _ in range(100)]
    path = tmp_path / "batch.csv"
    path.write_text(serialize.write_csv(serialize.SCENARIO_COLUMNS, rows))
    code, out, _ = run("collide", "--cm", "2", "--batch", str(path))
    recs = jsonl(out)
    assert code == 0 and len(recs) == 100
    assert [r["v_cm"] for r in recs] == [r[2] for r in rows]  # input order kept
    assert max(r["momentum_residual"] for r in recs) <= 1e-12


def test_collide_random_is_deterministic():
    a = run("collide", "--cm", "2", "--random", "50", "--seed", "3")
    b = run("collide", "--cm", "2", "--random", "50", "--seed", "3")
    c = run("collide", "--cm", "2", "--random", "50", "--seed", "4")
    assert a[0] == 0 and a[1] == b[1] and a[1] != c[1]
    assert len(jsonl(a[1])) == 50


def test_collide_invalid_scenario():
    code, out, err = run("collide", "--cm", "2", "--v", "2.5", "--vprime", "0.1", "--mc", "1")
    assert code == 2 and out == ""


# --- trajectory -------------------------------------------------------------

def test_trajectory_free_particle():
    code, out, _ = run("trajectory", "--cm", "2", "--v0", "1.5", "--force", "0,0,0",
                       "--dt", "0.1", "--steps", "10")
    data = serialize.read_trajectory_csv(out)
    assert code == 0 and data.shape == (11, 11)
    assert np.all(data[:, 4:7] == data[0, 4:7])
    assert data[0, 4] == pytest.approx(1.5, rel=1e-15)
    np.testing.assert_allclose(data[:, 1], 1.5 * data[:, 0], rtol=1e-14)


def test_trajectory_constant_force():
    code, out, _ = run("trajectory", "--cm", "2", "--v0", "1", "--force", "0.8",
                       "--dt", "1e-3", "--steps", "1000")
    assert code == 0
    data = serialize.read_trajectory_csv(out)
    assert np.all(np.diff(data[:, 10]) > 0)
    last = out.strip().splitlines()[-1]
    assert last.startswith("# work_energy_residual,")
    assert float(last.split(",")[1]) <= 1e-8


def test_trajectory_zero_dt():
    code, out, err = run("trajectory", "--cm", "2", "--v0", "1", "--force", "1",
                         "--dt", "0", "--steps", "10")
    assert code == 2 and out == "" and "NonPositiveStep" in err


# --- wave -------------------------------------------------------------------

def test_wave_kg_massless():
    code, out, _ = run("wave", "--cm", "2", "--equation", "kg", "--mc", "0", "--mode", "1")
    (rec,) = jsonl(out)
    assert code == 0 and rec["relative_error"] <= 5e-3
    assert rec["energy_drift"] <= 1e-6


def test_wave_dirac_norm():
    code, out, _ = run("wave", "--cm", "2", "--equation", "dirac", "--mc", "1", "--mode", "1",
                       "--steps", "1000")
    (rec,) = jsonl(out)
    assert code == 0 and rec["norm_drift"] <= 1e-8 and rec["relative_error"] <= 1e-2


def test_wave_cfl_violation_named():
    code, out, err = run("wave", "--cm", "2", "--mode", "1", "--n", "64", "--dt", "0.1")
    assert code == 2 and out == "" and "CflViolation" in err


def test_wave_dirac_stability_violation_named():
    code, _, err = run("wave", "--cm", "2", "--equation", "dirac", "--mode", "1", "--dt", "1.0")
    assert code == 2 and "StabilityViolation" in err


def test_wave_snapshots(tmp_path):
    code, _, _ = run("wave", "--cm", "2", "--mc", "1", "--mode", "2", "--n", "32",
                     "--steps", "20", "--snap-every", "10", "--snap-dir", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["snapshot_000000.csv", "snapshot_000010.csv", "snapshot_000020.csv"]
    x, psi = serialize.read_field_csv((tmp_path / names[0]).read_text())
    np.testing.assert_allclose(psi, np.exp(2j * x), atol=1e-15)


def test_wave_initial_file(tmp_path):
    n = 64
    x = 2 * np.pi / n * np.arange(n)
    path = tmp_path / "init.csv"
    path.write_text(serialize.write_csv(serialize.SCALAR_FIELD_COLUMNS, zip(x, np.cos(3 * x), 0 * x)))
    code, out, _ = run("wave", "--cm", "2", "--mc", "1", "--initial", str(path), "--steps", "200")
    (rec,) = jsonl(out)
    assert code == 0 and rec["mode"] == 3


# --- config -----------------------------------------------------------------

def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[units]\ncm = 2\n\n[boost]\nv = 1.2\nevent = 0,0,0,1; 1,0,0,0\n")
    code, out, _ = run("boost", "--config", str(cfg))
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 2 and float(rows[0]["x"]) == pytest.approx(1.5)
    code, out, _ = run("boost", "--config", str(cfg), "--v", "0")
    assert float(csv_rows(out)[0]["x"]) == 0.0


def test_config_from_environment(tmp_path, monkeypatch):
    cfg = tmp_path / "env.ini"
    cfg.write_text("[units]\ncm = 2\n[compose]\nv = 0.7\nu = 2.0\n")
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    code, out, _ = run("compose")
    assert code == 0 and float(csv_rows(out)[0]["ux"]) == pytest.approx(2.0)


@pytest.mark.parametrize("text", [
    "[units]\ncm = 2\nspeed = 3\n",
    "[units]\ncm = 2\n[boost]\nvelocity = 1\n",
    "[units]\ncm = 2\n[plot]\nx = 1\n",
])
def test_config_unknown_keys_rejected(tmp_path, text):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    code, out, err = run("boost", "--config", str(cfg), "--v", "0", "--event", "0,0,0,1")
    assert code == 2 and out == "" and "ConfigError" in err


def test_missing_cm():
    code, _, err = run("boost", "--v", "0", "--event", "0,0,0,1")
    assert code == 2 and "--cm" in err


def test_bad_units_rejected():
    code, _, err = run("boost", "--cm", "0.5", "--v", "0", "--event", "0,0,0,1")
    assert code == 2 and "MaxSpeedNotAboveLightSpeed" in err


def test_output_is_byte_identical(tmp_path):
    args = ("trajectory", "--cm", "2", "--v0", "1,0.2", "--force", "0.3,0.1", "--dt", "0.01", "--steps", "50")
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*args, "--output", str(first))[0] == 0
    assert run(*args, "--output", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    assert b"\r\n" not in first.read_bytes()


def test_console_entry_point_module():
    proc = subprocess.run(
        [sys.executable, "-m", "cmaxrel.cli", "compose", "--cm", "2", "--v", "1", "--u", "-1", "--inverse"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert float(csv_rows(proc.stdout)[0]["ux"]) == pytest.approx(-1.6)
