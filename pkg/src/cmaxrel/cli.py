"""Command-line front end: ``cmaxrel {boost,compose,collide,trajectory,wave}``.

Values come from, in increasing priority: built-in defaults, a config file
(``--config`` or the ``CMAX_CONFIG`` environment variable), then flags.
The config file is INI-style ``key = value`` text with a ``[units]`` section
(``c``, ``cm``, ``hbar``) and one section per command whose keys are the
command's long flag names with dashes replaced by underscores.

Exit codes: 0 success, 1 I/O error, 2 validation or domain error.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import collision, dynamics, serialize, wavesolver, xform
from .core import FourVector, InvariantSpeedContext, ParticleState, SuperluminalError, make_context

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2
CONFIG_ENV = "CMAX_CONFIG"


class ConfigError(SuperluminalError):
    pass


def _floats(text: str, n_min: int = 1, n_max: int = 3, what: str = "vector") -> list[float]:
    try:
        values = [float(part) for part in str(text).split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} {text!r}: {exc}") from None
    if not n_min <= len(values) <= n_max:
        raise ConfigError(f"{what} {text!r} needs {n_min}..{n_max} comma-separated numbers")
    return values


def _vec3(text: str, what: str) -> np.ndarray:
    values = _floats(text, 1, 3, what)
    return np.array(values + [0.0] * (3 - len(values)))


# -- option tables -----------------------------------------------------------
# (flag, config key, type, default, help); type "flag" is a store_true switch.

COMMON = [
    ("--c", "c", float, 1.0, "light speed (default 1, natural units)"),
    ("--cm", "cm", float, None, "maximum speed c_m, in the same units as c"),
    ("--hbar", "hbar", float, 1.0, "reduced Planck constant (default 1)"),
    ("--format", "format", str, None, "output format: csv or jsonl"),
    ("--output", "output", str, None, "output file (default: stdout)"),
    ("--seed", "seed", int, 0, "random seed for generated inputs"),
]
UNIT_KEYS = {"c", "cm", "hbar"}

COMMANDS = {
    "boost": [
        ("--v", "v", float, None, "velocity of S' relative to S along x"),
        ("--event", "event", "append", None, "event x,y,z,t in S' (repeatable)"),
        ("--events-csv", "events_csv", str, None, "CSV file with columns x,y,z,t"),
        ("--inverse", "inverse", "flag", False, "map S -> S' instead"),
    ],
    "compose": [
        ("--v", "v", float, None, "velocity of S' relative to S along x"),
        ("--u", "u", str, None, "velocity ux[,uy[,uz]] to transform"),
        ("--inverse", "inverse", "flag", False, "map a velocity in S to S'"),
        ("--light-frame-check", "light_frame_check", "flag", False,
         "transform u = +c and u = -c into the frame moving at v = c"),
    ],
    "collide": [
        ("--mc", "mc", float, None, "characteristic mass of both particles"),
        ("--mc1", "mc1", float, None, "characteristic mass of particle 1"),
        ("--mc2", "mc2", float, None, "characteristic mass of particle 2"),
        ("--v", "v", float, None, "velocity of the CM frame in the lab"),
        ("--vprime", "vprime", float, None, "particle speed in the CM frame"),
        ("--batch", "batch", str, None, "CSV with columns m_c1,m_c2,v_cm,v_prime"),
        ("--random", "random", int, None, "generate this many identical-particle scenarios"),
    ],
    "trajectory": [
        ("--mc", "mc", float, 1.0, "characteristic mass"),
        ("--x0", "x0", str, "0,0,0", "initial position"),
        ("--v0", "v0", str, None, "initial velocity vx[,vy[,vz]]"),
        ("--force", "force", str, None, "constant force Fx[,Fy[,Fz]]"),
        ("--dt", "dt", float, None, "time step"),
        ("--steps", "steps", int, None, "number of steps"),
    ],
    "wave": [
        ("--equation", "equation", str, "kg", "kg or dirac"),
        ("--mc", "mc", float, 0.0, "characteristic mass"),
        ("--n", "n", int, 256, "grid points"),
        ("--length", "length", float, 2 * math.pi, "domain length"),
        ("--dt", "dt", float, None, "time step (default: half the stability bound)"),
        ("--steps", "steps", int, None, "number of steps (default: two periods of the mode)"),
        ("--mode", "mode", int, None, "initialise a single positive-energy Fourier mode"),
        ("--initial", "initial", str, None, "initial field CSV (x,re_psi,im_psi[,...])"),
        ("--cfl-safety", "cfl_safety", float, 0.5, "Courant number bound for the KG scheme"),
        ("--snap-every", "snap_every", int, None, "write a field snapshot every this many steps"),
        ("--snap-dir", "snap_dir", str, None, "directory for snapshot CSV files"),
    ],
}

DEFAULT_FORMAT = {"boost": "csv", "compose": "csv", "collide": "jsonl",
                  "trajectory": "csv", "wave": "jsonl"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmaxrel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help=f"config file (default: ${CONFIG_ENV})")
        for flag, key, kind, _default, text in COMMON + options:
            if kind == "flag":
                p.add_argument(flag, dest=key, action="store_true", default=None, help=text)
            elif kind == "append":
                p.add_argument(flag, dest=key, action="append", default=None, help=text)
            else:
                p.add_argument(flag, dest=key, type=kind, default=None, help=text)
    return parser


def _coerce(kind, raw: str, key: str):
    if kind == "flag":
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"config key {key!r}: expected a boolean, got {raw!r}")
    if kind == "append":
        return [part.strip() for part in raw.split(";") if part.strip()]
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from None


def load_config(path: str | None, command: str) -> dict:
    """Read the ``[units]`` and ``[<command>]`` sections of a config file.

    Unknown sections or keys raise :class:`ConfigError`. Event lists in the
    ``boost`` section are separated by ``;``.
    """
    if not path:
        return {}
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    known = {"units"} | set(COMMANDS)
    unknown_sections = set(parser.sections()) - known
    if unknown_sections:
        raise ConfigError(f"unknown config sections: {sorted(unknown_sections)}")
    kinds = {key: kind for _f, key, kind, _d, _h in COMMON + COMMANDS[command]}
    out = {}
    if parser.has_section("units"):
        for key, raw in parser.items("units"):
            if key not in UNIT_KEYS:
                raise ConfigError(f"unknown key {key!r} in [units]")
            out[key] = _coerce(float, raw, key)
    for section in COMMANDS:
        if not parser.has_section(section):
            continue
        section_kinds = {key: kind for _f, key, kind, _d, _h in COMMON + COMMANDS[section]}
        for key, raw in parser.items(section):
            if key not in section_kinds:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            if section == command:
                out[key] = _coerce(kinds[key], raw, key)
    return out


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags (flags win)."""
    command = args.command
    opts = {key: default for _f, key, _k, default, _h in COMMON + COMMANDS[command]}
    opts.update(load_config(args.config or os.environ.get(CONFIG_ENV), command))
    for key, value in vars(args).items():
        if key in opts and value is not None:
            opts[key] = value
    if opts["format"] is None:
        opts["format"] = DEFAULT_FORMAT[command]
    if opts["format"] not in ("csv", "jsonl"):
        raise ConfigError(f"format must be csv or jsonl, got {opts['format']!r}")
    return opts


def _context(opts) -> InvariantSpeedContext:
    if opts["cm"] is None:
        raise ConfigError("--cm is required (flag or [units] cm in the config file)")
    return make_context(opts["c"], opts["cm"], opts["hbar"])


def _require(opts, *keys):
    for key in keys:
        if opts.get(key) is None:
            raise ConfigError(f"--{key.replace('_', '-')} is required")


def _table(opts, columns, rows) -> str:
    rows = list(rows)
    if opts["format"] == "csv":
        return serialize.write_csv(columns, rows)
    return serialize.write_jsonl(dict(zip(columns, row)) for row in rows)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


# -- commands ----------------------------------------------------------------


def cmd_boost(opts) -> str:
    ctx = _context(opts)
    _require(opts, "v")
    events = [_floats(e, 4, 4, "event") for e in (opts["event"] or [])]
    if opts["events_csv"]:
        events.extend(serialize.read_events_csv(_read_text(opts["events_csv"])).tolist())
    if not events:
        raise ConfigError("give at least one --event x,y,z,t or --events-csv")
    arr = np.array(events, dtype=float)
    ev = FourVector.event(ctx, arr[:, 3], arr[:, 0], arr[:, 1], arr[:, 2])
    transform = xform.inverse_boost_event if opts["inverse"] else xform.boost_event
    out = transform(ctx, xform.BoostParameter(opts["v"]), ev)
    rows = zip(*np.broadcast_arrays(out.x, out.y, out.z, out.time(ctx)))
    return _table(opts, serialize.EVENT_COLUMNS, rows)


def cmd_compose(opts) -> str:
    ctx = _context(opts)
    if opts["light_frame_check"]:
        c, cm = ctx.c, ctx.c_m
        forward = xform.inverse_compose_velocity(ctx, c, (c, 0.0, 0.0))[0]
        backward = xform.inverse_compose_velocity(ctx, c, (-c, 0.0, 0.0))[0]
        formula = -2.0 * c * cm**2 / (c**2 + cm**2)
        row = (c, cm, forward, backward, formula, bool(-2.0 * c < backward < -c))
        cols = ("c", "cm", "u_prime_x_of_plus_c", "u_prime_x_of_minus_c",
                "closed_form", "between_minus_2c_and_minus_c")
        return _table(opts, cols, [row])
    _require(opts, "v", "u")
    u = _vec3(opts["u"], "--u")
    transform = xform.inverse_compose_velocity if opts["inverse"] else xform.compose_velocity
    result = transform(ctx, xform.BoostParameter(opts["v"]), u)
    return _table(opts, ("ux", "uy", "uz"), [tuple(result)])


def _scenarios(opts, ctx) -> list[collision.CollisionScenario]:
    if opts["batch"]:
        return serialize.read_scenarios_csv(_read_text(opts["batch"]))
    if opts["random"] is not None:
        if opts["random"] < 1:
            raise ConfigError("--random needs a positive count")
        rng = np.random.default_rng(opts["seed"])
        mc = opts["mc"] if opts["mc"] is not None else 1.0
        v = rng.uniform(-ctx.c_m, ctx.c_m, opts["random"]) * (1 - 1e-9)
        vp = rng.uniform(-ctx.c_m, ctx.c_m, opts["random"]) * (1 - 1e-9)
        return [collision.CollisionScenario(mc, mc, float(a), float(b)) for a, b in zip(v, vp)]
    _require(opts, "v", "vprime")
    m1 = opts["mc1"] if opts["mc1"] is not None else opts["mc"]
    m2 = opts["mc2"] if opts["mc2"] is not None else opts["mc"]
    if m1 is None or m2 is None:
        raise ConfigError("give --mc or both --mc1 and --mc2")
    return [collision.CollisionScenario(m1, m2, opts["v"], opts["vprime"])]


def cmd_collide(opts) -> str:
    ctx = _context(opts)
    reports = [collision.collision_report(ctx, s) for s in _scenarios(opts, ctx)]
    if opts["format"] == "csv":
        cols = tuple(reports[0])
        return serialize.write_csv(cols, ([r[c] for c in cols] for r in reports))
    return serialize.write_jsonl(reports)


def cmd_trajectory(opts) -> str:
    ctx = _context(opts)
    _require(opts, "v0", "force", "dt", "steps")
    if not opts["dt"] > 0.0:
        raise dynamics.NonPositiveStep(f"--dt must be positive, got {opts['dt']!r}")
    if opts["steps"] < 1:
        raise ConfigError("--steps must be at least 1")
    state = ParticleState.create(ctx, opts["mc"], _vec3(opts["x0"], "--x0"), _vec3(opts["v0"], "--v0"))
    law = dynamics.constant_force(_vec3(opts["force"], "--force"))
    record = dynamics.simulate_trajectory(ctx, law, state, opts["dt"], opts["steps"])
    residual = record.work_energy_residual()
    if opts["format"] == "csv":
        return serialize.trajectory_to_csv(record, residual)
    lines = [dict(zip(serialize.TRAJECTORY_COLUMNS, row)) for row in record.rows()]
    lines.append({"work_energy_residual": residual})
    return serialize.write_jsonl(lines)


def _initial_wave(opts, ctx):
    eq, n, length, mc = opts["equation"], opts["n"], opts["length"], opts["mc"]
    if opts["initial"]:
        x, psi = serialize.read_field_csv(_read_text(opts["initial"]))
        dx = float(x[1] - x[0])
        if eq == "dirac":
            if psi.ndim != 2:
                raise ConfigError("dirac needs a two-component initial field")
            return wavesolver.SpinorFieldGrid(psi, dx)
        if psi.ndim != 1:
            raise ConfigError("kg needs a one-component initial field")
        # start from rest: d(psi)/dt = 0
        return wavesolver.ScalarFieldGrid(psi, np.zeros_like(psi), dx)
    if opts["mode"] is None:
        raise ConfigError("give --mode or --initial")
    if not 0 <= opts["mode"] <= n // 4:
        raise ConfigError(f"--mode must lie in [0, {n // 4}]")
    if eq == "dirac":
        return wavesolver.dirac_plane_wave(ctx, mc, n, length, opts["mode"])
    return wavesolver.scalar_plane_wave(ctx, mc, n, length, opts["mode"])


def cmd_wave(opts) -> tuple[str, dict[str, str]]:
    """Run a wave simulation; returns the summary text and snapshot files."""
    ctx = _context(opts)
    if opts["equation"] not in ("kg", "dirac"):
        raise ConfigError(f"--equation must be kg or dirac, got {opts['equation']!r}")
    if opts["n"] < 8:
        raise ConfigError("--n must be at least 8")
    grid = _initial_wave(opts, ctx)
    mc, dx = opts["mc"], grid.dx
    is_kg = opts["equation"] == "kg"
    if opts["dt"] is not None:
        dt = opts["dt"]
    elif is_kg:
        dt = opts["cfl_safety"] * dx / ctx.c_m
    else:
        dt = 0.5 / wavesolver.dirac_max_frequency(ctx, mc, dx)
    if is_kg:
        wavesolver.check_cfl(ctx, dt, dx, opts["cfl_safety"])
    elif dt * wavesolver.dirac_max_frequency(ctx, mc, dx) > 1.0:
        raise wavesolver.StabilityViolation(
            f"stability bound violated: dt*omega_max = "
            f"{dt * wavesolver.dirac_max_frequency(ctx, mc, dx):.6g} > 1"
        )

    spectrum = np.fft.fft(grid.psi if is_kg else grid.psi[0])
    mode = opts["mode"] if opts["mode"] is not None else int(np.argmax(np.abs(spectrum[: grid.n // 2])))
    k = wavesolver.wavenumber(mode, grid.length)
    omega_analytic = wavesolver.kg_dispersion(ctx, mc, k)
    steps = opts["steps"]
    if steps is None:
        steps = 256 if omega_analytic == 0.0 else max(64, math.ceil(2 * 2 * math.pi / omega_analytic / dt))
    if steps < 1:
        raise ConfigError("--steps must be at least 1")
    snap_every = opts["snap_every"]
    if snap_every is not None and snap_every < 1:
        raise ConfigError("--snap-every must be at least 1")

    params = wavesolver.SolverParams(dt, 1, opts["cfl_safety"])
    evolve = wavesolver.evolve_kg if is_kg else wavesolver.evolve_dirac
    comp = 0
    if not is_kg and np.abs(spectrum[mode]) == 0.0:
        comp = 1

    def amplitude(g):
        return np.fft.fft(g.psi if is_kg else g.psi[comp])[mode] / g.n

    snapshots = {}
    times, amps = [0.0], [amplitude(grid)]
    if snap_every:
        snapshots[f"snapshot_{0:06d}.csv"] = serialize.field_to_csv(grid)
    first = None
    for i in range(1, steps + 1):
        grid = evolve(ctx, grid, mc, params)
        if i == 1:
            first = grid
        times.append(grid.t)
        amps.append(amplitude(grid))
        if snap_every and i % snap_every == 0:
            snapshots[f"snapshot_{i:06d}.csv"] = serialize.field_to_csv(grid)
    omega_measured = wavesolver._fit_frequency(np.array(times), np.array(amps))
    summary = {
        "equation": opts["equation"],
        "mode": mode,
        "k": k,
        "omega_measured": omega_measured,
        "omega_analytic": omega_analytic,
        "relative_error": abs(omega_measured / omega_analytic - 1.0) if omega_analytic else abs(omega_measured),
        "dt": dt,
        "steps": steps,
    }
    if is_kg:
        e0 = wavesolver.kg_energy(ctx, first, mc)
        summary["energy_drift"] = abs(wavesolver.kg_energy(ctx, grid, mc) / e0 - 1.0) if e0 else 0.0
        summary["courant"] = ctx.c_m * dt / dx
    else:
        n0 = wavesolver.spinor_norm(_initial_wave(opts, ctx))
        summary["norm_drift"] = abs(wavesolver.spinor_norm(grid) / n0 - 1.0) if n0 else 0.0
    if opts["format"] == "csv":
        return serialize.write_csv(tuple(summary), [tuple(summary.values())]), snapshots
    return serialize.write_jsonl([summary]), snapshots


# -- entry point ---------------------------------------------------------------


def _emit(text: str, path: str | None, stdout) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = resolve_options(args)
        snapshots = {}
        if args.command == "wave":
            text, snapshots = cmd_wave(opts)
        else:
            text = globals()[f"cmd_{args.command}"](opts)
    except (SuperluminalError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    try:
        if snapshots:
            snap_dir = Path(opts["snap_dir"] or ".")
            snap_dir.mkdir(parents=True, exist_ok=True)
            for name, content in snapshots.items():
                (snap_dir / name).write_text(content, encoding="utf-8", newline="\n")
        _emit(text, opts["output"], stdout)
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
