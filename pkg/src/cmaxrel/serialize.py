"""CSV and JSON-lines readers/writers for events, trajectories, fields and reports.

Numbers are written with 17 significant digits so doubles round-trip. CSV
files are comma separated with a header row and LF line endings.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

import numpy as np

from .collision import CollisionScenario
from .dynamics import TrajectoryRecord
from .wavesolver import ScalarFieldGrid, SpinorFieldGrid

TRAJECTORY_COLUMNS = ("t", "x", "y", "z", "vx", "vy", "vz", "px", "py", "pz", "E")
EVENT_COLUMNS = ("x", "y", "z", "t")
SCENARIO_COLUMNS = ("m_c1", "m_c2", "v_cm", "v_prime")
SCALAR_FIELD_COLUMNS = ("x", "re_psi", "im_psi")
SPINOR_FIELD_COLUMNS = ("x", "re_psi1", "im_psi1", "re_psi2", "im_psi2")


def fmt(value) -> str:
    """Format one value for CSV/JSON output."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "NaN"
        if math.isinf(value):
            return "Infinity" if value > 0 else "-Infinity"
        return format(value, ".17g")
    if value is None:
        return "null"
    return json.dumps(str(value))


def json_line(record: dict) -> str:
    """One JSON object on one line, floats at 17 significant digits."""
    parts = []
    for key, value in record.items():
        if isinstance(value, (list, tuple, np.ndarray)):
            rendered = "[" + ", ".join(fmt(v) for v in value) + "]"
        else:
            rendered = fmt(value)
        parts.append(f"{json.dumps(key)}: {rendered}")
    return "{" + ", ".join(parts) + "}"


def write_jsonl(records: Iterable[dict]) -> str:
    return "".join(json_line(r) + "\n" for r in records)


def write_csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def _read_rows(text: str, required: Sequence[str]) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in required if c not in (reader.fieldnames or [])]
    if missing:
        raise ValueError(f"CSV is missing columns {missing}; need {list(required)}")
    return [row for row in reader if any((v or "").strip() for v in row.values())]


def read_events_csv(text: str) -> np.ndarray:
    """Events as an ``(n, 4)`` array ordered ``x, y, z, t``."""
    rows = _read_rows(text, EVENT_COLUMNS)
    return np.array([[float(r[c]) for c in EVENT_COLUMNS] for r in rows], dtype=float).reshape(-1, 4)


def read_scenarios_csv(text: str) -> list[CollisionScenario]:
    rows = _read_rows(text, SCENARIO_COLUMNS)
    return [CollisionScenario(*(float(r[c]) for c in SCENARIO_COLUMNS)) for r in rows]


def write_scenarios_csv(scenarios: Iterable[CollisionScenario]) -> str:
    return write_csv(SCENARIO_COLUMNS, ((s.m_c1, s.m_c2, s.v_cm, s.v_prime) for s in scenarios))


def trajectory_to_csv(record: TrajectoryRecord, work_energy_residual: float | None = None) -> str:
    """Trajectory table; optionally closed by a ``# work_energy_residual,<value>`` line."""
    text = write_csv(TRAJECTORY_COLUMNS, record.rows())
    if work_energy_residual is not None:
        text += f"# work_energy_residual,{fmt(work_energy_residual)}\n"
    return text


def read_trajectory_csv(text: str) -> np.ndarray:
    """Trajectory rows as an ``(n, 11)`` array; comment lines are skipped."""
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    rows = _read_rows(body, TRAJECTORY_COLUMNS)
    return np.array([[float(r[c]) for c in TRAJECTORY_COLUMNS] for r in rows])


def field_to_csv(grid: ScalarFieldGrid | SpinorFieldGrid) -> str:
    x = grid.x
    if isinstance(grid, SpinorFieldGrid):
        up, down = grid.psi
        rows = zip(x, up.real, up.imag, down.real, down.imag)
        return write_csv(SPINOR_FIELD_COLUMNS, rows)
    return write_csv(SCALAR_FIELD_COLUMNS, zip(x, grid.psi.real, grid.psi.imag))


def read_field_csv(text: str):
    """Parse a field snapshot.

    Returns
    -------
    x : ndarray
    psi : ndarray
        Complex, shape ``(N,)`` for a scalar snapshot or ``(2, N)`` for a spinor.
    """
    reader = csv.DictReader(io.StringIO(text))
    names = reader.fieldnames or []
    rows = [r for r in reader]
    if set(SPINOR_FIELD_COLUMNS) <= set(names):
        x = np.array([float(r["x"]) for r in rows])
        up = np.array([complex(float(r["re_psi1"]), float(r["im_psi1"])) for r in rows])
        down = np.array([complex(float(r["re_psi2"]), float(r["im_psi2"])) for r in rows])
        return x, np.vstack([up, down])
    if set(SCALAR_FIELD_COLUMNS) <= set(names):
        x = np.array([float(r["x"]) for r in rows])
        psi = np.array([complex(float(r["re_psi"]), float(r["im_psi"])) for r in rows])
        return x, psi
    raise ValueError(f"unrecognised field columns {names}")
