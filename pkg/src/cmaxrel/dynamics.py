"""Four-force and fixed-step integration of ``dp/dt = F``.

The integrated state is ``(position, momentum)``. Velocity is recovered from
momentum with ``v = p / sqrt(m_c^2 + p^2/c_m^2)``, the inverse of
``p = m_c v / sqrt(1 - v^2/c_m^2)``, so every finite momentum maps to a speed
strictly below ``c_m``. Energy and power follow ``dE/dt = F . v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    DEFAULT_TOL,
    InvariantSpeedContext,
    ParticleState,
    RegimeTag,
    SuperluminalError,
    Velocity3,
    _components,
    check_below_max,
    speed_of,
)

ForceLaw = Callable[[float, ParticleState], np.ndarray]


class NonPositiveStep(SuperluminalError):
    pass


class ForceLawNonFinite(SuperluminalError):
    pass


class TooFewSamples(SuperluminalError):
    pass


def constant_force(F) -> ForceLaw:
    """Force law returning the same 3-vector at every time and state."""
    F = np.array(F, dtype=float)

    def law(t, state):
        return F

    return law


def four_force(ctx: InvariantSpeedContext, F, v):
    """Spatial four-force ``K = F / sqrt(1 - v^2/c_m^2)`` and ``K4 = (v . K) / c_m``.

    Returns
    -------
    K : ndarray, shape (3,)
    K4 : float
    """
    F = np.asarray(F, dtype=float)
    vx, vy, vz = _components(v)
    s = check_below_max(ctx, speed_of(v), "|v|")
    K = F / np.sqrt(1.0 - (s / ctx.c_m) ** 2)
    K4 = (vx * K[..., 0] + vy * K[..., 1] + vz * K[..., 2]) / ctx.c_m
    return K, float(K4) if np.ndim(K4) == 0 else K4


def velocity_from_momentum(ctx: InvariantSpeedContext, m_c: float, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    p2 = np.sum(p * p, axis=-1, keepdims=True)
    return p / np.sqrt(m_c * m_c + p2 / ctx.c_m**2)


def energy_from_momentum(ctx: InvariantSpeedContext, m_c: float, p):
    """``m_c c_m^2 gamma`` with ``gamma = sqrt(1 + p^2 / (m_c c_m)^2)``."""
    p = np.asarray(p, dtype=float)
    p2 = np.sum(p * p, axis=-1)
    return ctx.c_m**2 * np.sqrt(m_c * m_c + p2 / ctx.c_m**2)


def _momentum_of(ctx, state: ParticleState) -> np.ndarray:
    if state.momentum is not None:
        return np.asarray(state.momentum, dtype=float)
    v = state.velocity.as_array()
    s = float(speed_of(v))
    return state.m_c * v / np.sqrt(1.0 - (s / ctx.c_m) ** 2)


def _regime(ctx, speed: float, tol: float = DEFAULT_TOL) -> RegimeTag:
    # same partition as classify_regime, without the array round trip
    if abs(speed - ctx.c) <= tol * ctx.c:
        return RegimeTag.LUMINAL
    return RegimeTag.SUBLUMINAL if speed < ctx.c else RegimeTag.SUPERLUMINAL


def _make_state(ctx, m_c, x, p, v=None) -> ParticleState:
    px, py, pz = (float(c) for c in p)
    if v is None:
        scale = 1.0 / math.sqrt(m_c * m_c + (px * px + py * py + pz * pz) / ctx.c_m**2)
        v = (px * scale, py * scale, pz * scale)
    vel = Velocity3(float(v[0]), float(v[1]), float(v[2]))
    speed = math.sqrt(vel.vx**2 + vel.vy**2 + vel.vz**2)
    return ParticleState(m_c, x, vel, _regime(ctx, speed), p)


def _force(law, t, state) -> np.ndarray:
    F = np.asarray(law(t, state), dtype=float)
    if F.shape != (3,) or not np.all(np.isfinite(F)):
        raise ForceLawNonFinite(f"force law returned {F!r} at t={t!r}")
    return F


def _rk4(ctx, law, m_c, t, x, p, dt):
    """One classical RK4 step for ``(x, p, W)`` with ``W' = F . v``."""

    def rhs(tt, xx, pp):
        v = velocity_from_momentum(ctx, m_c, pp)
        F = _force(law, tt, _make_state(ctx, m_c, xx, pp, v))
        return v, F, float(F @ v)

    v1, F1, P1 = rhs(t, x, p)
    v2, F2, P2 = rhs(t + 0.5 * dt, x + 0.5 * dt * v1, p + 0.5 * dt * F1)
    v3, F3, P3 = rhs(t + 0.5 * dt, x + 0.5 * dt * v2, p + 0.5 * dt * F2)
    v4, F4, P4 = rhs(t + dt, x + dt * v3, p + dt * F3)
    x_new = x + dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4)
    p_new = p + dt / 6.0 * (F1 + 2.0 * F2 + 2.0 * F3 + F4)
    work = dt / 6.0 * (P1 + 2.0 * P2 + 2.0 * P3 + P4)
    return x_new, p_new, work


def _check_inputs(state: ParticleState, dt: float) -> None:
    if not dt > 0.0 or not np.isfinite(dt):
        raise NonPositiveStep(f"time step must be positive, got {dt!r}")
    if not state.m_c > 0.0:
        raise SuperluminalError("dynamics needs a positive characteristic mass")


def step_state(
    ctx: InvariantSpeedContext, law: ForceLaw, state: ParticleState, dt: float, t: float = 0.0
) -> ParticleState:
    """Advance ``state`` from time ``t`` to ``t + dt`` with one RK4 step.

    The returned state carries its momentum, so chained calls do not lose
    precision converting back and forth through the velocity.
    """
    _check_inputs(state, dt)
    p = _momentum_of(ctx, state)
    x, p, _ = _rk4(ctx, law, state.m_c, t, np.asarray(state.position, dtype=float), p, dt)
    return _make_state(ctx, state.m_c, x, p)


@dataclass
class TrajectoryRecord:
    """Sampled solution of the equations of motion.

    Arrays are indexed by sample; ``work`` is the running integral of
    ``F . v`` carried alongside the state by the same RK4 step.
    """

    t: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    momentum: np.ndarray
    energy: np.ndarray
    work: np.ndarray
    m_c: float
    dt: float
    integrator: str = "rk4"

    def __len__(self) -> int:
        return len(self.t)

    def work_energy_residual(self) -> float:
        """``|(E_end - E_0) - W| / max(|E_end - E_0|, |W|)``; zero when both vanish."""
        dE = float(self.energy[-1] - self.energy[0])
        W = float(self.work[-1])
        scale = max(abs(dE), abs(W))
        return 0.0 if scale == 0.0 else abs(dE - W) / scale

    def rows(self):
        """Yield ``(t, x, y, z, vx, vy, vz, px, py, pz, E)`` tuples."""
        for i in range(len(self.t)):
            yield (
                float(self.t[i]),
                *map(float, self.position[i]),
                *map(float, self.velocity[i]),
                *map(float, self.momentum[i]),
                float(self.energy[i]),
            )


def simulate_trajectory(
    ctx: InvariantSpeedContext,
    law: ForceLaw,
    initial: ParticleState,
    dt: float,
    n_steps: int,
    t0: float = 0.0,
) -> TrajectoryRecord:
    """Integrate ``n_steps`` RK4 steps and record all ``n_steps + 1`` samples."""
    _check_inputs(initial, dt)
    if n_steps < 1:
        raise SuperluminalError(f"n_steps must be >= 1, got {n_steps!r}")
    m_c = initial.m_c
    n = n_steps + 1
    t = t0 + dt * np.arange(n)
    xs = np.empty((n, 3))
    ps = np.empty((n, 3))
    work = np.zeros(n)
    xs[0] = initial.position
    ps[0] = _momentum_of(ctx, initial)
    for i in range(n_steps):
        xs[i + 1], ps[i + 1], dW = _rk4(ctx, law, m_c, t[i], xs[i], ps[i], dt)
        work[i + 1] = work[i] + dW
    vs = velocity_from_momentum(ctx, m_c, ps)
    return TrajectoryRecord(t, xs, vs, ps, energy_from_momentum(ctx, m_c, ps), work, m_c, dt)


def power_residual(ctx: InvariantSpeedContext, record: TrajectoryRecord, law: ForceLaw) -> float:
    """Normalised mismatch between central-difference ``dE/dt`` and ``F . v``.

    Raises
    ------
    TooFewSamples
        If the record holds fewer than three samples.
    """
    if len(record) < 3:
        raise TooFewSamples("power_residual needs at least 3 samples")
    dEdt = (record.energy[2:] - record.energy[:-2]) / (record.t[2:] - record.t[:-2])
    power = np.empty_like(dEdt)
    for j, i in enumerate(range(1, len(record) - 1)):
        state = _make_state(ctx, record.m_c, record.position[i], record.momentum[i])
        power[j] = _force(law, float(record.t[i]), state) @ record.velocity[i]
    scale = np.max(np.abs(dEdt))
    if scale == 0.0:
        return float(np.max(np.abs(power)))
    return float(np.max(np.abs(dEdt - power)) / scale)


def observed_order(errors) -> np.ndarray:
    """Convergence orders ``log2(e_i / e_{i+1})`` for errors at successively halved steps."""
    errors = np.asarray(errors, dtype=float)
    return np.log2(errors[:-1] / errors[1:])
