"""Generalized Lorentz boost along x, velocity composition and interval."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FourVector,
    InvariantSpeedContext,
    SpeedExceedsMaximum,
    SuperluminalError,
    Velocity3,
    _components,
    check_below_max,
    speed_of,
)


class BoostAtMaximumSpeed(SuperluminalError):
    pass


class CompositionSingularity(SuperluminalError):
    pass


class ImaginaryProperTime(SuperluminalError):
    pass


@dataclass(frozen=True)
class BoostParameter:
    """Signed velocity of frame S' relative to S along the shared x axis."""

    v_rel: float

    def __neg__(self) -> "BoostParameter":
        return BoostParameter(-self.v_rel)


def _boost_speed(ctx: InvariantSpeedContext, b):
    v = np.asarray(b.v_rel if isinstance(b, BoostParameter) else b, dtype=float)
    if not np.all(np.isfinite(v)) or np.any(np.abs(v) >= ctx.c_m):
        worst = float(np.max(np.abs(v)))
        raise BoostAtMaximumSpeed(f"|v_rel|={worst!r} must be below c_m={ctx.c_m!r}")
    return float(v) if v.ndim == 0 else v


def boost_event(ctx: InvariantSpeedContext, b, event_primed: FourVector) -> FourVector:
    """Map an event from the moving frame S' into S.

    ``x = (x' + v t') / sqrt(1 - v^2/c_m^2)``, ``t = (t' + v x'/c_m^2) / sqrt(...)``,
    with y and z unchanged. Works elementwise on batched events; ``b`` may
    also be an array of speeds broadcasting against the event components.

    Raises
    ------
    BoostAtMaximumSpeed
        If ``|v_rel| >= c_m``.
    """
    v = _boost_speed(ctx, b)
    beta = v / ctx.c_m
    g = 1.0 / np.sqrt(1.0 - beta * beta)
    ct, x = np.asarray(event_primed.t_component), np.asarray(event_primed.x)
    return FourVector(
        g * (ct + beta * x),
        g * (x + beta * ct),
        event_primed.y,
        event_primed.z,
    )


def inverse_boost_event(ctx: InvariantSpeedContext, b, event: FourVector) -> FourVector:
    """Map an event from S back into S' (boost with ``-v_rel``)."""
    return boost_event(ctx, -_boost_speed(ctx, b), event)


def _compose(ctx, v, ux, uy, uz):
    ux, uy, uz = (np.asarray(a, dtype=float) for a in (ux, uy, uz))
    cm2 = ctx.c_m * ctx.c_m
    denom = 1.0 + v * ux / cm2
    if np.any(denom == 0.0):
        raise CompositionSingularity(
            f"1 + v*u'_x/c_m^2 vanishes for v={v!r} (|v*u'_x| = c_m^2)"
        )
    shrink = np.sqrt(1.0 - v * v / cm2)
    return (ux + v) / denom, uy * shrink / denom, uz * shrink / denom


def _pack(like, comps):
    if isinstance(like, Velocity3):
        if np.ndim(comps[0]) == 0:
            return Velocity3(*(float(c) for c in comps))
        return Velocity3(*comps)
    return np.stack(np.broadcast_arrays(*comps), axis=-1)


def compose_velocity(ctx: InvariantSpeedContext, b, u_primed):
    """Velocity in S of a particle moving with ``u_primed`` in S'.

    ``u_primed`` may be a :class:`Velocity3` or a raw component triple
    (array with last axis 3). Raw triples may sit exactly on ``|u'| = c_m``
    so the maximum-speed fixed point is expressible; the result has the
    same kind as the input and is not re-validated.

    Raises
    ------
    BoostAtMaximumSpeed
        If ``|v_rel| >= c_m``.
    CompositionSingularity
        If ``1 + v u'_x / c_m^2 == 0``.
    """
    v = _boost_speed(ctx, b)
    if not isinstance(u_primed, Velocity3):
        u_primed = np.asarray(u_primed, dtype=float)
        if np.any(speed_of(u_primed) > ctx.c_m * (1.0 + 1e-15)):
            raise SpeedExceedsMaximum(f"|u'| exceeds c_m={ctx.c_m!r}")
    return _pack(u_primed, _compose(ctx, v, *_components(u_primed)))


def inverse_compose_velocity(ctx: InvariantSpeedContext, b, u):
    """Velocity in S' of a particle moving with ``u`` in S (compose with ``-v``)."""
    return compose_velocity(ctx, -_boost_speed(ctx, b), u)


def interval_squared(ctx: InvariantSpeedContext, a: FourVector, b: FourVector):
    """``c_m^2 dt^2 - dx^2 - dy^2 - dz^2`` between two events."""
    return (a - b).minkowski_square()


def proper_time(ctx: InvariantSpeedContext, ds_squared):
    """Proper time ``sqrt(ds^2) / c_m``; negative ``ds^2`` is rejected."""
    ds_squared = np.asarray(ds_squared, dtype=float)
    if np.any(ds_squared < 0.0):
        raise ImaginaryProperTime(
            f"ds^2={float(np.min(ds_squared))!r} < 0 has no real proper time"
        )
    tau = np.sqrt(ds_squared) / ctx.c_m
    return float(tau) if tau.ndim == 0 else tau


def gamma_factor(ctx: InvariantSpeedContext, v):
    """``1 / sqrt(1 - v^2/c_m^2)`` for a velocity (or array of velocities).

    Raises
    ------
    SpeedExceedsMaximum
        If ``|v| >= c_m``.
    """
    speed = check_below_max(ctx, speed_of(v), "|v|")
    beta = speed / ctx.c_m
    g = 1.0 / np.sqrt(1.0 - beta * beta)
    return float(g) if g.ndim == 0 else g


def gamma_from_speed(ctx: InvariantSpeedContext, speed):
    """Same as :func:`gamma_factor` for a signed scalar speed."""
    speed = check_below_max(ctx, np.abs(np.asarray(speed, dtype=float)))
    g = 1.0 / np.sqrt(1.0 - (speed / ctx.c_m) ** 2)
    return float(g) if g.ndim == 0 else g


def gamma_composition_residual(ctx: InvariantSpeedContext, v_rel, u_primed_x):
    r"""Residual of the gamma-factor composition identity for collinear speeds.

    Returns ``|(1 + u' v/c_m^2) - sqrt(1-u'^2/c_m^2) sqrt(1-v^2/c_m^2) / sqrt(1-u^2/c_m^2)|``
    where ``u`` is ``u'`` composed with ``v``. It is an identity, so the
    result is round-off sized for every valid input.
    """
    v_rel = np.asarray(v_rel, dtype=float)
    u_primed_x = np.asarray(u_primed_x, dtype=float)
    check_below_max(ctx, v_rel, "|v_rel|")
    check_below_max(ctx, u_primed_x, "|u'_x|")
    cm2 = ctx.c_m * ctx.c_m
    denom = 1.0 + v_rel * u_primed_x / cm2
    if np.any(denom == 0.0):
        raise CompositionSingularity("1 + v*u'_x/c_m^2 vanishes")
    u = (u_primed_x + v_rel) / denom
    rhs = np.sqrt(1.0 - u_primed_x**2 / cm2) * np.sqrt(1.0 - v_rel**2 / cm2)
    rhs = rhs / np.sqrt(1.0 - u * u / cm2)
    res = np.abs(denom - rhs)
    return float(res) if res.ndim == 0 else res


def compose_collinear(ctx: InvariantSpeedContext, v1, v2):
    """Single speed equivalent to boosting by ``v1`` then by ``v2`` along x."""
    return (v1 + v2) / (1.0 + v1 * v2 / (ctx.c_m * ctx.c_m))
