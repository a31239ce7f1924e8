"""Mass-velocity law, four-momentum, energy and photon relations.

Masses follow the law ``m(v) = m_c sqrt((c_m^2 - c^2) / (c_m^2 - v^2))``,
normalised so that ``m(c) = m_c``. It is applied on the whole range
``0 <= |v| < c_m``. The ordinary Einstein law (speed limit ``c``) is kept
separately as :func:`einstein_mass` and is never mixed into the ``c_m``
formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FourVector,
    InvariantSpeedContext,
    SpeedBelowLight,
    SpeedExceedsMaximum,
    SuperluminalError,
    Velocity3,
    _components,
    as_real,
    check_below_max,
    speed_of,
)


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _speed(ctx, v):
    """Speed magnitude of a Velocity3, or of scalar/array speeds (sign ignored)."""
    s = speed_of(v) if isinstance(v, Velocity3) else np.abs(as_real(v))
    return check_below_max(ctx, s, "|v|")


@dataclass(frozen=True)
class FourMomentum:
    E: float | np.ndarray
    px: float | np.ndarray = 0.0
    py: float | np.ndarray = 0.0
    pz: float | np.ndarray = 0.0

    @property
    def p(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.px, self.py, self.pz), axis=-1)

    def as_four_vector(self, ctx: InvariantSpeedContext) -> FourVector:
        return FourVector(np.asarray(self.E) / ctx.c_m, self.px, self.py, self.pz)


@dataclass(frozen=True)
class PhotonSpec:
    """Frequency ``nu`` at speed ``c`` and the photon speed ``v`` in ``[c, c_m)``."""

    nu: float
    v: float


def mass_of_velocity(ctx: InvariantSpeedContext, m_c, v):
    """Mass at speed ``|v|`` for characteristic mass ``m_c``.

    ``v`` is a Velocity3 or a (possibly batched) scalar speed.

    Raises
    ------
    SpeedExceedsMaximum
        If ``|v| >= c_m`` (the mass diverges there).
    """
    s = _speed(ctx, v)
    cm2 = ctx.c_m**2
    return _out(np.asarray(m_c) * np.sqrt((cm2 - ctx.c**2) / (cm2 - s * s)))


def einstein_mass(ctx: InvariantSpeedContext, m0, v):
    """Ordinary relativistic mass ``m0 / sqrt(1 - v^2/c^2)`` (limit speed ``c``).

    Only meaningful for ``|v| < c``; used for regression against standard
    special relativity.
    """
    s = np.asarray(_speed(ctx, v))
    if np.any(s >= ctx.c):
        raise SpeedExceedsMaximum("the Einstein mass law needs |v| < c")
    return _out(np.asarray(m0) / np.sqrt(1.0 - (s / ctx.c) ** 2))


def invariant_mass_product(ctx: InvariantSpeedContext, m_c, v):
    """``m(v) sqrt(1 - v^2/c_m^2)``; equals ``m_c sqrt(1 - c^2/c_m^2)`` for all v."""
    s = _speed(ctx, v)
    return _out(mass_of_velocity(ctx, m_c, s) * np.sqrt(1.0 - (s / ctx.c_m) ** 2))


def four_velocity(ctx: InvariantSpeedContext, v) -> FourVector:
    """``gamma * (c_m, v)`` in the real-metric layout; its square is ``c_m^2``."""
    vx, vy, vz = _components(v)
    s = check_below_max(ctx, speed_of(v), "|v|")
    g = 1.0 / np.sqrt(1.0 - (s / ctx.c_m) ** 2)
    return FourVector(_out(g * ctx.c_m), _out(g * vx), _out(g * vy), _out(g * vz))


def four_momentum(ctx: InvariantSpeedContext, m_c, v) -> FourMomentum:
    """Momentum ``m_c gamma v`` and energy ``m_c c_m^2 gamma``."""
    vx, vy, vz = _components(v)
    s = check_below_max(ctx, speed_of(v), "|v|")
    g = np.asarray(m_c) / np.sqrt(1.0 - (s / ctx.c_m) ** 2)
    return FourMomentum(_out(g * ctx.c_m**2), _out(g * vx), _out(g * vy), _out(g * vz))


def energy_momentum_residual(ctx: InvariantSpeedContext, fm: FourMomentum, m_c):
    """Mass-shell violation ``|E^2 - p^2 c_m^2 - m_c^2 c_m^4| / max(E^2, 1)``."""
    E = np.asarray(fm.E, dtype=float)
    p2 = (np.asarray(fm.px) ** 2 + np.asarray(fm.py) ** 2 + np.asarray(fm.pz) ** 2)
    cm2 = ctx.c_m**2
    m_c = np.asarray(m_c, dtype=float)
    res = np.abs(E * E - p2 * cm2 - m_c * m_c * cm2 * cm2) / np.maximum(E * E, 1.0)
    return _out(res)


def energy_from_mass(ctx: InvariantSpeedContext, m_v):
    """Energy ``m(v) c_m^3 / sqrt(c_m^2 - c^2)`` of a particle of mass ``m(v)``."""
    m_v = np.asarray(m_v, dtype=float)
    if np.any(m_v < 0.0):
        raise SuperluminalError("mass must be non-negative")
    return _out(m_v * ctx.c_m**3 / np.sqrt(ctx.c_m**2 - ctx.c**2))


def photon_mass_at_c(ctx: InvariantSpeedContext, nu):
    """Characteristic mass of a photon of frequency ``nu`` moving at ``c``.

    From ``h nu = m c_m^2 / sqrt(1 - c^2/c_m^2)`` with ``h = 2 pi hbar``.
    """
    nu = np.asarray(nu, dtype=float)
    if np.any(nu < 0.0):
        raise SuperluminalError("frequency must be non-negative")
    return _out(ctx.h * nu * np.sqrt(1.0 - (ctx.c / ctx.c_m) ** 2) / ctx.c_m**2)


def superluminal_photon(ctx: InvariantSpeedContext, spec: PhotonSpec):
    """Mass, energy and frequency of a photon of frequency ``spec.nu`` at speed ``spec.v``.

    Returns
    -------
    (mass, energy, frequency) : tuple of float
        ``frequency = nu * sqrt((c_m^2 - c^2) / (c_m^2 - v^2))`` and
        ``energy = h * frequency``.

    Raises
    ------
    SpeedBelowLight
        If ``v < c``.
    SpeedExceedsMaximum
        If ``v >= c_m``.
    """
    v = float(spec.v)
    if v < ctx.c:
        raise SpeedBelowLight(f"photon speed {v!r} is below c={ctx.c!r}")
    check_below_max(ctx, v, "photon speed")
    if not spec.nu > 0.0:
        raise SuperluminalError(f"frequency must be positive, got {spec.nu!r}")
    cm2 = ctx.c_m**2
    ratio = np.sqrt((cm2 - ctx.c**2) / (cm2 - v * v))
    h_nu = ctx.h * spec.nu
    mass = h_nu / ctx.c_m**3 * (cm2 - ctx.c**2) / np.sqrt(cm2 - v * v)
    return float(mass), float(h_nu * ratio), float(spec.nu * ratio)
