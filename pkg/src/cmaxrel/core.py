"""Unit system, validated primitive types and regime classification.

Everything downstream reads ``c``, ``c_m`` and ``hbar`` from an
:class:`InvariantSpeedContext`; there are no module-level constants.

Vector-like types (:class:`Velocity3`, :class:`FourVector`) store their
components as floats or as broadcastable numpy arrays, so a single instance
can carry a whole batch of velocities or events.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-12


class SuperluminalError(ValueError):
    """Base class for domain and validation errors raised by this package."""


class NonPositiveConstant(SuperluminalError):
    pass


class MaxSpeedNotAboveLightSpeed(SuperluminalError):
    pass


class SpeedExceedsMaximum(SuperluminalError):
    pass


class SpeedBelowLight(SuperluminalError):
    pass


@dataclass(frozen=True)
class InvariantSpeedContext:
    """Physical constants fixing the unit system.

    Attributes
    ----------
    c : float
        Speed of light.
    c_m : float
        Invariant maximum speed, strictly greater than ``c``.
    hbar : float
        Reduced Planck constant in the same unit system.
    """

    c: float
    c_m: float
    hbar: float

    @property
    def h(self) -> float:
        """Planck constant ``2*pi*hbar``."""
        return 2.0 * math.pi * self.hbar


def make_context(c: float, c_m: float, hbar: float = 1.0) -> InvariantSpeedContext:
    """Build a validated :class:`InvariantSpeedContext`.

    Raises
    ------
    NonPositiveConstant
        If any constant is non-finite or not strictly positive.
    MaxSpeedNotAboveLightSpeed
        If ``c_m <= c``.
    """
    for name, value in (("c", c), ("c_m", c_m), ("hbar", hbar)):
        value = float(value)
        if not math.isfinite(value) or value <= 0.0:
            raise NonPositiveConstant(f"{name} must be finite and positive, got {value!r}")
    if not c_m > c:
        raise MaxSpeedNotAboveLightSpeed(
            f"maximum speed c_m={c_m!r} must exceed light speed c={c!r}"
        )
    return InvariantSpeedContext(float(c), float(c_m), float(hbar))


def natural_context(c_m: float, hbar: float = 1.0) -> InvariantSpeedContext:
    """Context in natural units, ``c = 1`` and ``c_m`` given in units of ``c``."""
    return make_context(1.0, c_m, hbar)


class RegimeTag(enum.Enum):
    SUBLUMINAL = "subluminal"
    LUMINAL = "luminal"
    SUPERLUMINAL = "superluminal"


def _components(v):
    """Return ``(vx, vy, vz)`` from a Velocity3, FourVector-free triple or array."""
    if isinstance(v, Velocity3):
        return v.vx, v.vy, v.vz
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f"expected trailing dimension 3, got shape {arr.shape}")
    return arr[..., 0], arr[..., 1], arr[..., 2]


def speed_of(v):
    """Euclidean magnitude of a velocity (Velocity3 or array with last axis 3)."""
    vx, vy, vz = _components(v)
    return np.sqrt(vx * vx + vy * vy + vz * vz)


def as_real(x) -> np.ndarray:
    """Array of floats; extended-precision input keeps its precision."""
    arr = np.asarray(x)
    if arr.dtype == np.longdouble:
        return arr
    return arr.astype(float)


def check_below_max(ctx: InvariantSpeedContext, speed, what: str = "speed"):
    speed = as_real(speed)
    if not np.all(np.isfinite(speed)) or np.any(np.abs(speed) >= ctx.c_m):
        worst = float(np.max(np.abs(speed)))
        raise SpeedExceedsMaximum(f"{what} {worst!r} is not below c_m={ctx.c_m!r}")
    return speed


@dataclass(frozen=True)
class Velocity3:
    """Three-velocity with magnitude strictly below ``c_m``.

    Construct through :meth:`of`, which validates against a context.
    Components may be floats or equally shaped arrays.
    """

    vx: float | np.ndarray
    vy: float | np.ndarray = 0.0
    vz: float | np.ndarray = 0.0

    @classmethod
    def of(cls, ctx: InvariantSpeedContext, vx, vy=0.0, vz=0.0) -> "Velocity3":
        vx, vy, vz = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (vx, vy, vz)))
        check_below_max(ctx, np.sqrt(vx * vx + vy * vy + vz * vz), "|v|")
        if vx.ndim == 0:
            return cls(float(vx), float(vy), float(vz))
        return cls(vx, vy, vz)

    @classmethod
    def from_array(cls, ctx: InvariantSpeedContext, arr) -> "Velocity3":
        vx, vy, vz = _components(arr)
        return cls.of(ctx, vx, vy, vz)

    @property
    def speed(self):
        return speed_of(self)

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.vx, self.vy, self.vz), axis=-1).astype(float)


@dataclass(frozen=True)
class FourVector:
    """Real four-vector ``(t_component, x, y, z)`` with signature (+,-,-,-).

    For events ``t_component`` holds ``c_m * t``; for momenta it holds
    ``E / c_m``.
    """

    t_component: float | np.ndarray
    x: float | np.ndarray = 0.0
    y: float | np.ndarray = 0.0
    z: float | np.ndarray = 0.0

    @classmethod
    def event(cls, ctx: InvariantSpeedContext, t, x=0.0, y=0.0, z=0.0) -> "FourVector":
        """Event at coordinate time ``t`` and position ``(x, y, z)``."""
        return cls(ctx.c_m * np.asarray(t, dtype=float), x, y, z)

    @classmethod
    def from_array(cls, arr) -> "FourVector":
        arr = np.asarray(arr, dtype=float)
        return cls(arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3])

    def time(self, ctx: InvariantSpeedContext):
        """Coordinate time ``t_component / c_m``."""
        return np.asarray(self.t_component) / ctx.c_m

    def minkowski_square(self):
        t, x, y, z = self.t_component, self.x, self.y, self.z
        return t * t - x * x - y * y - z * z

    def as_array(self) -> np.ndarray:
        parts = np.broadcast_arrays(self.t_component, self.x, self.y, self.z)
        return np.stack(parts, axis=-1).astype(float)

    def __sub__(self, other: "FourVector") -> "FourVector":
        return FourVector(
            np.subtract(self.t_component, other.t_component),
            np.subtract(self.x, other.x),
            np.subtract(self.y, other.y),
            np.subtract(self.z, other.z),
        )


def classify_regime(
    ctx: InvariantSpeedContext, v, tol: float = DEFAULT_TOL
) -> RegimeTag:
    """Classify a single velocity as subluminal, luminal or superluminal.

    ``tol`` is relative to ``c``: speeds within ``tol * c`` of ``c`` are
    luminal.

    Raises
    ------
    SpeedExceedsMaximum
        If ``|v| >= c_m``.
    """
    speed = float(check_below_max(ctx, speed_of(v), "|v|"))
    if abs(speed - ctx.c) <= tol * ctx.c:
        return RegimeTag.LUMINAL
    if speed < ctx.c:
        return RegimeTag.SUBLUMINAL
    return RegimeTag.SUPERLUMINAL


@dataclass(frozen=True)
class ParticleState:
    """Characteristic mass, position, velocity and regime of one particle.

    ``m_c`` is the mass the particle has when moving at exactly ``c``.
    Use :meth:`create` to get the regime tag filled in consistently.
    """

    m_c: float
    position: np.ndarray
    velocity: Velocity3
    regime: RegimeTag
    momentum: np.ndarray | None = field(default=None, compare=False)

    @classmethod
    def create(
        cls,
        ctx: InvariantSpeedContext,
        m_c: float,
        position=(0.0, 0.0, 0.0),
        velocity=(0.0, 0.0, 0.0),
        tol: float = DEFAULT_TOL,
        momentum=None,
    ) -> "ParticleState":
        if not m_c >= 0.0:
            raise SuperluminalError(f"m_c must be non-negative, got {m_c!r}")
        if not isinstance(velocity, Velocity3):
            velocity = Velocity3.from_array(ctx, velocity)
        position = np.array(position, dtype=float)
        if position.shape != (3,):
            raise ValueError(f"position must have 3 components, got {position.shape}")
        if momentum is not None:
            momentum = np.array(momentum, dtype=float)
        return cls(float(m_c), position, velocity, classify_regime(ctx, velocity, tol), momentum)
