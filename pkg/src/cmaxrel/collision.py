"""Collinear two-particle merge seen from the lab and centre-of-mass frames.

In the centre-of-mass frame the particles move at ``+v'`` and ``-v'``; the
CM frame itself moves at ``v`` in the lab, and after the collision both
particles move together at ``v``. The residuals below check that momentum
bookkeeping with the ``c_m`` mass law closes for identical particles.

Lab speeds close to ``c_m`` make ``c_m^2 - v^2`` ill-conditioned, so lab
masses are computed from a factored form of that gap and the residuals are
evaluated in ``numpy.longdouble`` before being returned as floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvariantSpeedContext, SuperluminalError, check_below_max, classify_regime
from .kinematics import four_momentum, invariant_mass_product, mass_of_velocity
from .xform import CompositionSingularity

EPS = 1e-300


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _ext(x) -> np.ndarray:
    return np.asarray(x, dtype=np.longdouble)


@dataclass(frozen=True)
class CollisionScenario:
    m_c1: float | np.ndarray
    m_c2: float | np.ndarray
    v_cm: float | np.ndarray
    v_prime: float | np.ndarray


def _validate(ctx: InvariantSpeedContext, s: CollisionScenario) -> None:
    if np.any(np.asarray(s.m_c1) < 0.0) or np.any(np.asarray(s.m_c2) < 0.0):
        raise SuperluminalError("characteristic masses must be non-negative")
    for name in ("v_cm", "v_prime"):
        value = np.abs(np.asarray(getattr(s, name), dtype=float))
        if not np.all(np.isfinite(value)) or np.any(value >= ctx.c_m):
            raise SuperluminalError(f"|{name}| must be below c_m={ctx.c_m!r}")


def _lab(ctx, v, vp):
    a = v * vp / ctx.c_m**2
    if np.any(1.0 + a == 0.0) or np.any(1.0 - a == 0.0):
        raise CompositionSingularity("1 +/- v v'/c_m^2 vanishes")
    return (vp + v) / (1.0 + a), (-vp + v) / (1.0 - a)


def _lab_ext(ctx, s):
    _validate(ctx, s)
    return _lab(ctx, _ext(s.v_cm), _ext(s.v_prime))


def _lab_gaps(ctx, v, vp):
    """``c_m^2 - v1^2`` and ``c_m^2 - v2^2`` without forming ``v1, v2``.

    From the composition law, ``c_m -/+ v1 = (c_m -/+ v)(c_m -/+ v') / (c_m (1 + a))``
    with ``a = v v'/c_m^2``; the product form keeps full relative accuracy
    when a lab speed sits within round-off of ``c_m``.
    """
    cm = ctx.c_m
    base = (cm - v) * (cm + v) / cm**2
    a = v * vp / cm**2
    gap1 = base * (cm - vp) * (cm + vp) / (1.0 + a) ** 2
    gap2 = base * (cm + vp) * (cm - vp) / (1.0 - a) ** 2
    return gap1, gap2


def _masses_ext(ctx, s, masses):
    if masses is not None:
        return _ext(masses[0]), _ext(masses[1])
    _lab_ext(ctx, s)  # validation and singularity guard
    gap1, gap2 = _lab_gaps(ctx, _ext(s.v_cm), _ext(s.v_prime))
    top = _ext(ctx.c_m) ** 2 - _ext(ctx.c) ** 2
    return _ext(s.m_c1) * np.sqrt(top / gap1), _ext(s.m_c2) * np.sqrt(top / gap2)


def lab_velocities(ctx: InvariantSpeedContext, s: CollisionScenario) -> tuple[float, float]:
    """Lab-frame speeds ``(v1, v2)`` of the particles moving at ``+v'`` and ``-v'`` in the CM frame.

    Scenario fields may be equally shaped arrays; all residual functions
    below then work elementwise.
    """
    _validate(ctx, s)
    v1, v2 = _lab_ext(ctx, s)
    return _out(v1), _out(v2)


def lab_masses(ctx: InvariantSpeedContext, s: CollisionScenario) -> tuple[float, float]:
    """Masses ``m(v1), m(v2)`` from the ``c_m`` mass law."""
    m1, m2 = _masses_ext(ctx, s, None)
    return _out(m1), _out(m2)


def momentum_conservation_residual(
    ctx: InvariantSpeedContext, s: CollisionScenario, masses=None
) -> float:
    """Relative violation of ``m1 v1 + m2 v2 = (m1 + m2) v``.

    ``masses`` overrides the lab masses ``(m1, m2)``; by default they come
    from :func:`mass_of_velocity`. Vanishes (to round-off) when
    ``m_c1 == m_c2``.
    """
    v1, v2 = _lab_ext(ctx, s)
    m1, m2 = _masses_ext(ctx, s, masses)
    lhs = m1 * v1 + m2 * v2
    rhs = (m1 + m2) * _ext(s.v_cm)
    return _out(np.abs(lhs - rhs) / (np.abs(m1 * v1) + np.abs(m2 * v2) + EPS))


def mass_ratio_residual(ctx: InvariantSpeedContext, s: CollisionScenario, masses=None) -> float:
    """Relative violation of ``m(v1) (1 - v v'/c_m^2) = m(v2) (1 + v v'/c_m^2)``.

    Normalised by the larger of the two sides.
    """
    _validate(ctx, s)
    m1, m2 = _masses_ext(ctx, s, masses)
    a = _ext(s.v_cm) * _ext(s.v_prime) / ctx.c_m**2
    left, right = m1 * (1.0 - a), m2 * (1.0 + a)
    return _out(np.abs(left - right) / (np.maximum(np.abs(left), np.abs(right)) + EPS))


def invariant_product_check(ctx: InvariantSpeedContext, m_c: float, speeds, masses=None) -> float:
    """Largest pairwise relative spread of ``m(v) sqrt(1 - v^2/c_m^2)`` over ``speeds``.

    ``masses`` optionally supplies ``m(v)`` for each speed instead of the
    ``c_m`` mass law, e.g. to compare against a different law.
    """
    speeds = np.atleast_1d(np.asarray(speeds, dtype=float))
    if masses is None:
        products = np.atleast_1d(invariant_mass_product(ctx, m_c, speeds))
    else:
        check_below_max(ctx, np.abs(speeds))
        masses = np.atleast_1d(np.asarray(masses, dtype=float))
        products = masses * np.sqrt(1.0 - (speeds / ctx.c_m) ** 2)
    if products.size < 2:
        return 0.0
    scale = np.max(np.abs(products))
    if scale == 0.0:
        return 0.0
    return float((np.max(products) - np.min(products)) / scale)


def collision_report(ctx: InvariantSpeedContext, s: CollisionScenario, tol: float = 1e-12) -> dict:
    """Everything known about a scenario, suitable for one JSON line.

    Energies are reported before and after the merge but conservation is
    not asserted; the final state keeps the pre-collision masses.
    """
    v1, v2 = lab_velocities(ctx, s)
    m1, m2 = lab_masses(ctx, s)
    e1 = four_momentum(ctx, s.m_c1, (v1, 0.0, 0.0)).E
    e2 = four_momentum(ctx, s.m_c2, (v2, 0.0, 0.0)).E
    e_after = four_momentum(ctx, s.m_c1 + s.m_c2, (s.v_cm, 0.0, 0.0)).E
    regimes = [classify_regime(ctx, (v, 0.0, 0.0), tol).value for v in (v1, v2)]
    return {
        "m_c1": s.m_c1,
        "m_c2": s.m_c2,
        "v_cm": s.v_cm,
        "v_prime": s.v_prime,
        "v1": v1,
        "v2": v2,
        "m1": m1,
        "m2": m2,
        "regime1": regimes[0],
        "regime2": regimes[1],
        "momentum_residual": momentum_conservation_residual(ctx, s),
        "mass_ratio_residual": mass_ratio_residual(ctx, s),
        "total_mass_before": m1 + m2,
        "total_mass_after": mass_of_velocity(ctx, s.m_c1 + s.m_c2, s.v_cm),
        "energy_before": e1 + e2,
        "energy_after": e_after,
    }

