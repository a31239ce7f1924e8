"""Frames, velocities and masses when the invariant speed is c_m rather than c.

Natural units throughout: c = 1, and we pick c_m = 2 so that speeds between
1 and 2 are "superluminal" yet still sub-maximal.

Run with ``python3 demos/01_kinematics.py``.
"""

import numpy as np

from cmaxrel import (
    FourVector,
    PhotonSpec,
    boost_event,
    compose_velocity,
    inverse_compose_velocity,
    interval_squared,
    make_context,
    mass_of_velocity,
    invariant_mass_product,
    superluminal_photon,
)

ctx = make_context(c=1.0, c_m=2.0)

# An event one time unit after the origin, seen from a frame moving at 1.2.
# gamma = 1/sqrt(1 - 1.2^2/4) = 1.25, so x = 1.25 * 1.2 = 1.5 and t = 1.25.
event = FourVector.event(ctx, t=1.0)
moved = boost_event(ctx, 1.2, event)
print(f"boosted event: x = {float(moved.x):.6f}, t = {float(moved.time(ctx)):.6f}")

# The interval c_m^2 dt^2 - dx^2 is what all frames agree on.
origin = FourVector.event(ctx, 0.0)
print("interval before / after:",
      interval_squared(ctx, event, origin),
      float(interval_squared(ctx, moved, boost_event(ctx, 1.2, origin))))

# Composition: c_m is the fixed point, c is not.
for u in (1.0, 1.5, 2.0):
    print(f"compose(v=0.7, u={u}) -> {compose_velocity(ctx, 0.7, (u, 0, 0))[0]:.6f}")

# In the frame riding along with light (v = c), a light signal going the
# other way is seen at -2 c c_m^2 / (c^2 + c_m^2) = -1.6, between -2c and -c.
print("light seen from the light frame:", inverse_compose_velocity(ctx, 1.0, (-1.0, 0, 0))[0])

# The mass law m(v) = m_c sqrt((c_m^2 - c^2) / (c_m^2 - v^2)): finite at c,
# divergent only at c_m, and m(v) sqrt(1 - v^2/c_m^2) is the same at every v.
speeds = np.array([0.0, 0.5, 1.0, 1.5, 1.9, 1.999])
print("m(v):", np.round(mass_of_velocity(ctx, 1.0, speeds), 6))
print("invariant product:", np.round(invariant_mass_product(ctx, 1.0, speeds), 15))

# A photon pushed above c gets heavier and bluer; at v = c nothing changes.
for v in (1.0, 1.5, 1.9):
    m, E, nu = superluminal_photon(ctx, PhotonSpec(nu=1.0, v=v))
    print(f"photon at v={v}: frequency {nu:.6f}, energy {E:.6f}, mass {m:.6f}")
