"""Two identical particles merging, checked in the lab frame.

In the centre-of-mass frame the particles approach at +v' and -v'; the
centre of mass moves at v through the lab. With the c_m mass law the lab
momentum before the merge equals the momentum of the merged pair, to
round-off, for any allowed (v, v'). Unequal masses break it.

Run with ``python3 demos/02_collision.py``.
"""

import numpy as np

from cmaxrel import CollisionScenario, make_context, momentum_conservation_residual
from cmaxrel.collision import collision_report

ctx = make_context(c=1.0, c_m=2.0)

report = collision_report(ctx, CollisionScenario(1.0, 1.0, v_cm=1.2, v_prime=0.5))
for key in ("v1", "v2", "regime1", "regime2", "m1", "m2", "momentum_residual"):
    print(f"{key:>18}: {report[key]}")

rng = np.random.default_rng(0)
v, vp = rng.uniform(-2, 2, (2, 100_000))
same = CollisionScenario(np.ones(v.size), np.ones(v.size), v, vp)
print("\nidentical particles, worst residual over 1e5 scenarios:",
      np.max(momentum_conservation_residual(ctx, same)))

unequal = CollisionScenario(np.ones(v.size), np.full(v.size, 2.0), v, vp)
print("unequal masses, median residual:",
      np.median(momentum_conservation_residual(ctx, unequal)))
