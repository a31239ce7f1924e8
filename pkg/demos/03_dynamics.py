"""Pushing a particle with a constant force: it approaches c_m, never reaches it.

The integrator advances momentum, which grows linearly without bound, and
recovers the velocity as v = p / sqrt(m_c^2 + p^2/c_m^2) < c_m.

Run with ``python3 demos/03_dynamics.py``.
"""

import numpy as np

from cmaxrel import ParticleState, constant_force, make_context, simulate_trajectory

ctx = make_context(c=1.0, c_m=2.0)
start = ParticleState.create(ctx, m_c=1.0, velocity=(1.0, 0.0, 0.0))
print("initial regime:", start.regime.value)

law = constant_force((1.0, 0.0, 0.0))
record = simulate_trajectory(ctx, law, start, dt=0.01, n_steps=5000)

for i in (0, 100, 1000, 5000):
    print(f"t = {record.t[i]:6.2f}  v = {record.velocity[i, 0]:.9f}  "
          f"p = {record.momentum[i, 0]:9.4f}  E = {record.energy[i]:9.4f}")

print("work-energy residual:", record.work_energy_residual())

# Halving the step cuts the position error by ~16: fourth order.
exact = (record.energy[200] - record.energy[0]) / 1.0
errors = []
for dt in (0.2, 0.1, 0.05):
    r = simulate_trajectory(ctx, law, start, dt, round(2.0 / dt))
    errors.append(abs(r.position[-1, 0] - exact))
print("error ratios on halving dt:", np.round(np.array(errors[:-1]) / errors[1:], 2))
