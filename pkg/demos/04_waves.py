"""Plane waves of the c_m Klein-Gordon and Dirac-like equations on a periodic grid.

Both equations share the dispersion relation omega^2 = c_m^2 k^2 + (m_c c_m^2/hbar)^2.
We evolve single modes and read their frequency off the phase rotation.

Run with ``python3 demos/04_waves.py``.
"""

import math

import numpy as np

from cmaxrel import make_context
from cmaxrel.wavesolver import (
    SolverParams,
    dirac_max_frequency,
    dirac_plane_wave,
    evolve_dirac,
    kg_dispersion,
    measure_dirac_frequency,
    measure_dispersion,
    spinor_norm,
    wavenumber,
)

ctx = make_context(c=1.0, c_m=2.0, hbar=1.0)
n, length = 256, 2 * math.pi

print(" mode   omega (leapfrog)   omega (exact)")
for mode in (0, 1, 4, 8):
    w = measure_dispersion(ctx, 1.0, n, length, mode)
    print(f"{mode:5d}   {w:16.8f}   {kg_dispersion(ctx, 1.0, wavenumber(mode, length)):13.8f}")

print("massless mode 1:", measure_dispersion(ctx, 0.0, n, length, 1), "vs c_m * k =", ctx.c_m)

spinor = dirac_plane_wave(ctx, 1.0, n, length, mode_index=3)
params = SolverParams(dt=0.5 / dirac_max_frequency(ctx, 1.0, spinor.dx), n_steps=1000)
w = measure_dirac_frequency(ctx, spinor, 1.0, 3, params)
after = evolve_dirac(ctx, spinor, 1.0, params)
print(f"\nDirac mode 3: omega = {w:.10f}, exact {kg_dispersion(ctx, 1.0, 3.0):.10f}")
print("norm drift over 1000 steps:", abs(spinor_norm(after) / spinor_norm(spinor) - 1))
