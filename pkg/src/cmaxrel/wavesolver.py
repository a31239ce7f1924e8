"""Free Klein-Gordon and Dirac-like fields on a periodic 1D grid.

Both equations use the maximum speed ``c_m`` as propagation speed and the
rest frequency ``mu = m_c c_m^2 / hbar`` as mass term:

* scalar:  ``psi_tt - c_m^2 psi_xx + mu^2 psi = 0``
* spinor:  ``i hbar psi_t = (-i hbar c_m alpha d/dx + m_c c_m^2 beta) psi``

with ``alpha = sigma_x`` and ``beta = sigma_z`` acting on two components.
The scalar field is stepped with second-order leapfrog on a three-point
Laplacian; the spinor with classical RK4 on a spectral derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import InvariantSpeedContext, SuperluminalError

ALPHA = np.array([[0.0, 1.0], [1.0, 0.0]])
BETA = np.array([[1.0, 0.0], [0.0, -1.0]])


class CflViolation(SuperluminalError):
    pass


class StabilityViolation(SuperluminalError):
    pass


class NonFiniteField(SuperluminalError):
    pass


@dataclass(frozen=True)
class SolverParams:
    dt: float
    n_steps: int
    cfl_safety: float = 0.5


@dataclass(frozen=True)
class ScalarFieldGrid:
    """Scalar field layer ``psi`` at time ``t`` plus its time derivative.

    After the first leapfrog step the grid also carries the previous layer
    ``psi_prev`` (at ``t - dt_prev``), which is what the scheme actually
    advances; ``dpsi_dt`` is then a second-order estimate.
    """

    psi: np.ndarray
    dpsi_dt: np.ndarray
    dx: float
    t: float = 0.0
    psi_prev: np.ndarray | None = None
    dt_prev: float | None = None

    def __post_init__(self):
        if self.psi.ndim != 1 or self.psi.size < 8:
            raise SuperluminalError("scalar grid needs a 1D array of at least 8 points")
        if self.dpsi_dt.shape != self.psi.shape:
            raise SuperluminalError("psi and dpsi_dt must have the same shape")
        if not self.dx > 0.0:
            raise SuperluminalError("dx must be positive")

    @property
    def n(self) -> int:
        return self.psi.size

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(self.n)


@dataclass(frozen=True)
class SpinorFieldGrid:
    """Two-component field, ``psi`` has shape ``(2, N)``."""

    psi: np.ndarray
    dx: float
    t: float = 0.0

    def __post_init__(self):
        if self.psi.ndim != 2 or self.psi.shape[0] != 2 or self.psi.shape[1] < 8:
            raise SuperluminalError("spinor grid needs an array of shape (2, N) with N >= 8")
        if not self.dx > 0.0:
            raise SuperluminalError("dx must be positive")

    @property
    def n(self) -> int:
        return self.psi.shape[1]

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(self.n)


def rest_frequency(ctx: InvariantSpeedContext, m_c: float) -> float:
    return m_c * ctx.c_m**2 / ctx.hbar


def kg_dispersion(ctx: InvariantSpeedContext, m_c: float, k):
    """Angular frequency ``sqrt(c_m^2 k^2 + (m_c c_m^2 / hbar)^2)`` of a plane wave."""
    w = np.sqrt((ctx.c_m * np.asarray(k, dtype=float)) ** 2 + rest_frequency(ctx, m_c) ** 2)
    return float(w) if w.ndim == 0 else w


def wavenumber(mode_index: int, length: float) -> float:
    return 2.0 * math.pi * mode_index / length


def _check_finite(psi: np.ndarray) -> None:
    if not np.all(np.isfinite(psi)):
        raise NonFiniteField("field contains non-finite values (scheme unstable?)")


def _laplacian(psi: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(psi, -1) - 2.0 * psi + np.roll(psi, 1)) / (dx * dx)


def check_cfl(ctx: InvariantSpeedContext, dt: float, dx: float, cfl_safety: float) -> float:
    """Return the Courant number ``c_m dt / dx``; raise if it exceeds ``cfl_safety``."""
    if not 0.0 < cfl_safety <= 1.0:
        raise CflViolation(f"cfl_safety must lie in (0, 1], got {cfl_safety!r}")
    if not dt > 0.0:
        raise CflViolation(f"dt must be positive, got {dt!r}")
    courant = ctx.c_m * dt / dx
    if courant > cfl_safety * (1.0 + 1e-12):
        raise CflViolation(
            f"CFL bound violated: c_m*dt/dx = {courant:.6g} > cfl_safety = {cfl_safety:.6g}"
        )
    return courant


def scalar_plane_wave(
    ctx: InvariantSpeedContext, m_c: float, n: int, length: float, mode_index: int, branch: int = 1
) -> ScalarFieldGrid:
    """Grid holding ``exp(i k x)`` with ``dpsi/dt = -i omega psi`` on the chosen branch."""
    dx = length / n
    x = dx * np.arange(n)
    k = wavenumber(mode_index, length)
    psi = np.exp(1j * k * x)
    omega = branch * kg_dispersion(ctx, m_c, k)
    return ScalarFieldGrid(psi, -1j * omega * psi, dx)


def evolve_kg(
    ctx: InvariantSpeedContext, grid: ScalarFieldGrid, m_c: float, params: SolverParams
) -> ScalarFieldGrid:
    """Advance the scalar field ``params.n_steps`` leapfrog steps.

    On a fresh grid the previous layer is built from a Taylor step using
    ``dpsi_dt`` and the equation itself, which keeps the start second order.

    Raises
    ------
    CflViolation
        If ``c_m dt / dx > cfl_safety``.
    NonFiniteField
        If the field blows up.
    """
    dt, dx = params.dt, grid.dx
    check_cfl(ctx, dt, dx, params.cfl_safety)
    mu2 = rest_frequency(ctx, m_c) ** 2
    cm2 = ctx.c_m**2
    cur = np.asarray(grid.psi, dtype=complex)
    _check_finite(cur)

    def accel(psi):
        return cm2 * _laplacian(psi, dx) - mu2 * psi

    if grid.psi_prev is not None and grid.dt_prev is not None and math.isclose(grid.dt_prev, dt):
        prev = np.asarray(grid.psi_prev, dtype=complex)
    else:
        prev = cur - dt * grid.dpsi_dt + 0.5 * dt * dt * accel(cur)

    for _ in range(params.n_steps):
        prev, cur = cur, 2.0 * cur - prev + dt * dt * accel(cur)
    _check_finite(cur)
    dpsi = (cur - prev) / dt + 0.5 * dt * accel(cur)
    return ScalarFieldGrid(cur, dpsi, dx, grid.t + params.n_steps * dt, prev, dt)


def kg_energy(ctx: InvariantSpeedContext, grid: ScalarFieldGrid, m_c: float) -> float:
    """Discrete field energy.

    With a leapfrog history this is the energy between the two stored
    layers, ``dx/2 * sum(|D_t psi|^2 + c_m^2 Re(D_x psi . conj D_x psi_prev)
    + mu^2 Re(psi . conj psi_prev))``, which the scheme conserves exactly up
    to round-off. Without history the collocated form with ``dpsi_dt`` is
    used.
    """
    dx = grid.dx
    mu2 = rest_frequency(ctx, m_c) ** 2
    cm2 = ctx.c_m**2
    psi = grid.psi

    def dplus(f):
        return (np.roll(f, -1) - f) / dx

    if grid.psi_prev is None:
        kinetic = np.abs(grid.dpsi_dt) ** 2
        gradient = cm2 * np.abs(dplus(psi)) ** 2
        mass = mu2 * np.abs(psi) ** 2
    else:
        prev = grid.psi_prev
        kinetic = np.abs((psi - prev) / grid.dt_prev) ** 2
        gradient = cm2 * np.real(dplus(psi) * np.conj(dplus(prev)))
        mass = mu2 * np.real(psi * np.conj(prev))
    return float(0.5 * dx * np.sum(kinetic + gradient + mass))


def _fit_frequency(times: np.ndarray, amplitudes: np.ndarray) -> float:
    """Angular frequency from the phase of ``a(t) ~ exp(-i omega t)`` by least squares."""
    phase = np.unwrap(np.angle(amplitudes))
    slope = np.polyfit(times, phase, 1)[0]
    return float(-slope)


def measure_dispersion(
    ctx: InvariantSpeedContext,
    m_c: float,
    n: int,
    length: float,
    mode_index: int,
    cfl_safety: float = 0.5,
    periods: float = 2.0,
) -> float:
    """Angular frequency of one Fourier mode as seen by the leapfrog scheme.

    A positive-branch plane wave is evolved for about ``periods`` periods
    and the frequency is read off the rotation of its spectral amplitude.
    """
    if not 0 <= mode_index <= n // 4:
        raise SuperluminalError(f"mode_index must lie in [0, {n // 4}], got {mode_index}")
    grid = scalar_plane_wave(ctx, m_c, n, length, mode_index)
    dt = cfl_safety * grid.dx / ctx.c_m
    omega = kg_dispersion(ctx, m_c, wavenumber(mode_index, length))
    n_steps = 256 if omega == 0.0 else max(64, math.ceil(periods * 2.0 * math.pi / omega / dt))
    params = SolverParams(dt, 1, cfl_safety)
    times = np.empty(n_steps + 1)
    amps = np.empty(n_steps + 1, dtype=complex)
    times[0], amps[0] = 0.0, np.fft.fft(grid.psi)[mode_index] / n
    for i in range(1, n_steps + 1):
        grid = evolve_kg(ctx, grid, m_c, params)
        times[i], amps[i] = grid.t, np.fft.fft(grid.psi)[mode_index] / n
    return _fit_frequency(times, amps)


def _spectral_k(n: int, dx: float) -> np.ndarray:
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return k


def _dirac_rhs(psi: np.ndarray, ik: np.ndarray, c_m: float, mu: float) -> np.ndarray:
    dpsi = np.fft.ifft(ik * np.fft.fft(psi, axis=-1), axis=-1)
    out = np.empty_like(psi)
    out[0] = -c_m * dpsi[1] - 1j * mu * psi[0]
    out[1] = -c_m * dpsi[0] + 1j * mu * psi[1]
    return out


def dirac_apply(ctx: InvariantSpeedContext, grid: SpinorFieldGrid, m_c: float) -> SpinorFieldGrid:
    """Time derivative ``dpsi/dt = (-i hbar c_m alpha d/dx + m_c c_m^2 beta) psi / (i hbar)``."""
    psi = np.asarray(grid.psi, dtype=complex)
    _check_finite(psi)
    ik = 1j * _spectral_k(grid.n, grid.dx)
    return SpinorFieldGrid(_dirac_rhs(psi, ik, ctx.c_m, rest_frequency(ctx, m_c)), grid.dx, grid.t)


def dirac_max_frequency(ctx: InvariantSpeedContext, m_c: float, dx: float) -> float:
    """Largest Dirac eigenfrequency on the grid, at ``k = pi / dx``."""
    return kg_dispersion(ctx, m_c, math.pi / dx)


def evolve_dirac(
    ctx: InvariantSpeedContext, grid: SpinorFieldGrid, m_c: float, params: SolverParams
) -> SpinorFieldGrid:
    """Advance the spinor ``params.n_steps`` RK4 steps.

    Raises
    ------
    StabilityViolation
        If ``dt * omega_max > 1`` with ``omega_max`` from :func:`dirac_max_frequency`.
    NonFiniteField
        If the field blows up.
    """
    dt = params.dt
    w_max = dirac_max_frequency(ctx, m_c, grid.dx)
    if not dt > 0.0 or dt * w_max > 1.0:
        raise StabilityViolation(
            f"stability bound violated: dt*omega_max = {dt * w_max:.6g} > 1"
        )
    psi = np.array(grid.psi, dtype=complex)
    _check_finite(psi)
    ik = 1j * _spectral_k(grid.n, grid.dx)
    mu = rest_frequency(ctx, m_c)
    c_m = ctx.c_m
    for _ in range(params.n_steps):
        k1 = _dirac_rhs(psi, ik, c_m, mu)
        k2 = _dirac_rhs(psi + 0.5 * dt * k1, ik, c_m, mu)
        k3 = _dirac_rhs(psi + 0.5 * dt * k2, ik, c_m, mu)
        k4 = _dirac_rhs(psi + dt * k3, ik, c_m, mu)
        psi = psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_finite(psi)
    return replace(grid, psi=psi, t=grid.t + params.n_steps * dt)


def spinor_norm(grid: SpinorFieldGrid) -> float:
    return float(np.sum(np.abs(grid.psi) ** 2) * grid.dx)


def dirac_symbol(ctx: InvariantSpeedContext, m_c: float, k) -> np.ndarray:
    """Hamiltonian matrix ``hbar c_m k alpha + m_c c_m^2 beta`` for each wavenumber."""
    k = np.asarray(k, dtype=float)
    return ctx.hbar * ctx.c_m * k[..., None, None] * ALPHA + m_c * ctx.c_m**2 * BETA


def dirac_plane_wave(
    ctx: InvariantSpeedContext, m_c: float, n: int, length: float, mode_index: int, branch: int = 1
) -> SpinorFieldGrid:
    """Eigenspinor of the symbol at ``k = 2 pi mode_index / length`` times ``exp(i k x)``.

    ``branch=+1`` picks the positive-energy eigenvector.
    """
    dx = length / n
    k = wavenumber(mode_index, length)
    energies, vectors = np.linalg.eigh(dirac_symbol(ctx, m_c, k))
    u = vectors[:, 1] if branch > 0 else vectors[:, 0]
    x = dx * np.arange(n)
    return SpinorFieldGrid(np.outer(u, np.exp(1j * k * x)).astype(complex), dx)


def measure_dirac_frequency(
    ctx: InvariantSpeedContext, grid: SpinorFieldGrid, m_c: float, mode_index: int, params: SolverParams
) -> float:
    """Phase rotation rate of one Fourier mode of the upper component under :func:`evolve_dirac`."""
    step = replace(params, n_steps=1)
    times = np.empty(params.n_steps + 1)
    amps = np.empty(params.n_steps + 1, dtype=complex)
    comp = 0 if np.abs(np.fft.fft(grid.psi[0])[mode_index]) > 0.0 else 1
    times[0], amps[0] = grid.t, np.fft.fft(grid.psi[comp])[mode_index]
    for i in range(1, params.n_steps + 1):
        grid = evolve_dirac(ctx, grid, m_c, step)
        times[i], amps[i] = grid.t, np.fft.fft(grid.psi[comp])[mode_index]
    return _fit_frequency(times, amps)
