"""Effective 1D cubic-quintic NLS in the loose direction of the wave-guide.

    i d_t phi = -phi'' + x^2 phi + pi^2 beta^2 |phi|^4 phi - g~ |phi|^2 phi

Every nonlinear term is a real pointwise potential, so Strang splitting
(half potential / full kinetic / half potential) is exactly unitary.
"""
from __future__ import annotations

import logging

import numpy as np

from .errors import DomainOverflowError, InstabilityError
from .fields import Grid1D, boundary_mass, check_on_grid
from .params import Params1D

log = logging.getLogger(__name__)


def nonlinear_potential(grid: Grid1D, phi, p: Params1D):
    rho = np.abs(phi) ** 2
    w = np.pi ** 2 * p.beta ** 2 * rho ** 2 - p.g_tilde * rho
    if p.trap_on:
        w = w + grid.x ** 2
    return w


def hamiltonian_1d(grid: Grid1D, phi, p: Params1D):
    """``H phi = d E1D / d conj(phi)``."""
    check_on_grid(grid, phi)
    kin = np.fft.ifft(grid.k_odd ** 2 * np.fft.fft(phi))
    return kin + nonlinear_potential(grid, phi, p) * phi


def rhs_1d(grid: Grid1D, phi, p: Params1D):
    return -1j * hamiltonian_1d(grid, phi, p)


def energy_gradient_1d(grid: Grid1D, phi, p: Params1D):
    return 2 * hamiltonian_1d(grid, phi, p)


def step_1d(grid: Grid1D, phi, p: Params1D, dt=None):
    """One Strang step; ``dt`` defaults to ``p.dt`` and may be negative."""
    dt = p.dt if dt is None else dt
    phi = np.exp(-0.5j * dt * nonlinear_potential(grid, phi, p)) * phi
    phi = np.fft.ifft(np.exp(-1j * dt * grid.k ** 2) * np.fft.fft(phi))
    phi = np.exp(-0.5j * dt * nonlinear_potential(grid, phi, p)) * phi
    return phi


def evolve_1d(grid: Grid1D, phi0, p: Params1D, observers=(), stride=1, t0=0.0,
              boundary_threshold=1e-6):
    """Strang integration to ``t0 + p.t_end``; observer protocol as in :func:`evolve_2d`.

    Observers receive ``(t, phi, prev_phi)``.  Returns ``(t, phi)``.
    """
    phi = np.asarray(phi0, dtype=complex)
    nsteps = int(round(p.t_end / p.dt))
    t = t0
    for obs in observers:
        obs(t, phi, None)
    for n in range(1, nsteps + 1):
        prev = phi
        phi = step_1d(grid, phi, p)
        t = t0 + n * p.dt
        if not np.all(np.isfinite(phi)):
            raise InstabilityError(t)
        if n % stride == 0 or n == nsteps:
            b = boundary_mass(phi)
            if b > boundary_threshold:
                raise DomainOverflowError(f"boundary mass {b:.3e} at t = {t:.4g}")
            for obs in observers:
                obs(t, phi, prev)
    log.debug("evolve_1d finished %d steps", nsteps)
    return t, phi
