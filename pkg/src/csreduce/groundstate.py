"""Ground states by normalized gradient flow (imaginary time).

Each iteration takes a step against the energy gradient ``2 H phi``, projected
onto the tangent of the mass sphere by subtracting ``2 mu phi``, and then
rescales back to the prescribed mass.  The free kinetic part of ``H`` is
treated implicitly (it is diagonal in Fourier space) so the step is not
limited by the grid's largest wave number; the rest is explicit.  Thanks to
the projection, eigenstates of ``H`` are exact fixed points of the scheme.
Iteration stops once the Euler-Lagrange residual ``||2 H phi - 2 mu phi||`` is below
``res_tol`` and the relative energy decrease per step is below ``tol``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .dynamics1d import hamiltonian_1d
from .dynamics2d import hamiltonian_2d
from .errors import ConfigurationError, ConvergenceError
from .fields import Field1D, Field2D, Grid1D, Grid2D, check_on_grid, l2_norm
from .observables import energy_1d, energy_2d
from .params import Params1D, Params2D

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowConfig:
    dtau: float = 1e-3
    tol: float = 1e-14
    max_iters: int = 200_000
    res_tol: float = 1e-8

    def __post_init__(self):
        if not (self.dtau > 0 and self.tol > 0 and self.res_tol > 0):
            raise ConfigurationError("flow config: dtau, tol and res_tol must be positive")
        if self.max_iters < 1:
            raise ConfigurationError("flow config: max_iters must be at least 1")


def default_flow_2d(eps, **kw):
    return FlowConfig(dtau=min(1e-3, eps / 4), **kw)


def _normalize(grid, phi, m):
    return phi * np.sqrt(m) / l2_norm(grid, phi)


def _flow(grid, phi, m, ham, energy, kin, cfg: FlowConfig, fft, ifft):
    """Shared iteration.  ``ham`` is ``H``, ``kin`` the symbol treated implicitly."""
    damp = 1.0 / (1.0 + 2 * cfg.dtau * kin)
    phi = _normalize(grid, phi, m)
    energies = [energy(phi)]
    res = np.inf
    increases = 0
    drop = np.inf
    for it in range(1, cfg.max_iters + 1):
        h = ham(phi)
        mu = float(np.real(np.vdot(phi, h)) / np.real(np.vdot(phi, phi)))
        if abs(drop) < cfg.tol:
            res = l2_norm(grid, 2 * h - 2 * mu * phi)
            if res < cfg.res_tol:
                log.debug("flow converged after %d iterations, residual %.2e", it, res)
                return phi, mu, energies
        explicit = phi - 2 * cfg.dtau * (h - mu * phi - ifft(kin * fft(phi)))
        phi = _normalize(grid, ifft(damp * fft(explicit)), m)
        energies.append(energy(phi))
        drop = (energies[-2] - energies[-1]) / max(abs(energies[-1]), 1e-300)
        if drop < -1e-11:
            increases += 1
    if increases:
        log.warning("energy increased on %d iterations", increases)
    raise ConvergenceError(
        f"gradient flow did not converge in {cfg.max_iters} iterations (residual {res:.3e})", energies)


def ground_state_1d(grid: Grid1D, p: Params1D, cfg: FlowConfig = FlowConfig(), mass=1.0, phi0=None):
    """Minimize the 1D energy at fixed mass.  Returns ``(Field1D, mu)``.

    ``mu`` is the chemical potential, ``<phi, H phi> / <phi, phi>``; the
    energy trace is kept in ``field.meta["energies"]``.
    """
    if not p.trap_on and p.g_tilde > 0 and p.beta == 0:
        raise ConfigurationError(
            "well-posedness guard: without the trap, attractive cubic coupling needs the quintic term (beta != 0)")
    if phi0 is None:
        phi0 = np.exp(-grid.x ** 2 / 2)
    check_on_grid(grid, phi0)
    phi, mu, energies = _flow(
        grid, np.asarray(phi0, dtype=complex), mass,
        lambda f: hamiltonian_1d(grid, f, p),
        lambda f: energy_1d(grid, f, p),
        grid.k_odd ** 2, cfg, sfft.fft, sfft.ifft)
    return Field1D(grid, phi, name="ground_state_1d", meta={"mu": mu, "energies": energies}), mu


def ground_state_2d(grid: Grid2D, p: Params2D, cfg: FlowConfig | None = None, mass=1.0, psi0=None):
    """Minimize the 2D energy at fixed mass.  Returns ``(Field2D, mu)``.

    The gradient is ``2 H psi`` with ``H`` the full Hamiltonian of the
    dynamics, gauge and current terms included.
    """
    cfg = cfg or default_flow_2d(p.eps)
    if psi0 is None:
        psi0 = np.exp(-grid.x[None, :] ** 2 / 2 - grid.y[:, None] ** 2 / (2 * p.eps))
    check_on_grid(grid, psi0)
    kin = grid.ygrid.k_odd[:, None] ** 2 + grid.xgrid.k_odd[None, :] ** 2
    psi, mu, energies = _flow(
        grid, np.asarray(psi0, dtype=complex), mass,
        lambda f: hamiltonian_2d(grid, f, p),
        lambda f: energy_2d(grid, f, p),
        kin, cfg, sfft.fft2, sfft.ifft2)
    return Field2D(grid, psi, name="ground_state_2d", meta={"mu": mu, "energies": energies}), mu
