"""Dimensional reduction: transverse profile, ansatz, projector and the
consistency residual between the projected 2D and the 1D right-hand sides.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .dynamics1d import hamiltonian_1d
from .dynamics2d import hamiltonian_2d
from .errors import ConfigurationError, DimensionError
from .fields import Grid1D, Grid2D, check_on_grid
from .gauge import compute_A, compute_betaS, compute_T, sgn_convolve
from .params import Params1D, Params2D, strip_grid, validate_grid


@dataclass(frozen=True)
class TransverseProfile:
    eps: float
    grid: Grid1D
    u: np.ndarray
    f: np.ndarray

    @property
    def erf_error(self):
        return float(np.max(np.abs(self.f - erf(self.grid.x / np.sqrt(self.eps)))))


def transverse_ground_state(y, eps):
    return (np.pi * eps) ** -0.25 * np.exp(-y ** 2 / (2 * eps))


def build_profile(eps, grid_y: Grid1D, rule="spectral"):
    """Sample ``u_eps`` and ``f = sgn * u_eps^2`` on the transverse grid.

    ``f`` goes through the same sign-convolution as the 1D-adapted gauge
    potential; its distance to ``erf(y/sqrt(eps))`` is available as
    :attr:`TransverseProfile.erf_error`.
    """
    w = np.sqrt(eps)
    if grid_y.L < 6 * w * (1 - 1e-12):
        raise ConfigurationError(f"resolution guard: Ly = {grid_y.L:.4g} < 6 sqrt(eps)")
    if grid_y.d > w / 4 * (1 + 1e-12):
        raise ConfigurationError(f"resolution guard: dy = {grid_y.d:.4g} > sqrt(eps)/4")
    u = transverse_ground_state(grid_y.x, eps)
    f = sgn_convolve(grid_y, u ** 2, rule)
    for a in (u, f):
        a.flags.writeable = False
    return TransverseProfile(eps, grid_y, u, f)


def _check_compatible(grid: Grid2D, profile: TransverseProfile, grid1: Grid1D | None = None):
    if profile.grid != grid.ygrid:
        raise DimensionError("transverse profile does not match the 2D grid's y-axis")
    if grid1 is not None and grid1 != grid.xgrid:
        raise DimensionError("1D grid does not match the 2D grid's x-axis")


def ansatz_phase(grid: Grid2D, rho, beta, bc="strip"):
    """``beta*S`` for a density, via ``A``, ``T`` and the change of gauge."""
    if beta == 0:
        return np.zeros(grid.shape)
    A = compute_A(grid, rho, beta, bc)
    T = compute_T(grid, rho, beta)
    return compute_betaS(grid, A, T, bc)


def build_ansatz(grid: Grid2D, phi, profile: TransverseProfile, beta, bc="strip"):
    """``psi = phi(x) u_eps(y) exp(-i beta S)`` with ``S`` built from ``|phi u_eps|^2``."""
    _check_compatible(grid, profile)
    check_on_grid(grid.xgrid, phi)
    prod = np.outer(profile.u, phi)
    theta = ansatz_phase(grid, np.abs(prod) ** 2, beta, bc)
    return prod * np.exp(-1j * theta)


def project_to_1d(grid: Grid2D, psi, profile: TransverseProfile, beta, bc="strip", theta=None):
    """``phi(x) = int psi exp(i beta S) u_eps dy``.

    ``beta*S`` is recomputed from ``|psi|^2`` unless a (frozen) ``theta`` is
    supplied.
    """
    _check_compatible(grid, profile)
    check_on_grid(grid, psi)
    if theta is None:
        theta = ansatz_phase(grid, np.abs(psi) ** 2, beta, bc)
    return np.sum(psi * np.exp(1j * theta) * profile.u[:, None], axis=0) * grid.dy


def projected_hamiltonian(grid: Grid2D, phi, profile, p: Params2D):
    """Project ``H psi`` for the ansatz built on ``phi``, with the ansatz phase."""
    prod = np.outer(profile.u, phi)
    theta = ansatz_phase(grid, np.abs(prod) ** 2, p.beta, p.gauge_bc)
    psi = prod * np.exp(-1j * theta)
    Hpsi = hamiltonian_2d(grid, psi, p)
    return project_to_1d(grid, Hpsi, profile, p.beta, p.gauge_bc, theta=theta)


def quintic_coefficient(grid1: Grid1D, phi, h_proj, p1: Params1D):
    """Least-squares coefficient ``c`` of ``|phi|^4 phi`` in ``h_proj - L phi``.

    ``L`` is the 1D operator without its quintic term.
    """
    lin = hamiltonian_1d(grid1, phi, p1.with_(beta=0.0))
    q = np.abs(phi) ** 4 * phi
    return float(np.real(np.vdot(q, h_proj - lin)) / np.real(np.vdot(q, q)))


@dataclass
class ResidualRow:
    eps: float
    beta: float
    g: float
    residual: float
    quintic_fit: float
    runtime_s: float


def rhs_consistency_residual(grid1: Grid1D, phi, beta, g, eps_list, ny=256, ly_factor=7.0,
                             current_term=True, bc="strip"):
    """``r(eps) = || project(rhs_2d(ansatz(phi))) - rhs_1d(phi) ||`` for each eps.

    Each eps gets its own wave-guide grid with the x-axis of ``grid1``.
    """
    rows = []
    for eps in eps_list:
        t0 = time.perf_counter()
        grid = strip_grid(grid1.n, ny, grid1.L, eps, ly_factor)
        validate_grid(grid, eps)
        profile = build_profile(eps, grid.ygrid)
        p2 = Params2D(beta=beta, g=g, eps=eps, dt=min(1e-3, eps / 4), gauge_bc=bc, current_term=current_term)
        p1 = Params1D.from_2d(p2)
        h_proj = projected_hamiltonian(grid, phi, profile, p2)
        h_1d = hamiltonian_1d(grid1, phi, p1)
        r = np.sqrt(np.sum(np.abs(h_proj - h_1d) ** 2) * grid1.d)
        c = quintic_coefficient(grid1, phi, h_proj, p1) if beta != 0 else float("nan")
        rows.append(ResidualRow(eps, beta, g, float(r), c, time.perf_counter() - t0))
    return rows
