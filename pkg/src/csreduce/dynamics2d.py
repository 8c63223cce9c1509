"""Time evolution of the trapped 2D Chern-Simons-Schrodinger equation.

    i d_t psi = (-i grad + A)^2 psi + V_eps psi - g |psi|^2 psi
                - 2 beta (grad_perp w0 * J) psi,
    A = beta grad_perp w0 * |psi|^2,  J = Re[conj(psi) (-i grad + A) psi].

Time stepping is the fourth-order Runge-Kutta method in the interaction
picture of the free kinetic operator (Lawson / RK4IP): ``-Laplacian - 1/eps``
is propagated exactly in Fourier space and every other term, including the
nonlocal gauge terms, is recomputed at each of the four stages.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .errors import ConfigurationError, DomainOverflowError, InstabilityError
from .fields import Grid2D, VectorField2D, boundary_mass
from .gauge import GaugeBundle, compute_A, gauge_bundle, kernel_dot
from .params import Params2D, trap_potential

log = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def _potential(grid: Grid2D, eps):
    V = trap_potential(grid, eps)
    V.flags.writeable = False
    return V


def _kinetic_symbol(grid: Grid2D):
    # the square of the first-derivative symbol, consistent with (-i grad + A)^2
    return grid.ygrid.k_odd[:, None] ** 2 + grid.xgrid.k_odd[None, :] ** 2


def check_boundary(psi, threshold):
    b = boundary_mass(psi)
    if b > threshold:
        raise DomainOverflowError(f"boundary mass {b:.3e} exceeds {threshold:.1e} of peak density")
    return b


def hamiltonian_2d(grid: Grid2D, psi, p: Params2D, free_kinetic=True):
    """``H psi = d E / d conj(psi)``.

    With ``free_kinetic=False`` the free part ``-Laplacian psi`` is left out
    (the stepping scheme treats it exactly).
    """
    rho = np.abs(psi) ** 2
    A = compute_A(grid, rho, p.beta, p.gauge_bc)
    kx = grid.xgrid.k_odd[None, :]
    ky = grid.ygrid.k_odd[:, None]
    # per-axis transforms: each derivative only needs a 1D pass
    Fx = sfft.fft(psi, axis=1)
    Fy = sfft.fft(psi, axis=0)
    Dx = sfft.ifft(Fx * kx, axis=1) + A.x * psi
    Dy = sfft.ifft(Fy * ky, axis=0) + A.y * psi
    sx = kx * sfft.fft(Dx, axis=1)
    sy = ky * sfft.fft(Dy, axis=0)
    if not free_kinetic:
        sx -= kx ** 2 * Fx
        sy -= ky ** 2 * Fy
    out = sfft.ifft(sx, axis=1) + sfft.ifft(sy, axis=0) + A.x * Dx + A.y * Dy
    out += (_potential(grid, p.eps) - p.g * rho) * psi
    if p.current_term and p.beta != 0:
        c = np.conj(psi)
        J_x, J_y = (c * Dx).real, (c * Dy).real
        out -= 2 * p.beta * kernel_dot(grid, VectorField2D(J_x, J_y), p.gauge_bc) * psi
    return out


def rhs_2d(grid: Grid2D, psi, p: Params2D):
    """``d_t psi = -i H psi``."""
    return -1j * hamiltonian_2d(grid, psi, p)


def energy_gradient_2d(grid: Grid2D, psi, p: Params2D):
    """Real-inner-product gradient of the energy, ``2 H psi``."""
    return 2 * hamiltonian_2d(grid, psi, p)


@dataclass
class State2D:
    t: float
    psi: np.ndarray
    bundle: GaugeBundle | None = field(default=None, repr=False)

    def gauge(self, grid, p):
        if self.bundle is None:
            self.bundle = gauge_bundle(grid, self.psi, p.beta, p.gauge_bc)
        return self.bundle


# RK4 is stable on the imaginary axis up to |lambda dt| = 2 sqrt(2)
RK4_IMAG_BOUND = 2 * np.sqrt(2)


def stability_guard(grid: Grid2D, p: Params2D):
    """The trap is stepped explicitly; its largest value must stay inside the RK4 region."""
    vmax = grid.Lx ** 2 + grid.Ly ** 2 / p.eps ** 2
    if p.dt * vmax >= RK4_IMAG_BOUND:
        raise ConfigurationError(
            f"RK4 stability guard: dt * max(V) = {p.dt * vmax:.3g} exceeds {RK4_IMAG_BOUND:.3f}")


class _Stepper:
    def __init__(self, grid, p: Params2D):
        stability_guard(grid, p)
        self.grid, self.p = grid, p
        h = p.dt
        sym = _kinetic_symbol(grid) - 1.0 / p.eps
        self.half = np.exp(-0.5j * h * sym)

    def _n(self, psi):
        return -1j * hamiltonian_2d(self.grid, psi, self.p, free_kinetic=False) - 1j / self.p.eps * psi

    def _prop(self, psi):
        return sfft.ifft2(self.half * sfft.fft2(psi))

    def __call__(self, psi):
        h = self.p.dt
        psi_i = self._prop(psi)
        k1 = self._prop(self._n(psi))
        k2 = self._n(psi_i + 0.5 * h * k1)
        k3 = self._n(psi_i + 0.5 * h * k2)
        k4 = self._n(self._prop(psi_i + h * k3))
        return self._prop(psi_i + h / 6 * (k1 + 2 * k2 + 2 * k3)) + h / 6 * k4


def step(grid: Grid2D, state: State2D, p: Params2D, _stepper=None):
    """Advance by one step of size ``p.dt``."""
    stepper = _stepper or _Stepper(grid, p)
    psi = stepper(state.psi)
    t = state.t + p.dt
    if not np.all(np.isfinite(psi)):
        raise InstabilityError(t)
    return State2D(t, psi)


def evolve_2d(grid: Grid2D, psi0, p: Params2D, observers=(), stride=1, t0=0.0):
    """Integrate to ``t0 + p.t_end``.

    Each observer is called as ``obs(state, prev_state)`` at ``t0`` (with
    ``prev_state=None``) and then after every ``stride`` steps, where
    ``prev_state`` is the state one step earlier.  Returns the final state.
    """
    nsteps = int(round(p.t_end / p.dt))
    stepper = _Stepper(grid, p)
    state = State2D(t0, np.asarray(psi0, dtype=complex))
    check_boundary(state.psi, p.boundary_threshold)
    for obs in observers:
        obs(state, None)
    for n in range(1, nsteps + 1):
        prev = state
        state = step(grid, prev, p, stepper)
        if n % stride == 0 or n == nsteps:
            check_boundary(state.psi, p.boundary_threshold)
            for obs in observers:
                obs(state, prev)
    log.debug("evolve_2d finished %d steps at t = %g", nsteps, state.t)
    return state
