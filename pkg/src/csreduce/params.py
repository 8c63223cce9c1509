"""Physical and numerical parameter blocks."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError
from .fields import Grid2D
from .gauge import BOUNDARY_CONDITIONS

# dt * e_eps must resolve the transverse gap e_eps = 1/eps
MAX_DT_GAP = 0.5


def g_tilde(g, eps):
    """Effective cubic coupling ``g * int u_eps^4 = g / sqrt(2 pi eps)``."""
    return g / np.sqrt(2 * np.pi * eps)


@dataclass(frozen=True)
class Params2D:
    """Trapped Chern-Simons-Schrodinger problem.

    ``current_term`` switches off the ``-2 beta (grad_perp w0 * J) psi``
    term of the equation of motion; it exists only for the quintic
    coefficient bookkeeping and is never off in a physical run.
    """

    beta: float = 0.0
    g: float = 0.0
    eps: float = 0.1
    dt: float = 1e-3
    t_end: float = 1.0
    gauge_bc: str = "strip"
    current_term: bool = True
    boundary_threshold: float = 1e-6

    def __post_init__(self):
        if not self.eps > 0:
            raise ConfigurationError(f"eps = {self.eps} must be positive")
        if not self.dt > 0:
            raise ConfigurationError(f"dt = {self.dt} must be positive")
        if self.dt / self.eps > MAX_DT_GAP:
            raise ConfigurationError(
                f"transverse-gap guard: dt/eps = {self.dt / self.eps:.3g} exceeds {MAX_DT_GAP}")
        if self.gauge_bc not in BOUNDARY_CONDITIONS:
            raise ConfigurationError(f"gauge_bc must be one of {BOUNDARY_CONDITIONS}")

    @property
    def g_tilde(self):
        return g_tilde(self.g, self.eps)

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class Params1D:
    beta: float = 0.0
    g_tilde: float = 0.0
    trap_on: bool = True
    dt: float = 1e-3
    t_end: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt = {self.dt} must be positive")

    @classmethod
    def from_2d(cls, p: Params2D):
        return cls(beta=p.beta, g_tilde=p.g_tilde, trap_on=True, dt=p.dt, t_end=p.t_end)

    def with_(self, **kw):
        return replace(self, **kw)


def trap_potential(grid: Grid2D, eps):
    """``x^2 + y^2/eps^2 - 1/eps``; the shift makes the transverse ground energy zero."""
    X, Y = grid.mesh
    return X ** 2 + Y ** 2 / eps ** 2 - 1.0 / eps


def strip_grid(nx, ny, Lx, eps, ly_factor=7.0):
    """Wave-guide grid whose y half-width scales with the transverse width ``sqrt(eps)``."""
    return Grid2D(nx, ny, Lx, ly_factor * np.sqrt(eps))


def validate_grid(grid: Grid2D, eps):
    """Resolution guards for the transverse ground state."""
    w = np.sqrt(eps)
    if grid.Ly < 6 * w * (1 - 1e-12):
        raise ConfigurationError(f"resolution guard: Ly = {grid.Ly:.4g} < 6 sqrt(eps) = {6 * w:.4g}")
    if grid.dy > w / 4 * (1 + 1e-12):
        raise ConfigurationError(f"resolution guard: dy = {grid.dy:.4g} > sqrt(eps)/4 = {w / 4:.4g}")
