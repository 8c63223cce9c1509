"""Mass, energies and conservation diagnostics."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .fields import Grid1D, Grid2D, boundary_mass, check_on_grid, div, l2_norm
from .gauge import compute_A, compute_current, covariant_derivative
from .params import Params1D, Params2D, trap_potential

log = logging.getLogger(__name__)

CSV_COLUMNS = ("t", "mass", "energy", "boundary_mass", "continuity_residual", "reduction_error")


def mass(grid, f):
    return l2_norm(grid, f) ** 2


def energy_2d(grid: Grid2D, psi, p: Params2D):
    """``int |(-i grad + A) psi|^2 + V_eps |psi|^2 - g/2 |psi|^4``.

    The kinetic part is evaluated in first-order form, so it is manifestly
    nonnegative.
    """
    check_on_grid(grid, psi)
    rho = np.abs(psi) ** 2
    A = compute_A(grid, rho, p.beta, p.gauge_bc)
    dx, dy = covariant_derivative(grid, psi, A)
    dens = np.abs(dx) ** 2 + np.abs(dy) ** 2 + trap_potential(grid, p.eps) * rho - 0.5 * p.g * rho ** 2
    return float(np.sum(dens) * grid.cell)


def energy_1d(grid: Grid1D, phi, p: Params1D):
    """``int |phi'|^2 + x^2|phi|^2 + (pi^2 beta^2/3)|phi|^6 - (g~/2)|phi|^4``."""
    check_on_grid(grid, phi)
    dphi = np.fft.ifft(1j * grid.k_odd * np.fft.fft(phi))
    rho = np.abs(phi) ** 2
    dens = np.abs(dphi) ** 2 + np.pi ** 2 * p.beta ** 2 / 3 * rho ** 3 - 0.5 * p.g_tilde * rho ** 2
    if p.trap_on:
        dens = dens + grid.x ** 2 * rho
    return float(np.sum(dens) * grid.d)


def current_divergence(grid: Grid2D, psi, p: Params2D):
    A = compute_A(grid, np.abs(psi) ** 2, p.beta, p.gauge_bc)
    J = compute_current(grid, psi, A)
    return div(grid, J)


def continuity_residual(grid: Grid2D, psi_prev, psi_next, dt, p: Params2D):
    """Relative violation of ``d_t |psi|^2 + 2 div J = 0`` across one step.

    ``div J`` at the midpoint is taken as the mean of its values at the two
    ends.  The normalization is ``max(||2 div J||, ||rho||)``: the second
    entry is the natural scale when the current vanishes (stationary states).
    """
    rate = (np.abs(psi_next) ** 2 - np.abs(psi_prev) ** 2) / dt
    divj = current_divergence(grid, psi_prev, p) + current_divergence(grid, psi_next, p)
    res = l2_norm(grid, rate + divj)
    scale = max(l2_norm(grid, divj), l2_norm(grid, np.abs(psi_next) ** 2))
    return res / scale


def energy_gap_check(grid: Grid1D, phi, p: Params1D, eps, eta=0.1):
    """Whether ``|E1D[phi]| <= eta / eps`` (transverse mode stays frozen)."""
    ok = abs(energy_1d(grid, phi, p)) <= eta / eps
    if not ok:
        log.warning("energy-gap condition violated: |E1D| > %g / eps (eps = %g)", eta, eps)
    return ok


@dataclass
class Diagnostics:
    t: float
    mass: float
    energy: float
    boundary_mass: float
    extra: dict = field(default_factory=dict)

    def row(self):
        r = {"t": self.t, "mass": self.mass, "energy": self.energy, "boundary_mass": self.boundary_mass}
        for key in CSV_COLUMNS[4:]:
            r[key] = self.extra.get(key, "")
        return r

    def finite(self):
        vals = [self.t, self.mass, self.energy, self.boundary_mass, *self.extra.values()]
        return all(math.isfinite(v) for v in vals if isinstance(v, float))


def diagnostics_2d(grid, psi, p, t, prev=None, **extra):
    d = Diagnostics(t, mass(grid, psi), energy_2d(grid, psi, p), boundary_mass(psi), dict(extra))
    if prev is not None:
        d.extra["continuity_residual"] = continuity_residual(grid, prev, psi, p.dt, p)
    return d


def diagnostics_1d(grid, phi, p, t, **extra):
    return Diagnostics(t, mass(grid, phi), energy_1d(grid, phi, p), boundary_mass(phi), dict(extra))


def write_csv(path, diagnostics):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for d in diagnostics:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in d.row().items()})


def relative_drift(values):
    v = np.asarray(values, dtype=float)
    return float(np.max(np.abs(v - v[0])) / abs(v[0]))

