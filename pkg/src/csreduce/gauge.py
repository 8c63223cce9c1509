"""Gauge potentials, gauge phase and currents built from a density.

Two realizations of the long-range kernel ``grad_perp(-log|x|)`` are offered:

``"periodic"``
    The box is a torus.  The kernel acts as the Fourier multiplier
    ``2*pi*i*(k_y, -k_x)/|k|^2`` with the ``k = 0`` mode dropped, so
    ``curl A = 2*pi*beta*(rho - mean(rho))``.  The missing mean acts as a
    uniform background field.

``"strip"``
    Periodic in x, free space in y (an infinite cylinder).  In the mixed
    representation ``(k_x, y)`` the kernel is ``-pi*sgn(y)*exp(-|k_x||y|)``
    for the x-component and ``-i*pi*sgn(k_x)*exp(-|k_x||y|)`` for the
    y-component.  y-convolutions are done on a twice-padded grid using the
    exact Fourier transforms of the kernels truncated at ``|y| = 2*Ly``, which
    is spectrally accurate for densities that vanish at the y-edges.
    Here ``curl A = 2*pi*beta*rho`` with no background, and ``A - T`` is an
    exact gradient, so the change of gauge to the 1D-adapted potential ``T``
    is realized without remainder.

The strip convention is the one used by the dynamics and the reduction
checks; the periodic one is kept for flux-attachment diagnostics on the torus.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .errors import InputError
from .fields import Grid1D, Grid2D, VectorField2D, check_on_grid

BOUNDARY_CONDITIONS = ("periodic", "strip")
NEGATIVE_DENSITY_TOL = 1e-12


def _check_bc(bc):
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown gauge boundary convention {bc!r}; use one of {BOUNDARY_CONDITIONS}")


def clamp_density(rho):
    rho = np.asarray(rho, dtype=float)
    if rho.size and rho.min() < -NEGATIVE_DENSITY_TOL:
        raise InputError(f"density has negative entries down to {rho.min():.3e}")
    return np.maximum(rho, 0.0)


# --- truncated-kernel transforms -------------------------------------------

def _odd_hat(a, q, R):
    """Transform of ``sgn(y) exp(-a|y|)`` restricted to ``|y| < R``."""
    den = a ** 2 + q ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -2j * (q - np.exp(-a * R) * (a * np.sin(q * R) + q * np.cos(q * R))) / den
    return np.where(den == 0, 0.0, v)


def _even_hat(a, q, R):
    """Transform of ``exp(-a|y|)`` restricted to ``|y| < R``."""
    den = a ** 2 + q ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        v = 2 * (a - np.exp(-a * R) * (a * np.cos(q * R) - q * np.sin(q * R))) / den
    return np.where(den == 0, 2 * R, v)


def _padded_q(ygrid: Grid1D):
    m = 2 * ygrid.n
    q = 2 * np.pi * np.fft.fftfreq(m, ygrid.d)
    return q, m


@lru_cache(maxsize=32)
def _sgn_multiplier(ygrid: Grid1D):
    q, m = _padded_q(ygrid)
    s = _odd_hat(0.0, q, 2 * ygrid.L)
    s[m // 2] = 0.0
    return s


@lru_cache(maxsize=16)
def _strip_multipliers(grid: Grid2D):
    """Multipliers on the (padded q, non-negative k_x) half-spectrum."""
    q, m = _padded_q(grid.ygrid)
    R = 2 * grid.Ly
    kx = grid.kx[: grid.nx // 2 + 1][None, :]
    a = np.abs(kx)
    Q = q[:, None]
    odd = _odd_hat(a, Q, R)
    odd[m // 2] = 0.0
    even = _even_hat(a, Q, R)
    sgn = np.sign(kx)
    sgn[0, -1] = 0.0
    mx = -np.pi * odd
    my = -1j * np.pi * sgn * even
    for arr in (mx, my):
        arr.flags.writeable = False
    return mx, my


@lru_cache(maxsize=16)
def _periodic_multipliers(grid: Grid2D):
    h = grid.nx // 2 + 1
    k2 = grid.k2[:, :h].copy()
    k2[0, 0] = 1.0
    kx = grid.xgrid.k_odd[None, :h]
    ky = grid.ygrid.k_odd[:, None]
    mx = 2j * np.pi * ky / k2
    my = -2j * np.pi * kx / k2
    mx[0, 0] = my[0, 0] = 0.0
    return mx, my


def _strip_forward(grid, s):
    F = np.zeros((2 * grid.ny, grid.nx // 2 + 1), dtype=complex)
    F[: grid.ny] = sfft.rfft(s, axis=1)
    return sfft.fft(F, axis=0, overwrite_x=True)


def _strip_inverse(grid, S):
    out = sfft.ifft(S, axis=0, overwrite_x=True)[: grid.ny]
    return sfft.irfft(out, n=grid.nx, axis=1)


def kernel_field(grid: Grid2D, src, bc="periodic"):
    """``grad_perp(w0) * src`` as a vector field (unit coupling)."""
    _check_bc(bc)
    check_on_grid(grid, src)
    if bc == "periodic":
        mx, my = _periodic_multipliers(grid)
        S = sfft.rfft2(src)
        return VectorField2D(sfft.irfft2(mx * S, s=grid.shape), sfft.irfft2(my * S, s=grid.shape))
    mx, my = _strip_multipliers(grid)
    S = _strip_forward(grid, src)
    return VectorField2D(_strip_inverse(grid, mx * S), _strip_inverse(grid, my * S))


def kernel_dot(grid: Grid2D, v: VectorField2D, bc="periodic"):
    """Scalar ``(grad_perp(w0)) * v``: convolution summed over components."""
    _check_bc(bc)
    check_on_grid(grid, v.x, v.y)
    if bc == "periodic":
        mx, my = _periodic_multipliers(grid)
        return sfft.irfft2(mx * sfft.rfft2(v.x) + my * sfft.rfft2(v.y), s=grid.shape)
    mx, my = _strip_multipliers(grid)
    return _strip_inverse(grid, mx * _strip_forward(grid, v.x) + my * _strip_forward(grid, v.y))


# --- gauge objects ----------------------------------------------------------

def compute_A(grid: Grid2D, rho, beta, bc="periodic"):
    """Coulomb-gauge potential ``beta * grad_perp(w0) * rho``."""
    rho = clamp_density(rho)
    if beta == 0:
        z = np.zeros(grid.shape)
        return VectorField2D(z, z.copy())
    return kernel_field(grid, rho, bc).scale(beta)


def sgn_convolve(ygrid: Grid1D, g, rule="spectral"):
    """``int sgn(y - y') g(y') dy'`` along axis 0.

    ``rule="spectral"`` convolves with the truncated sign kernel on a padded
    grid (exact for band-limited ``g`` that vanishes at the edges).
    ``rule="midpoint"`` is the cumulative-sum rule
    ``2*C(y) - h*g(y) - total`` with ``sgn(0) = 0``; it is only second order.
    """
    g = np.asarray(g)
    h = ygrid.d
    if rule == "midpoint":
        c = np.cumsum(g, axis=0) * h
        return 2 * c - h * g - c[-1]
    if rule != "spectral":
        raise ValueError(f"unknown rule {rule!r}")
    n = ygrid.n
    pad = np.zeros((2 * n,) + g.shape[1:], dtype=complex)
    pad[:n] = g
    mult = _sgn_multiplier(ygrid).reshape((-1,) + (1,) * (g.ndim - 1))
    out = np.fft.ifft(mult * np.fft.fft(pad, axis=0), axis=0)[:n]
    return out if np.iscomplexobj(g) else out.real


def compute_T(grid: Grid2D, rho, beta, rule="spectral"):
    """1D-adapted potential: ``T_x = -pi*beta*int sgn(y-y') rho(x,y') dy'``, ``T_y = 0``."""
    rho = clamp_density(rho)
    check_on_grid(grid, rho)
    tx = -np.pi * beta * sgn_convolve(grid.ygrid, rho, rule)
    return VectorField2D(tx, np.zeros(grid.shape))


def compute_betaS(grid: Grid2D, A: VectorField2D, T: VectorField2D, bc="strip"):
    """Gauge phase ``beta*S`` with ``grad(beta*S) = A - T``.

    On the strip ``A - T`` is an exact gradient and only its x-component is
    needed: ``beta*S = (A_x - T_x) / (i k_x)`` mode by mode, with the
    ``k_x = 0`` column (identically zero there) set to zero.  On the torus
    ``A - T`` is not a gradient; the least-squares potential
    ``-i k.(A - T)^ / |k|^2`` is returned instead.
    """
    _check_bc(bc)
    check_on_grid(grid, A.x, A.y, T.x, T.y)
    if bc == "strip":
        kx = grid.xgrid.k_odd
        inv = np.zeros_like(kx, dtype=complex)
        nz = kx != 0
        inv[nz] = 1.0 / (1j * kx[nz])
        return np.fft.ifft(np.fft.fft(A.x - T.x, axis=1) * inv[None, :], axis=1).real
    k2 = grid.k2.copy()
    k2[0, 0] = 1.0
    kx = grid.xgrid.k_odd[None, :]
    ky = grid.ygrid.k_odd[:, None]
    num = kx * np.fft.fft2(A.x - T.x) + ky * np.fft.fft2(A.y - T.y)
    hat = -1j * num / k2
    hat[0, 0] = 0.0
    return np.fft.ifft2(hat).real


def covariant_derivative(grid: Grid2D, psi, A: VectorField2D):
    """Components of ``(-i grad + A) psi``."""
    check_on_grid(grid, psi)
    F = np.fft.fft2(psi)
    dx = np.fft.ifft2(F * grid.xgrid.k_odd[None, :])
    dy = np.fft.ifft2(F * grid.ygrid.k_odd[:, None])
    return dx + A.x * psi, dy + A.y * psi


def compute_current(grid: Grid2D, psi, A: VectorField2D):
    """Gauge-covariant current ``Re[conj(psi) (-i grad + A) psi]``."""
    dx, dy = covariant_derivative(grid, psi, A)
    c = np.conj(psi)
    return VectorField2D((c * dx).real, (c * dy).real)


compute_current_A = compute_current
compute_current_T = compute_current


@dataclass(frozen=True)
class GaugeBundle:
    rho: np.ndarray
    A: VectorField2D
    T: VectorField2D
    betaS: np.ndarray


def gauge_bundle(grid: Grid2D, psi, beta, bc="strip"):
    rho = np.abs(psi) ** 2
    A = compute_A(grid, rho, beta, bc)
    T = compute_T(grid, rho, beta)
    return GaugeBundle(rho, A, T, compute_betaS(grid, A, T, bc))
