"""Uniform periodic grids, spectral calculus and quadrature.

Fields are plain numpy arrays sampled on a grid; 2D arrays are row-major
with shape ``(ny, nx)`` so that ``f[j, i]`` is the value at ``(x_i, y_j)``.
All operations return new arrays and never modify their inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DimensionError

BOUNDARY_THRESHOLD = 1e-6


def _check_size(n, name):
    if n < 8 or n & (n - 1):
        raise ConfigurationError(f"{name} = {n} must be a power of two >= 8")


def _wavenumbers(n, d):
    return 2 * np.pi * np.fft.fftfreq(n, d)


def _odd_wavenumbers(n, d):
    # first-derivative multiplier; the Nyquist mode has no sign and is dropped
    k = _wavenumbers(n, d)
    k[n // 2] = 0.0
    return k


@dataclass(frozen=True)
class Grid1D:
    """Periodic sampling of ``[-L, L)`` with ``n`` points."""

    n: int
    L: float

    def __post_init__(self):
        _check_size(self.n, "n")
        if not self.L > 0:
            raise ConfigurationError(f"half-width L = {self.L} must be positive")

    @property
    def d(self):
        return 2 * self.L / self.n

    @cached_property
    def x(self):
        return -self.L + self.d * np.arange(self.n)

    @cached_property
    def k(self):
        return _wavenumbers(self.n, self.d)

    @cached_property
    def k_odd(self):
        return _odd_wavenumbers(self.n, self.d)

    @property
    def shape(self):
        return (self.n,)


@dataclass(frozen=True)
class Grid2D:
    """Periodic sampling of ``[-Lx, Lx) x [-Ly, Ly)``."""

    nx: int
    ny: int
    Lx: float
    Ly: float

    def __post_init__(self):
        _check_size(self.nx, "nx")
        _check_size(self.ny, "ny")
        if not (self.Lx > 0 and self.Ly > 0):
            raise ConfigurationError("box half-widths must be positive")

    @property
    def dx(self):
        return 2 * self.Lx / self.nx

    @property
    def dy(self):
        return 2 * self.Ly / self.ny

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def cell(self):
        return self.dx * self.dy

    @cached_property
    def xgrid(self):
        return Grid1D(self.nx, self.Lx)

    @cached_property
    def ygrid(self):
        return Grid1D(self.ny, self.Ly)

    @property
    def x(self):
        return self.xgrid.x

    @property
    def y(self):
        return self.ygrid.x

    @cached_property
    def mesh(self):
        X, Y = np.meshgrid(self.x, self.y)
        X.flags.writeable = False
        Y.flags.writeable = False
        return X, Y

    @property
    def kx(self):
        return self.xgrid.k

    @property
    def ky(self):
        return self.ygrid.k

    @cached_property
    def k2(self):
        return self.ky[:, None] ** 2 + self.kx[None, :] ** 2


class VectorField2D(NamedTuple):
    """Real two-component field; ``x`` and ``y`` have the grid's shape."""

    x: np.ndarray
    y: np.ndarray

    def __add__(self, other):
        return VectorField2D(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return VectorField2D(self.x - other.x, self.y - other.y)

    def scale(self, c):
        return VectorField2D(c * self.x, c * self.y)


@dataclass(frozen=True)
class Field1D:
    grid: Grid1D
    values: np.ndarray
    t: float = 0.0
    name: str = "phi"
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Field2D:
    grid: Grid2D
    values: np.ndarray
    t: float = 0.0
    name: str = "psi"
    meta: dict = field(default_factory=dict)


def check_on_grid(grid, *arrays):
    for a in arrays:
        if np.shape(a) != grid.shape:
            raise DimensionError(f"array of shape {np.shape(a)} is not on grid {grid.shape}")


# --- transforms -------------------------------------------------------------

def spectral_transform(f, inverse=False):
    """Unitary discrete Fourier transform over all axes of ``f``."""
    for n in np.shape(f):
        _check_size(n, "transform size")
    if inverse:
        return np.fft.ifftn(f, norm="ortho")
    return np.fft.fftn(f, norm="ortho")


def _apply_1d(f, mult, axis):
    F = np.fft.fft(f, axis=axis)
    shape = [1] * np.ndim(f)
    shape[axis] = -1
    out = np.fft.ifft(F * mult.reshape(shape), axis=axis)
    return out if np.iscomplexobj(f) else out.real


def derivative(grid: Grid1D, f, order=1):
    """Spectral derivative of a 1D periodic field."""
    check_on_grid(grid, f)
    if order == 1:
        return _apply_1d(f, 1j * grid.k_odd, 0)
    if order == 2:
        return _apply_1d(f, -grid.k ** 2, 0)
    raise ValueError("order must be 1 or 2")


def d_dx(grid: Grid2D, f):
    return _apply_1d(f, 1j * grid.xgrid.k_odd, 1)


def d_dy(grid: Grid2D, f):
    return _apply_1d(f, 1j * grid.ygrid.k_odd, 0)


def gradient(grid: Grid2D, f):
    """Spectral gradient ``(df/dx, df/dy)``; exact for band-limited ``f``."""
    check_on_grid(grid, f)
    F = np.fft.fft2(f)
    gx = np.fft.ifft2(F * (1j * grid.xgrid.k_odd)[None, :])
    gy = np.fft.ifft2(F * (1j * grid.ygrid.k_odd)[:, None])
    if not np.iscomplexobj(f):
        gx, gy = gx.real, gy.real
    return VectorField2D(gx, gy)


def laplacian(grid: Grid2D, f):
    out = np.fft.ifft2(-grid.k2 * np.fft.fft2(f))
    return out if np.iscomplexobj(f) else out.real


def curl(grid: Grid2D, v: VectorField2D):
    """Scalar curl ``dv_y/dx - dv_x/dy``."""
    check_on_grid(grid, v.x, v.y)
    return d_dx(grid, v.y) - d_dy(grid, v.x)


def div(grid: Grid2D, v: VectorField2D):
    check_on_grid(grid, v.x, v.y)
    return d_dx(grid, v.x) + d_dy(grid, v.y)


# --- quadrature -------------------------------------------------------------

def _cell(grid):
    return grid.cell if isinstance(grid, Grid2D) else grid.d


def quadrature(grid, f):
    """Rectangle rule, spectrally accurate for smooth periodic integrands."""
    check_on_grid(grid, f)
    return np.sum(f) * _cell(grid)


def inner(grid, f, g):
    """``<f, g>``, conjugate-linear in ``f``."""
    check_on_grid(grid, f, g)
    return np.vdot(f, g) * _cell(grid)


def l2_norm(grid, f):
    check_on_grid(grid, f)
    return float(np.sqrt(np.sum(np.abs(f) ** 2) * _cell(grid)))


def boundary_mass(f):
    """Largest ``|f|^2`` on the outermost ring of samples, relative to the peak.

    The periodic box stands in for the whole plane (or line); this is the
    number that has to stay small for that to be legitimate.
    """
    rho = np.abs(f) ** 2
    peak = rho.max()
    if peak == 0:
        return 0.0
    if rho.ndim == 1:
        edge = max(rho[0], rho[-1])
    else:
        edge = max(rho[0].max(), rho[-1].max(), rho[:, 0].max(), rho[:, -1].max())
    return float(edge / peak)


# --- snapshots --------------------------------------------------------------

def save_snapshot(directory, name, grid, values, t, **extra):
    """Write ``<name>.bin`` (little-endian complex128, row-major) plus a JSON manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    check_on_grid(grid, values)
    np.ascontiguousarray(values, dtype="<c16").tofile(directory / f"{name}.bin")
    if isinstance(grid, Grid2D):
        manifest = {"nx": grid.nx, "ny": grid.ny, "Lx": grid.Lx, "Ly": grid.Ly}
    else:
        manifest = {"nx": grid.n, "Lx": grid.L}
    manifest.update(t=float(t), name=name, **extra)
    (directory / f"{name}.json").write_text(json.dumps(manifest, indent=2))
    return directory / f"{name}.bin"


def load_snapshot(path):
    """Inverse of :func:`save_snapshot`; accepts the ``.bin`` or ``.json`` path."""
    path = Path(path)
    stem = path.with_suffix("")
    manifest = json.loads(stem.with_suffix(".json").read_text())
    if "ny" in manifest:
        grid = Grid2D(manifest["nx"], manifest["ny"], manifest["Lx"], manifest["Ly"])
        cls = Field2D
    else:
        grid = Grid1D(manifest["nx"], manifest["Lx"])
        cls = Field1D
    values = np.fromfile(stem.with_suffix(".bin"), dtype="<c16").reshape(grid.shape)
    meta = {k: v for k, v in manifest.items() if k not in ("nx", "ny", "Lx", "Ly", "t", "name")}
    return cls(grid, values, manifest["t"], manifest["name"], meta)
