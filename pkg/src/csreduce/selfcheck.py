"""Quick invariant suite on a small reference configuration."""
from __future__ import annotations

import tempfile

import numpy as np

from .dynamics1d import energy_gradient_1d
from .fields import Grid1D, Grid2D, curl, div, l2_norm, load_snapshot, save_snapshot
from .gauge import compute_A
from .observables import energy_1d, energy_2d
from .params import Params1D, Params2D, strip_grid
from .reduction import build_ansatz, build_profile, project_to_1d


def smooth_density(grid: Grid2D, rng, modes=3):
    """Positive periodic density: exponential of a random low-mode trig polynomial."""
    X, Y = grid.mesh
    s = np.zeros(grid.shape)
    for _ in range(modes):
        kx = np.pi * rng.integers(-2, 3) / grid.Lx
        ky = np.pi * rng.integers(-2, 3) / grid.Ly
        s += rng.uniform(-0.5, 0.5) * np.cos(kx * X + ky * Y + rng.uniform(0, 2 * np.pi))
    return np.exp(s)


def smooth_profile(x, rng, modes=4):
    c = rng.normal(size=modes) + 1j * rng.normal(size=modes)
    return np.exp(-x ** 2 / 2) * sum(c[j] * (x / 2) ** j for j in range(modes))


def run_checks(seed=0):
    """Return ``[(name, passed, value)]``."""
    rng = np.random.default_rng(seed)
    out = []

    def check(name, value, tol):
        out.append((name, bool(value < tol), float(value)))

    eps = 0.1
    grid = strip_grid(64, 128, 8.0, eps)
    prof = build_profile(eps, grid.ygrid)
    u2 = prof.u ** 2
    h = grid.dy
    check("f: int f u^2 = 0", abs(np.sum(prof.f * u2) * h), 1e-8)
    check("f: int f^2 u^2 = 1/3", abs(np.sum(prof.f ** 2 * u2) * h - 1 / 3), 1e-6)
    check("f = erf(y/sqrt(eps))", prof.erf_error, 1e-8)

    box = Grid2D(64, 64, 2 * np.pi, 2 * np.pi)
    rho = smooth_density(box, rng)
    A = compute_A(box, rho, 1.0, "periodic")
    target = 2 * np.pi * (rho - rho.mean())
    check("curl A = 2 pi beta (rho - mean)", l2_norm(box, curl(box, A) - target) / l2_norm(box, 2 * np.pi * rho), 1e-8)
    norm_A = np.hypot(l2_norm(box, A.x), l2_norm(box, A.y))
    check("div A = 0", l2_norm(box, div(box, A)) / norm_A * box.Lx, 1e-8)

    phi = smooth_profile(grid.x, rng)
    phi /= l2_norm(grid.xgrid, phi)
    p2 = Params2D(beta=1.0, g=1.0, eps=eps, dt=1e-3)
    p1 = Params1D.from_2d(p2)
    psi = build_ansatz(grid, phi, prof, p2.beta)
    e1 = energy_1d(grid.xgrid, phi, p1)
    check("energy identity", abs(energy_2d(grid, psi, p2) - e1) / abs(e1), 1e-6)
    check("project(ansatz(phi)) = phi", l2_norm(grid.xgrid, project_to_1d(grid, psi, prof, p2.beta) - phi), 1e-12)

    with tempfile.TemporaryDirectory() as tmp:
        save_snapshot(tmp, "psi", grid, psi, 0.5, mu=1.0)
        back = load_snapshot(f"{tmp}/psi.bin")
        check("snapshot round trip", float(np.max(np.abs(back.values - psi))) + abs(back.t - 0.5), 1e-300)

    g1 = Grid1D(128, 16.0)
    p = Params1D(beta=1.0, g_tilde=1.0)
    f = smooth_profile(g1.x, rng)
    d = smooth_profile(g1.x, rng)
    hstep = 1e-5
    fd = (energy_1d(g1, f + hstep * d, p) - energy_1d(g1, f - hstep * d, p)) / (2 * hstep)
    an = float(np.real(np.vdot(energy_gradient_1d(g1, f, p), d)) * g1.d)
    check("1D energy gradient", abs(fd - an) / abs(an), 1e-6)
    return out
