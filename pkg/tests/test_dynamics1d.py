import numpy as np
import pytest

from csreduce.dynamics1d import energy_gradient_1d, evolve_1d, hamiltonian_1d, nonlinear_potential, step_1d
from csreduce.errors import DomainOverflowError
from csreduce.fields import Grid1D, l2_norm
from csreduce.observables import energy_1d, mass
from csreduce.params import Params1D

GRID = Grid1D(128, 8.0)


def packet(x, x0=0.5, k0=0.7):
    return np.pi ** -0.25 * np.exp(-(x - x0) ** 2 / 2 + 1j * k0 * x)


def test_oscillator_ground_state_phase():
    phi0 = np.pi ** -0.25 * np.exp(-GRID.x ** 2 / 2)
    t, phi = evolve_1d(GRID, phi0, Params1D(dt=1e-3, t_end=1.0))
    assert t == pytest.approx(1.0)
    # Strang splitting of the trap leaves an O(dt^2) phase error
    assert l2_norm(GRID, phi - np.exp(-1j) * phi0) < 1e-6


def test_nonlinear_potential():
    phi = packet(GRID.x)
    rho = np.abs(phi) ** 2
    p = Params1D(beta=1.0, g_tilde=2.0)
    assert np.allclose(nonlinear_potential(GRID, phi, p), GRID.x ** 2 + np.pi ** 2 * rho ** 2 - 2 * rho)
    assert np.allclose(nonlinear_potential(GRID, phi, p.with_(trap_on=False)), np.pi ** 2 * rho ** 2 - 2 * rho)


@pytest.mark.parametrize("beta,gt,trap", [(1.0, 1.0, True), (0.3, 2.0, False), (0.0, 0.5, True)])
def test_energy_gradient_matches_finite_differences(beta, gt, trap):
    rng = np.random.default_rng(7)
    p = Params1D(beta=beta, g_tilde=gt, trap_on=trap)
    f = packet(GRID.x) * (1 + 0.2 * GRID.x)
    d = np.exp(-GRID.x ** 2 / 2) * (rng.normal() + 1j * rng.normal() * GRID.x)
    h = 1e-5
    fd = (energy_1d(GRID, f + h * d, p) - energy_1d(GRID, f - h * d, p)) / (2 * h)
    an = np.real(np.vdot(energy_gradient_1d(GRID, f, p), d)) * GRID.d
    assert abs(fd - an) / abs(an) < 1e-6


def test_mass_is_exact_and_energy_is_stable():
    p = Params1D(beta=1.0, g_tilde=1.0, dt=1e-3, t_end=1.0)
    masses, energies = [], []
    evolve_1d(GRID, packet(GRID.x), p, observers=[lambda t, f, prev: (masses.append(mass(GRID, f)),
                                                                      energies.append(energy_1d(GRID, f, p)))],
              stride=50)
    assert max(abs(m - masses[0]) for m in masses) / masses[0] < 1e-13
    assert max(abs(e - energies[0]) for e in energies) / abs(energies[0]) < 1e-5


def test_second_order_in_time():
    p = Params1D(beta=1.0, g_tilde=1.0, t_end=0.4)
    sols = [evolve_1d(GRID, packet(GRID.x), p.with_(dt=dt))[1] for dt in (0.02, 0.01, 0.005)]
    order = np.log2(l2_norm(GRID, sols[0] - sols[1]) / l2_norm(GRID, sols[1] - sols[2]))
    assert order == pytest.approx(2, rel=0.1)


def test_time_reversal():
    p = Params1D(beta=1.0, g_tilde=1.0, dt=1e-3)
    phi0 = packet(GRID.x)
    phi = phi0
    for _ in range(200):
        phi = step_1d(GRID, phi, p)
    for _ in range(200):
        phi = step_1d(GRID, phi, p, dt=-p.dt)
    assert l2_norm(GRID, phi - phi0) < 1e-12


def test_hamiltonian_linear_part():
    phi = packet(GRID.x, 0.0, 0.0)
    assert l2_norm(GRID, hamiltonian_1d(GRID, phi, Params1D()) - phi) < 1e-10


def test_boundary_overflow():
    phi0 = np.exp(-(GRID.x - 7.5) ** 2)
    with pytest.raises(DomainOverflowError):
        evolve_1d(GRID, phi0, Params1D(dt=1e-3, t_end=0.01))
