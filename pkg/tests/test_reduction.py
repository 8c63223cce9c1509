import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csreduce.errors import ConfigurationError, DimensionError
from csreduce.fields import Grid1D, Grid2D, l2_norm
from csreduce.observables import energy_1d, energy_2d
from csreduce.params import Params1D, Params2D, strip_grid
from csreduce.reduction import (build_ansatz, build_profile, project_to_1d, projected_hamiltonian,
                                quintic_coefficient, rhs_consistency_residual, transverse_ground_state)

EPS = 0.05


@pytest.fixture(scope="module")
def waveguide():
    grid = strip_grid(128, 256, 8.0, EPS)
    return grid, build_profile(EPS, grid.ygrid)


def profiles(x):
    yield np.pi ** -0.25 * np.exp(-x ** 2 / 2)
    yield np.exp(-(x - 0.7) ** 2 / 1.5 + 1.3j * x)
    yield (1 + 0.5j * x) * np.exp(-x ** 2 / 2)
    yield np.exp(-x ** 2 / 3) * np.exp(0.8j * np.sin(x))
    yield 1.7 * x * np.exp(-x ** 2 / 2)


@pytest.mark.parametrize("eps", [0.5, 0.2, 0.1, 0.05])
def test_transverse_profile_moments(eps):
    grid = strip_grid(16, 128, 4.0, eps)
    prof = build_profile(eps, grid.ygrid)
    h = grid.dy
    u2 = prof.u ** 2
    assert abs(np.sum(u2) * h - 1) < 1e-12
    assert abs(np.sum(prof.f * u2) * h) < 1e-12
    assert abs(np.sum(prof.f ** 2 * u2) * h - 1 / 3) < 1e-12
    assert prof.erf_error < 1e-12
    assert np.array_equal(transverse_ground_state(grid.y, eps), prof.u)


def test_profile_guards():
    with pytest.raises(ConfigurationError, match="Ly"):
        build_profile(0.1, Grid1D(256, 1.0))
    with pytest.raises(ConfigurationError, match="dy"):
        build_profile(0.1, Grid1D(16, 3.0))


def test_grid_mismatch(waveguide):
    grid, prof = waveguide
    other = Grid2D(128, 128, 8.0, grid.Ly)
    with pytest.raises(DimensionError):
        build_ansatz(other, np.ones(128), prof, 1.0)


@pytest.mark.parametrize("beta,g", [(0.5, 0.0), (0.5, 1.0), (1.0, 0.0), (1.0, 1.0)])
def test_energy_identity(waveguide, beta, g):
    grid, prof = waveguide
    p2 = Params2D(beta=beta, g=g, eps=EPS)
    p1 = Params1D.from_2d(p2)
    for phi in profiles(grid.x):
        e1 = energy_1d(grid.xgrid, phi, p1)
        e2 = energy_2d(grid, build_ansatz(grid, phi, prof, beta), p2)
        assert abs(e2 - e1) / abs(e1) < 1e-10


@given(st.floats(-2, 2), st.floats(0.1, 1.5), st.floats(-2, 2))
@settings(max_examples=10, deadline=None)
def test_projection_inverts_ansatz(beta, width, k0):
    grid = strip_grid(64, 128, 8.0, 0.1)
    prof = build_profile(0.1, grid.ygrid)
    phi = np.exp(-grid.x ** 2 / (2 * width ** 2) + 1j * k0 * grid.x)
    psi = build_ansatz(grid, phi, prof, beta)
    assert l2_norm(grid.xgrid, project_to_1d(grid, psi, prof, beta) - phi) < 1e-12


def test_rhs_consistency_exact_without_interactions():
    g1 = Grid1D(128, 8.0)
    phi = np.pi ** -0.25 * np.exp(-(g1.x - 0.3) ** 2 / 2 + 0.4j * g1.x)
    rows = rhs_consistency_residual(g1, phi, 0.0, 0.0, [0.2, 0.1])
    assert all(r.residual < 1e-10 for r in rows)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_rhs_consistency_improves_as_eps_shrinks(beta):
    g1 = Grid1D(128, 8.0)
    phi = np.pi ** -0.25 * np.exp(-g1.x ** 2 / 2)
    for g in (0.0, 1.0):
        r = [row.residual for row in rhs_consistency_residual(g1, phi, beta, g, [0.2, 0.1, 0.05])]
        assert r[0] > r[1] > r[2] > 0


def test_quintic_coefficient_without_current_term():
    g1 = Grid1D(128, 8.0)
    phi = np.pi ** -0.25 * np.exp(-g1.x ** 2 / 2)
    row, = rhs_consistency_residual(g1, phi, 1.0, 0.0, [0.05], current_term=False)
    assert row.quintic_fit == pytest.approx(np.pi ** 2 / 3, rel=1e-6)


def test_projected_hamiltonian_matches_1d_when_separable(waveguide):
    grid, prof = waveguide
    phi = np.exp(-grid.x ** 2 / 2 + 0.5j * grid.x)
    p2 = Params2D(eps=EPS)
    p1 = Params1D.from_2d(p2)
    from csreduce.dynamics1d import hamiltonian_1d
    h = projected_hamiltonian(grid, phi, prof, p2)
    assert l2_norm(grid.xgrid, h - hamiltonian_1d(grid.xgrid, phi, p1)) < 1e-8
    q = np.abs(phi) ** 4 * phi
    assert quintic_coefficient(grid.xgrid, phi, hamiltonian_1d(grid.xgrid, phi, p1) + 2.5 * q, p1) == \
        pytest.approx(2.5, rel=1e-10)
