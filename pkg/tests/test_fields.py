import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csreduce.errors import ConfigurationError
from csreduce.errors import DimensionError
from csreduce.fields import (Grid1D, Grid2D, VectorField2D, boundary_mass, check_on_grid, curl, d_dx, d_dy,
                             derivative, div, gradient, inner, l2_norm, laplacian, load_snapshot, quadrature,
                             save_snapshot)


def test_grid_geometry():
    g = Grid1D(16, 2.0)
    assert g.d == 0.25
    assert g.x[0] == -2.0 and g.x[-1] == 2.0 - 0.25
    assert g.k_odd[8] == 0.0 and g.k[8] != 0.0
    G = Grid2D(16, 32, 1.0, 2.0)
    assert G.shape == (32, 16)
    assert G.cell == G.dx * G.dy


@pytest.mark.parametrize("n", [0, 7, 12, 4])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ConfigurationError):
        Grid1D(n, 1.0)


def test_shape_check():
    G = Grid2D(8, 16, 1.0, 1.0)
    with pytest.raises(DimensionError):
        check_on_grid(G, np.zeros((8, 16)))


@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 2 * np.pi))
@settings(max_examples=25, deadline=None)
def test_spectral_derivatives_of_trig_polynomials(m, n, phase):
    G = Grid2D(32, 32, np.pi, np.pi)
    X, Y = G.mesh
    f = np.sin(m * X + phase) * np.cos(n * Y)
    assert np.allclose(d_dx(G, f), m * np.cos(m * X + phase) * np.cos(n * Y), atol=1e-11)
    assert np.allclose(d_dy(G, f), -n * np.sin(m * X + phase) * np.sin(n * Y), atol=1e-11)
    assert np.allclose(laplacian(G, f), -(m ** 2 + n ** 2) * f, atol=1e-10)


def test_derivative_orders_and_vector_calculus():
    g = Grid1D(32, np.pi)
    assert np.allclose(derivative(g, np.sin(3 * g.x), 2), -9 * np.sin(3 * g.x), atol=1e-11)
    G = Grid2D(32, 32, np.pi, np.pi)
    X, Y = G.mesh
    f = np.cos(2 * X) * np.sin(Y)
    grad = gradient(G, f)
    assert np.allclose(curl(G, grad), 0, atol=1e-11)
    assert np.allclose(div(G, grad), laplacian(G, f), atol=1e-10)
    v = VectorField2D(X * 0 + 1.0, np.sin(X))
    assert np.allclose((v + v).y, 2 * np.sin(X)) and np.allclose((v - v).x, 0)
    assert np.allclose(v.scale(3).x, 3)


def test_quadrature_and_norms():
    g = Grid1D(128, 10.0)
    f = np.exp(-g.x ** 2 / 2)
    assert quadrature(g, f ** 2) == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    assert l2_norm(g, f) ** 2 == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    assert inner(g, f, 1j * f) == pytest.approx(1j * np.sqrt(np.pi), rel=1e-12)


def test_boundary_mass():
    g = Grid1D(64, 5.0)
    assert boundary_mass(np.exp(-g.x ** 2)) < 1e-10
    assert boundary_mass(np.ones(64)) == 1.0
    G = Grid2D(16, 16, 1.0, 1.0)
    f = np.zeros(G.shape)
    f[8, 8] = 2.0
    f[0, 5] = 1.0
    assert boundary_mass(f) == pytest.approx(0.25)


@given(st.integers(0, 2 ** 32 - 1), st.floats(0, 100))
@settings(max_examples=10, deadline=None)
def test_snapshot_round_trip_is_exact(tmp_path_factory, seed, t):
    rng = np.random.default_rng(seed)
    d = tmp_path_factory.mktemp("snap")
    G = Grid2D(8, 16, 1.5, 2.5)
    v = rng.normal(size=G.shape) + 1j * rng.normal(size=G.shape)
    save_snapshot(d, "psi", G, v, t, mu=-0.25)
    back = load_snapshot(d / "psi.json")
    assert back.grid == G and back.t == t and back.name == "psi" and back.meta == {"mu": -0.25}
    assert np.array_equal(back.values, v)
    g = Grid1D(16, 3.0)
    w = rng.normal(size=16) + 0j
    save_snapshot(d, "phi", g, w, t)
    back = load_snapshot(d / "phi.bin")
    assert back.grid == g and np.array_equal(back.values, w)


def test_snapshot_layout(tmp_path):
    G = Grid2D(8, 16, 1.0, 1.0)
    v = np.arange(128, dtype=complex).reshape(G.shape)
    save_snapshot(tmp_path, "a", G, v, 0.0)
    raw = np.fromfile(tmp_path / "a.bin", dtype="<c16")
    assert raw.size == 128 and raw[9] == v[1, 1]
