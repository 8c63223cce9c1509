import numpy as np
import pytest

from csreduce.errors import ConfigurationError
from csreduce.params import Params1D, Params2D, g_tilde, strip_grid, trap_potential, validate_grid


def test_effective_cubic_coupling_is_g_times_int_u4():
    eps = 0.07
    y = np.linspace(-3, 3, 20001)
    u = (np.pi * eps) ** -0.25 * np.exp(-y ** 2 / (2 * eps))
    assert g_tilde(1.0, eps) == pytest.approx(np.trapezoid(u ** 4, y), rel=1e-10)
    assert Params2D(g=2.0, eps=eps).g_tilde == pytest.approx(2 * g_tilde(1.0, eps))


@pytest.mark.parametrize("kw", [dict(eps=0.0), dict(dt=-1e-3), dict(eps=0.001, dt=1e-3), dict(gauge_bc="open")])
def test_params_guards(kw):
    with pytest.raises(ConfigurationError):
        Params2D(**kw)


def test_params_1d_from_2d():
    p = Params2D(beta=0.5, g=1.0, eps=0.05, dt=1e-3, t_end=2.0)
    q = Params1D.from_2d(p)
    assert q.beta == 0.5 and q.trap_on and q.t_end == 2.0
    assert q.g_tilde == pytest.approx(1 / np.sqrt(2 * np.pi * 0.05))
    assert q.with_(trap_on=False).trap_on is False
    with pytest.raises(ConfigurationError):
        Params1D(dt=0)


def test_resolution_guards():
    eps = 0.05
    validate_grid(strip_grid(64, 128, 8.0, eps), eps)
    with pytest.raises(ConfigurationError, match="Ly"):
        validate_grid(strip_grid(64, 128, 8.0, eps, ly_factor=5.0), eps)
    with pytest.raises(ConfigurationError, match="dy"):
        validate_grid(strip_grid(64, 32, 8.0, eps), eps)


def test_trap_potential_shift():
    G = strip_grid(16, 64, 4.0, 0.1)
    V = trap_potential(G, 0.1)
    X, Y = G.mesh
    assert np.allclose(V, X ** 2 + Y ** 2 / 0.01 - 10.0)
