"""Independent reference solutions used by the tests."""
import numpy as np
from scipy.integrate import solve_ivp


def gaussian_gauge_field(X, Y, x0, y0, s, period, beta):
    """``beta * grad_perp(-log|x|) * rho`` for ``rho = exp(-|x - x0|^2 / 2 s^2)``
    on a cylinder of the given x-period, free in y.

    Outside its bulk a radial density acts as a point mass, so the periodic
    images enter through the closed-form lattice sum
    ``-log|sin(pi z / period)|`` with the free point kernel removed.
    """
    x, y = X - x0, Y - y0
    r2 = x ** 2 + y ** 2
    M = 2 * np.pi * s ** 2
    m = -M * np.expm1(-r2 / (2 * s ** 2))
    ax, ay = -y * m / r2, x * m / r2
    c = 2 * np.pi / period
    den = np.cosh(c * y) - np.cos(c * x)
    wy = -0.5 * c * np.sinh(c * y) / den
    wx = -0.5 * c * np.sin(c * x) / den
    ax = ax + M * (wy + y / r2)
    ay = ay + M * (-wx - x / r2)
    return beta * ax, beta * ay


def shoot_cubic_quintic(kappa, a, b, x_max=30.0):
    """Even decaying solution of ``psi'' = kappa psi + a psi^5 - b psi^3``.

    Bisection on ``psi(0)``: too large and the orbit crosses zero, too small
    and it turns back up before decaying.  Returns ``(psi0, sol)`` where
    ``sol(x)`` is the dense solution for ``0 <= x <= x_stop``.
    """
    def rhs(x, z):
        p, q = z
        return [q, kappa * p + a * p ** 5 - b * p ** 3]

    def cross(x, z):
        return z[0]
    cross.terminal = True

    def turn(x, z):
        return z[1]
    turn.terminal = True
    turn.direction = 1

    def miss(p0):
        sol = solve_ivp(rhs, (0, x_max), [p0, 0.0], events=(cross, turn), rtol=1e-12, atol=1e-14)
        if sol.t_events[0].size:
            return 1.0
        if sol.t_events[1].size:
            return -1.0
        return 0.0

    # amplitude of the bright-soliton orbit lies between the turning point of
    # the cubic-quintic potential and its flat-top value
    lo, hi = 1e-6, np.sqrt(3 * b / (4 * a)) * (1 - 1e-15)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if miss(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15 * hi:
            break
    p0 = 0.5 * (lo + hi)
    sol = solve_ivp(rhs, (0, x_max), [p0, 0.0], events=(cross, turn), rtol=1e-12, atol=1e-14,
                    dense_output=True)
    return p0, sol
