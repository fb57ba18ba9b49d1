import math

import numpy as np
import pytest

from floquet_atlas import ParamPoint, SymplecticMatrix2, trace_curves
from floquet_atlas.curves import tangent_seed_grid


def rotation(theta: float) -> SymplecticMatrix2:
    return SymplecticMatrix2(math.cos(theta), -math.sin(theta),
                             math.sin(theta), math.cos(theta))


def hyperbolic(lam: float) -> SymplecticMatrix2:
    return SymplecticMatrix2(lam, 0.0, 0.0, 1.0 / lam)


def shear(lam: float, a: float) -> SymplecticMatrix2:
    return SymplecticMatrix2(lam, a, 0.0, lam)


def random_symplectic(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of Sp(2) as a product of rotations, squeezes, and shears."""
    theta1, theta2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    squeeze = math.exp(rng.uniform(-scale, scale))
    s = rng.uniform(-scale, scale)
    R1 = np.array([[math.cos(theta1), -math.sin(theta1)],
                   [math.sin(theta1), math.cos(theta1)]])
    R2 = np.array([[math.cos(theta2), -math.sin(theta2)],
                   [math.sin(theta2), math.cos(theta2)]])
    D = np.diag([squeeze, 1.0 / squeeze])
    S = np.array([[1.0, s], [0.0, 1.0]])
    return R1 @ D @ S @ R2


def circular_monodromy(beta: float, t: float = 2.0 * math.pi) -> np.ndarray:
    """Closed-form fundamental solution of the e = 0 system (independent oracle)."""
    theta = math.sqrt(1.0 - beta)
    if theta == 0.0:
        return np.array([[1.0, 0.0], [t, 1.0]])
    p = theta ** 0.5
    P = np.diag([p, 1.0 / p])
    R = np.array([[math.cos(theta * t), -math.sin(theta * t)],
                  [math.sin(theta * t), math.cos(theta * t)]])
    return P @ R @ np.diag([1.0 / p, p])


def scipy_fundamental(rhs_q, t_end: float) -> np.ndarray:
    """Reference fundamental solution of x'' + q(t) x = 0 in (x, x') ordering."""
    from scipy.integrate import solve_ivp

    def odes(t, y):
        # columns (y1, y1', y2, y2')
        return [y[1], -rhs_q(t) * y[0], y[3], -rhs_q(t) * y[2]]

    sol = solve_ivp(odes, (0.0, t_end), [1.0, 0.0, 0.0, 1.0],
                    method="DOP853", rtol=1e-12, atol=1e-13, dense_output=False)
    assert sol.success
    y = sol.y[:, -1]
    return np.array([[y[0], y[2]], [y[1], y[3]]])


@pytest.fixture(scope="session")
def traced_half():
    """Curves traced to e = 0.5 on a grid that includes the tangent seeds."""
    return trace_curves(tangent_seed_grid(0.5, 21))


@pytest.fixture(scope="session")
def curve_roots_03():
    from floquet_atlas import find_degenerate_betas
    return find_degenerate_betas(0.3)


def param(beta, ecc=0.0):
    return ParamPoint(beta, ecc)
