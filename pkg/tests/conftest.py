import numpy as np
import pytest

from desolve.problems import (LINEAR_1ST, LINEAR_PDE, NONLINEAR_1ST, BenchmarkProblem,
                              BoundaryCurve, get_problem)


def rk4(f, t0, tf, y0, h):
    """Classical RK4 with a fixed step; returns a dense callable by linear interpolation
    between steps (the step is small enough that this is not the limiting error)."""
    n = int(round((tf - t0) / h))
    t = t0 + h * np.arange(n + 1)
    y = np.empty(n + 1)
    y[0] = y0
    for i in range(n):
        ti, yi = t[i], y[i]
        k1 = f(ti, yi)
        k2 = f(ti + h / 2, yi + h / 2 * k1)
        k3 = f(ti + h / 2, yi + h / 2 * k2)
        k4 = f(ti + h, yi + h * k3)
        y[i + 1] = yi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return t, y


@pytest.fixture(scope="session")
def p2_rk4():
    t, y = rk4(lambda t, y: y * y + t * t, 0.0, 0.5, 1.0, 1e-5)
    return t, y


def _zeros(*args):
    return np.zeros(np.shape(args[0]))


def _ones(t):
    return np.ones(np.shape(t))


@pytest.fixture
def constant_ode():
    """y' = 0, y(0) = 1 on [0, 1]."""
    return BenchmarkProblem(id="C0", kind=LINEAR_1ST, domain=(0.0, 1.0), analytic=_ones,
                            lhs=(_zeros, _ones), rhs=_zeros, y0=1.0)


@pytest.fixture
def frozen_nonlinear():
    """y' = f(t, y) with f = 0 and y(0) = 1."""
    return BenchmarkProblem(id="C1", kind=NONLINEAR_1ST, domain=(0.0, 1.0), analytic=_ones,
                            rhs=_zeros, f=lambda t, y: np.zeros(np.shape(y)),
                            f_y=lambda t, y: np.zeros(np.shape(y)),
                            f_yy=lambda t, y: np.zeros(np.shape(y)), y0=1.0)


@pytest.fixture
def square_nonlinear():
    """y' = y^2 with y(0) = 0, whose solution is identically zero."""
    return BenchmarkProblem(id="C2", kind=NONLINEAR_1ST, domain=(0.0, 1.0), analytic=_zeros,
                            rhs=_zeros, f=lambda t, y: y * y, f_y=lambda t, y: 2 * y,
                            f_yy=lambda t, y: np.full(np.shape(y), 2.0), y0=0.0)


@pytest.fixture
def homogeneous_pde():
    zero = BoundaryCurve(lambda s: np.zeros(np.shape(s)), lambda s: np.zeros(np.shape(s)))
    return BenchmarkProblem(id="C3", kind=LINEAR_PDE, domain=((0.0, 1.0), (0.0, 1.0)),
                            analytic=_zeros, rhs=_zeros, boundaries=(zero,) * 4)


@pytest.fixture(params=["P1", "P2", "P3", "P4"])
def any_problem(request):
    return get_problem(request.param)
