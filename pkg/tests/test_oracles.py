import numpy as np
import pytest

from desolve.core.kernels import KernelConfig, rbf_kernel_block
from desolve.problems import get_problem
from desolve.svm import solve_linear_ode_csvm, solve_linear_ode_lssvm

from oracles import (QuadratureFeatures, primal_csvm_linear, primal_lssvm_linear,
                     random_kernel_solves, stationarity_errors)

CASES = [("P1", 5, 0.5, 1e3), ("P1", 6, 0.8, 1e2), ("P3", 5, 1.0, 1e3), ("P3", 4, 0.6, 1e4)]


def test_features_reproduce_kernel_and_derivatives():
    t = np.linspace(0, 2, 9)
    phi = QuadratureFeatures(0.5)
    K, K1, _, K11 = rbf_kernel_block(t, t, 0.5)
    np.testing.assert_allclose(phi(t) @ phi(t).T, K, atol=1e-12)
    np.testing.assert_allclose(phi(t, 1) @ phi(t).T, K1, atol=1e-11)
    np.testing.assert_allclose(phi(t, 1) @ phi(t, 1).T, K11, atol=1e-10)


@pytest.mark.parametrize("pid,N,sigma,gamma", CASES)
def test_lssvm_dual_matches_primal(pid, N, sigma, gamma):
    p = get_problem(pid)
    sol, _ = solve_linear_ode_lssvm(p, N, KernelConfig(sigma, gamma))
    t, y = primal_lssvm_linear(p, N, sigma, gamma)
    np.testing.assert_allclose(sol(t), y, rtol=1e-3, atol=1e-3 * np.max(np.abs(y)))


@pytest.mark.parametrize("pid,N,sigma,gamma", CASES)
def test_csvm_dual_matches_primal(pid, N, sigma, gamma):
    p = get_problem(pid)
    sol, _ = solve_linear_ode_csvm(p, N, KernelConfig(sigma, gamma))
    t, y = primal_csvm_linear(p, N, sigma, gamma)
    np.testing.assert_allclose(sol(t), y, rtol=1e-3, atol=1e-3 * np.max(np.abs(y)))


def test_stationarity_at_moderate_settings():
    worst_res = worst_gap = 0.0
    for problem, sol in random_kernel_solves(5, 8):
        res, gap = stationarity_errors(problem, sol)
        worst_res, worst_gap = max(worst_res, res), max(worst_gap, gap)
    assert worst_res <= 1e-9 and worst_gap <= 1e-8
