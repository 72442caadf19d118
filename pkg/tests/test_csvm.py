import numpy as np
import pytest

from desolve.core.kernels import KernelConfig, gram
from desolve.errors import InvalidArgumentError
from desolve.problems import get_problem
from desolve.svm import (csvm_linear_system, evaluate_csvm, solve_linear_ode_csvm,
                         solve_nonlinear_ode_csvm, solve_pde_csvm, training_grid)
from desolve.svm.csvm import _k4, ky_block, residual_functionals
from desolve.tfc import build_ivp_expression


def test_constant_solution(constant_ode):
    sol, _ = solve_linear_ode_csvm(constant_ode, 10, KernelConfig(0.5, 1e6))
    np.testing.assert_array_equal(sol.alpha, 0.0)
    np.testing.assert_array_equal(sol(np.linspace(0, 1, 5)), 1.0)


def test_p1_published_setting():
    sol, rep = solve_linear_ode_csvm(get_problem("P1"), 100, KernelConfig(1.468e-1, 3.594e15))
    assert rep.mse_test <= 1e-16
    assert abs(evaluate_csvm(sol, 0.0) - 1.0) <= 5e-15
    assert abs(evaluate_csvm(sol, 1.0) - (np.exp(-0.5) / 3 + 1)) <= 1e-7


def test_p3_published_setting():
    sol, rep = solve_linear_ode_csvm(get_problem("P3"), 100, KernelConfig(1.468, 2.154e13))
    assert rep.mse_test <= 1e-17
    assert evaluate_csvm(sol, 0.0) == 0.0
    assert evaluate_csvm(sol, 0.0, deriv=1) == pytest.approx(1.0, abs=5e-15)


def test_k4_and_ky_vanish_at_start():
    t = np.linspace(0, 1, 6)
    p = np.linspace(-1, 2, 5)
    assert _k4([0.0], [0.0], 0.0, 0.4)[0, 0] == 0.0
    np.testing.assert_allclose(_k4([0.0], t, 0.0, 0.4), 0.0, atol=1e-16)
    np.testing.assert_allclose(ky_block([0.0], t[1:], 0.0, p, 0.4), 0.0, atol=1e-16)


def test_printed_system_matches_generic_gram():
    p = get_problem("P1")
    cfg = KernelConfig(0.3, 1e6)
    ti = training_grid(0.0, 1.0, 9)[1:]
    csys = csvm_linear_system(p, ti, cfg)
    F, rhs = residual_functionals(p, build_ivp_expression(0.0, 1.0), ti)
    generic = gram(F, F, cfg.sigma) + np.eye(ti.size) / cfg.gamma
    np.testing.assert_allclose(csys.M, generic, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(csys.rhs, rhs, rtol=1e-14)


def test_grid_values_from_ky():
    sol, _ = solve_linear_ode_csvm(get_problem("P1"), 12, KernelConfig(0.4, 1e8))
    ti = sol.train_points[1:]
    ky = ky_block(ti, ti, 0.0, sol.p_nodes, 0.4)
    np.testing.assert_allclose(sol(ti), ky @ sol.alpha + 1.0, rtol=1e-14)
    # kernel-expansion path gives the same values
    np.testing.assert_allclose(sol._expansion.inner(sol._model(ti, 0)[0]) + 1.0, sol(ti),
                               atol=1e-12)


def test_zero_dynamics(frozen_nonlinear):
    sol, rep = solve_nonlinear_ode_csvm(frozen_nonlinear, 8, KernelConfig(0.5, 1e10))
    assert rep.converged
    np.testing.assert_allclose(sol.alpha, 0.0, atol=1e-14)
    np.testing.assert_allclose(sol.eta, 0.0, atol=1e-14)
    np.testing.assert_allclose(sol(np.linspace(0, 1, 5)), 1.0, atol=1e-14)


def test_nonlinear_start_value_is_exact():
    sol, rep = solve_nonlinear_ode_csvm(get_problem("P2"), 10, KernelConfig(0.5, 1e10),
                                        max_iter=1)
    assert evaluate_csvm(sol, 0.0) == 1.0


def test_pde_homogeneous(homogeneous_pde):
    sol, _ = solve_pde_csvm(homogeneous_pde, 9, KernelConfig(0.5, 1e6))
    np.testing.assert_array_equal(sol.alpha, 0.0)
    np.testing.assert_array_equal(sol(sol.train_points), 0.0)


def test_p4_published_setting():
    p = get_problem("P4")
    sol, rep = solve_pde_csvm(p, 100, KernelConfig(8.891e-1, 1e14))
    assert rep.mse_test <= 1e-13
    rng = np.random.default_rng(8)
    s = rng.uniform(0, 1, 100)
    z, o = np.zeros(100), np.ones(100)
    for x, y in ((s, z), (z, s), (s, o), (o, s)):
        err = sol(np.column_stack([x, y])) - p.analytic(x, y)
        assert np.max(np.abs(err)) <= 5e-13


def test_pde_matrix_symmetry():
    sol, _ = solve_pde_csvm(get_problem("P4"), 16, KernelConfig(0.7, 1e6))
    A = sol.system[0] - np.eye(len(sol.alpha)) / 1e6
    assert np.max(np.abs(A - A.T)) <= 1e-10 * np.max(np.abs(A))


def test_start_value_exact_for_any_setting():
    p = get_problem("P1")
    for sigma in (0.05, 0.3, 3.0):
        for gamma in (1e2, 1e10, 1e18):
            sol, _ = solve_linear_ode_csvm(p, 10, KernelConfig(sigma, gamma))
            assert abs(sol([0.0])[0] - 1.0) <= 5e-15


def test_wrong_kinds():
    cfg = KernelConfig(0.5, 1e4)
    with pytest.raises(InvalidArgumentError):
        solve_linear_ode_csvm(get_problem("P4"), 9, cfg)
    with pytest.raises(InvalidArgumentError):
        solve_pde_csvm(get_problem("P1"), 9, cfg)
    with pytest.raises(InvalidArgumentError):
        solve_nonlinear_ode_csvm(get_problem("P3"), 9, cfg)
    with pytest.raises(InvalidArgumentError):
        csvm_linear_system(get_problem("P3"), np.linspace(0.1, 1, 4), cfg)
