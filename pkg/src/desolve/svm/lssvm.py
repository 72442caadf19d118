"""LS-SVM collocation: model ``y = w^T phi(t) + b`` with the DE residuals as
regularized equality constraints and the initial/boundary data as exact ones.

Stationarity of the Lagrangian gives ``w`` as a combination of the constraint
functionals and ``e_i = -alpha_i / gamma``; substituting back leaves a square
kernel system in the multipliers and the bias.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from ..core.kernels import KernelConfig, gram
from ..core.linalg import solve_dense
from ..core.optimize import newton_solve
from ..errors import InvalidArgumentError, NumericError, SingularJacobianError
from ..problems import LINEAR_1ST, LINEAR_2ND, LINEAR_PDE, NONLINEAR_1ST
from ..report import build_report, test_points
from ..tfc.expressions import build_dirichlet_expression
from ..tfc.solver import improved_euler, pde_side
from .dual import (UNIFORM, KernelExpansion, KernelSolution, check_variant, kkt_matrix,
                   point_family, relative_residual, tensor_training_points, training_grid)

METHOD = "lssvm"
LINEAR_ODE = "lssvm-linear-ode"
NONLINEAR_ODE = "lssvm-nonlinear-ode"
PDE = "lssvm-pde"

NONLINEAR_MAX_ITER = 50
NONLINEAR_STEP_TOL = 1e-12
NONLINEAR_FLOOR = 30.0


@dataclass(frozen=True, eq=False)
class DualSolution(KernelSolution):
    """Solved LS-SVM model.

    ``alpha`` holds one multiplier per residual equation, ``beta`` one per
    exact constraint (initial value, initial slope or boundary point). The
    nonlinear variant also carries ``eta`` and the node values ``y_nodes``.
    ``system`` is the assembled ``(matrix, rhs, solution)`` for inspection.
    """

    variant: str
    alpha: np.ndarray
    beta: np.ndarray
    b: float
    kernel: KernelConfig
    train_points: np.ndarray
    eta: np.ndarray = None
    y_nodes: np.ndarray = None
    dim: int = 1
    system: tuple = field(default=None, repr=False)
    _expansion: KernelExpansion = field(default=None, repr=False)

    def _model(self, *args):
        order = args[-1]
        g = point_family(None, self.dim)
        zero = order == 0 or order == (0, 0)
        n = len(args[0])
        return g(*args), np.full(n, self.b if zero else 0.0)


def evaluate_dual(sol, point, deriv=0):
    """Evaluate an LS-SVM solution (or one of its derivatives) at ``point``."""
    check_variant(sol, DualSolution, "evaluate_dual")
    out = sol(point, deriv)
    return float(out[0]) if np.ndim(point) == 0 or (sol.dim == 2 and np.size(point) == 2) \
        else out


def _solve_kkt(F, a0, r, G, c, d, cfg):
    FF = gram(F, F, cfg.sigma)
    FG = gram(F, G, cfg.sigma)
    GG = gram(G, G, cfg.sigma)
    A = kkt_matrix(FF, FG, GG, a0, c, cfg.gamma)
    rhs = np.concatenate([r, d, [0.0]])
    sol = solve_dense(A, rhs)
    n, q = F.n, G.n
    return sol.x[:n], sol.x[n:n + q], float(sol.x[-1]), (A, rhs, sol.x), sol.condition


def _check_cfg(cfg):
    if not isinstance(cfg, KernelConfig):
        raise InvalidArgumentError("cfg must be a KernelConfig")


def solve_linear_ode_lssvm(problem, N, cfg, grid=UNIFORM, n_test=None):
    """First- or second-order linear ODE ``sum_k a_k(t) y^(k) = r(t)``.

    Residuals are collocated at ``t_1..t_N``; ``y(t0)`` (and ``y'(t0)`` for
    second order) are exact rows with their own multipliers.
    """
    if problem.kind not in (LINEAR_1ST, LINEAR_2ND):
        raise InvalidArgumentError(f"{problem.id} is not a linear ODE")
    _check_cfg(cfg)
    start = time.perf_counter()
    t = training_grid(problem.t0, problem.tf, N, grid)
    ti = t[1:]
    g = point_family(None, 1)
    F = 0
    for k, a in enumerate(problem.lhs):
        F = F + g(ti, k) * np.broadcast_to(np.asarray(a(ti), float), ti.shape)
    a0 = np.broadcast_to(np.asarray(problem.lhs[0](ti), float), ti.shape)
    r = np.broadcast_to(np.asarray(problem.rhs(ti), float), ti.shape)
    t0 = np.array([problem.t0])
    if problem.kind == LINEAR_2ND:
        both = np.array([problem.t0, problem.t0])
        G = g(both, 0) * np.array([1.0, 0.0]) + g(both, 1) * np.array([0.0, 1.0])
        c, d = np.array([1.0, 0.0]), np.array([problem.y0, problem.ydot0])
    else:
        G, c, d = g(t0, 0), np.array([1.0]), np.array([problem.y0])
    alpha, beta, b, system, cond = _solve_kkt(F, a0, r, G, c, d, cfg)
    elapsed = time.perf_counter() - start
    sol = DualSolution(LINEAR_ODE, alpha, beta, b, cfg, t, system=system,
                       _expansion=KernelExpansion([(alpha, F), (beta, G)], cfg.sigma))
    report = build_report(problem, METHOD, N, sol, t, test_points(problem, n_test), elapsed,
                          hp_sigma=cfg.sigma, hp_gamma=cfg.gamma, condition=cond)
    return sol, report


def solve_linear_pde_lssvm(problem, n_domain, cfg, grid=UNIFORM, n_test=None):
    """Poisson problem: ``lap z = f + e`` inside, ``z = c_k`` exactly on the edges."""
    if problem.kind != LINEAR_PDE:
        raise InvalidArgumentError(f"{problem.id} is not a PDE problem")
    _check_cfg(cfg)
    start = time.perf_counter()
    inner, edge = tensor_training_points(problem.domain, pde_side(n_domain), grid)
    g = point_family(None, 2)
    xi, yi = inner[:, 0], inner[:, 1]
    F = g(xi, yi, (2, 0)) + g(xi, yi, (0, 2))
    r = np.asarray(problem.rhs(xi, yi), float)
    G = g(edge[:, 0], edge[:, 1], (0, 0))
    # The transfinite interpolant of the edge data equals that data on the edges.
    expr = build_dirichlet_expression(*problem.boundaries, domain=problem.domain)
    d = expr.offset(edge[:, 0], edge[:, 1])
    alpha, beta, b, system, cond = _solve_kkt(F, np.zeros(F.n), r, G, np.ones(G.n), d, cfg)
    elapsed = time.perf_counter() - start
    pts = np.vstack([inner, edge])
    sol = DualSolution(PDE, alpha, beta, b, cfg, pts, dim=2, system=system,
                       _expansion=KernelExpansion([(alpha, F), (beta, G)], cfg.sigma))
    report = build_report(problem, METHOD, n_domain, sol, pts, test_points(problem, n_test),
                          elapsed, hp_sigma=cfg.sigma, hp_gamma=cfg.gamma, condition=cond)
    return sol, report


class _NonlinearSystem:
    """Residual and Jacobian of the ``3N + 2`` stationarity system.

    Unknowns are ordered ``(alpha, eta, y, beta, b)``. Blocks use
    ``K1(a, b) = phi'(a)^T phi(b)``.
    """

    def __init__(self, problem, t, cfg):
        self.problem = problem
        self.ti = t[1:]
        self.n = self.ti.size
        g = point_family(None, 1)
        self.D = g(self.ti, 1)
        self.V = g(self.ti, 0)
        self.G = g(np.array([t[0]]), 0)
        s = cfg.sigma
        D, V, G = self.D, self.V, self.G
        self.DD, self.DV, self.DG = gram(D, D, s), gram(D, V, s), gram(D, G, s)[:, 0]
        self.VV, self.VG = gram(V, V, s), gram(V, G, s)[:, 0]
        self.GG = float(gram(G, G, s)[0, 0])
        self.gamma = cfg.gamma

    def split(self, x):
        n = self.n
        return x[:n], x[n:2 * n], x[2 * n:3 * n], x[3 * n], x[3 * n + 1]

    def residual(self, x):
        a, eta, y, beta, b = self.split(x)
        p = self.problem
        r1 = self.DD @ a + self.DV @ eta + self.DG * beta + a / self.gamma - p.f(self.ti, y)
        r2 = self.DV.T @ a + self.VV @ eta + self.VG * beta + b - y
        r3 = self.DG @ a + self.VG @ eta + self.GG * beta + b - p.y0
        r4 = beta + eta.sum()
        r5 = a * p.f_y(self.ti, y) + eta
        return np.concatenate([r1, r2, [r3, r4], r5])

    def jacobian(self, x):
        a, eta, y, beta, b = self.split(x)
        n, p = self.n, self.problem
        fy = np.asarray(p.f_y(self.ti, y), float)
        fyy = np.broadcast_to(np.asarray(p.f_yy(self.ti, y), float), y.shape)
        J = np.zeros((3 * n + 2, 3 * n + 2))
        A, E, Y, B, C = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n), 3 * n, 3 * n + 1
        J[A, A] = self.DD + np.eye(n) / self.gamma
        J[A, E] = self.DV
        J[A, Y] = -np.diag(fy)
        J[A, B] = self.DG
        J[E, A] = self.DV.T
        J[E, E] = self.VV
        J[E, Y] = -np.eye(n)
        J[E, B] = self.VG
        J[E, C] = 1.0
        J[2 * n, A] = self.DG
        J[2 * n, E] = self.VG
        J[2 * n, B] = self.GG
        J[2 * n, C] = 1.0
        J[2 * n + 1, E] = 1.0
        J[2 * n + 1, B] = 1.0
        rows = slice(2 * n + 2, 3 * n + 2)
        J[rows, A] = np.diag(fy)
        J[rows, E] = np.eye(n)
        J[rows, Y] = np.diag(a * fyy)
        return J


def _dense_step(J, L):
    try:
        return solve_dense(J, L).x
    except NumericError as exc:
        raise SingularJacobianError(str(exc), condition=exc.condition) from exc


def solve_nonlinear_ode_lssvm(problem, N, cfg, grid=UNIFORM, n_test=None,
                              max_iter=NONLINEAR_MAX_ITER, step_tol=NONLINEAR_STEP_TOL):
    """``y' = f(t, y)`` through Newton on the ``3N + 2`` stationarity system.

    Start: node values from improved Euler on the training grid, all
    multipliers zero, ``b = y0``.
    """
    if problem.kind != NONLINEAR_1ST:
        raise InvalidArgumentError(f"{problem.id} is not a nonlinear first-order ODE")
    _check_cfg(cfg)
    start = time.perf_counter()
    t = training_grid(problem.t0, problem.tf, N, grid)
    sysm = _NonlinearSystem(problem, t, cfg)
    n = sysm.n
    y_start = improved_euler(problem.f, t, problem.y0)[1:]
    x0 = np.concatenate([np.zeros(2 * n), y_start, [0.0, problem.y0]])
    x, conv = newton_solve(sysm.residual, sysm.jacobian, x0, eps=1e-300, max_iter=max_iter,
                           step_tol=step_tol, linear_solver=_dense_step,
                           reject_increase=False, floor_factor=NONLINEAR_FLOOR)
    elapsed = time.perf_counter() - start
    a, eta, y, beta, b = sysm.split(x)
    cond = solve_dense(sysm.jacobian(x), sysm.residual(x)).condition
    sol = DualSolution(NONLINEAR_ODE, a, np.array([beta]), float(b), cfg, t, eta=eta,
                       y_nodes=y, system=(sysm.jacobian(x), sysm.residual(x), x),
                       _expansion=KernelExpansion(
                           [(a, sysm.D), (eta, sysm.V), (np.array([beta]), sysm.G)], cfg.sigma))
    report = build_report(problem, METHOD, N, sol, t, test_points(problem, n_test), elapsed,
                          hp_sigma=cfg.sigma, hp_gamma=cfg.gamma, converged=conv.converged,
                          condition=cond, iterations=conv.iterations)
    return sol, report


__all__ = ["DualSolution", "evaluate_dual", "solve_linear_ode_lssvm",
           "solve_linear_pde_lssvm", "solve_nonlinear_ode_lssvm"]
