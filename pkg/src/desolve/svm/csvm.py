"""CSVM: an RBF-kernel free function inside a TFC constrained expression.

The model is ``y = w^T Phi(t) + offset(t)`` where ``Phi`` is the constrained
expression applied to the feature map itself, so initial and boundary data
hold for every ``w``. Only the DE residuals remain as constraints; with
``w = sum_i alpha_i F_i`` and ``e = -alpha / gamma`` the system reduces to
``(<F_i, F_j> + delta_ij / gamma) alpha = rhs``.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from ..core.kernels import KernelConfig, gram, rbf_kernel_block
from ..core.linalg import solve_dense
from ..core.optimize import newton_solve
from ..errors import InvalidArgumentError, NumericError, SingularJacobianError
from ..problems import LINEAR_1ST, LINEAR_2ND, LINEAR_PDE, NONLINEAR_1ST
from ..report import build_report, test_points
from ..tfc.expressions import build_dirichlet_expression, build_ivp_expression
from ..tfc.solver import improved_euler, pde_side
from .dual import (UNIFORM, KernelExpansion, KernelSolution, check_variant, kkt_matrix,
                   point_family, tensor_training_points, training_grid)

METHOD = "csvm"
LINEAR_ODE = "csvm-linear-ode"
NONLINEAR_ODE = "csvm-nonlinear-ode"
PDE = "csvm-pde"

NONLINEAR_MAX_ITER = 50
NONLINEAR_STEP_TOL = 1e-12
NONLINEAR_FLOOR = 30.0


@dataclass(frozen=True)
class CsvmLinearSystem:
    """First-order linear CSVM system ``M alpha = rhs`` in kernel form.

    ``K4[i, j] = K(t_i, t_j) - K(t_j, t0) - K(t_i, t0) + 1`` and
    ``Ky[i, j] = K1(t_j, t_i) - K1(t_j, t0) - p(t_j) K4[i, j]`` with
    ``K1(a, b) = phi'(a)^T phi(b)``.
    """

    M: np.ndarray
    rhs: np.ndarray
    K4: np.ndarray
    Ky: np.ndarray


def _k4(t, tj, t0, sigma):
    K, *_ = rbf_kernel_block(t, tj, sigma)
    Kt0, *_ = rbf_kernel_block(t, [t0], sigma)
    Kj0, *_ = rbf_kernel_block(tj, [t0], sigma)
    return K - Kj0[:, 0][None, :] - Kt0[:, 0][:, None] + 1.0


def ky_block(t, tj, t0, p_j, sigma):
    """``Ky(t, t_j)`` for evaluation points ``t`` against training points ``tj``."""
    t = np.atleast_1d(np.asarray(t, float))
    _, K1_jt, _, _ = rbf_kernel_block(tj, t, sigma)        # K1(t_j, t)
    _, K1_j0, _, _ = rbf_kernel_block(tj, [t0], sigma)     # K1(t_j, t0)
    return K1_jt.T - K1_j0[:, 0][None, :] - p_j[None, :] * _k4(t, tj, t0, sigma)


def csvm_linear_system(problem, ti, cfg):
    """Assemble ``M`` and the right-hand side for ``y' - p y = r`` on points ``ti``."""
    if problem.kind != LINEAR_1ST:
        raise InvalidArgumentError("the kernel-form system covers first-order linear ODEs")
    t0, s = problem.t0, cfg.sigma
    p = np.broadcast_to(problem.p(ti), ti.shape).astype(float)
    r = np.broadcast_to(problem.r(ti), ti.shape).astype(float)
    _, K1, _, K11 = rbf_kernel_block(ti, ti, s)
    _, K1_i0, _, _ = rbf_kernel_block(ti, [t0], s)
    K4 = _k4(ti, ti, t0, s)
    Ky = ky_block(ti, ti, t0, p, s)
    M = (K11 - p[None, :] * (K1 - K1_i0[:, 0][:, None]) - p[:, None] * Ky
         + np.eye(ti.size) / cfg.gamma)
    return CsvmLinearSystem(M, r + p * problem.y0, K4, Ky)


@dataclass(frozen=True, eq=False)
class CsvmDualSolution(KernelSolution):
    """Solved CSVM model; constraints hold identically through ``expression``."""

    variant: str
    alpha: np.ndarray
    kernel: KernelConfig
    train_points: np.ndarray
    expression: object
    eta: np.ndarray = None
    y_nodes: np.ndarray = None
    dim: int = 1
    system: tuple = field(default=None, repr=False)
    p_nodes: np.ndarray = field(default=None, repr=False)
    _expansion: KernelExpansion = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def _model(self, *args):
        g = point_family(None, self.dim)
        *pts, order = args
        return self.expression.free_part(g, *pts, order), self.expression.offset(*pts, order)

    def ky_values(self, t):
        """Value through the closed ``Ky`` formula (first-order linear variant)."""
        if self.variant != LINEAR_ODE or self.p_nodes is None:
            raise InvalidArgumentError("Ky evaluation needs a first-order linear solution")
        t = np.atleast_1d(np.asarray(t, float))
        key = t.tobytes()
        if key not in self._cache:
            self._cache[key] = ky_block(t, self.train_points[1:], self.expression.t0,
                                        self.p_nodes, self.kernel.sigma)
        return self._cache[key] @ self.alpha + self.expression.y0

    def free_function(self):
        """Scalar ``g = w^T D phi`` at given points, as a free function."""
        g = point_family(None, self.dim)
        return lambda *args: self._expansion.inner(g(*args))

    def __call__(self, points, deriv=0):
        pts = self._points(points)
        if self.p_nodes is not None and deriv == 0:
            return self.ky_values(pts)
        # Evaluating g first and then the expression makes the boundary terms
        # cancel on identical numbers, so the constraints hold to rounding.
        if self.dim == 2:
            order = (0, 0) if deriv == 0 else tuple(deriv)
            return self.expression.evaluate(self.free_function(), pts[:, 0], pts[:, 1], order)
        return self.expression.evaluate(self.free_function(), pts, int(deriv))


def evaluate_csvm(sol, point, deriv=0):
    """Evaluate a CSVM solution (or a derivative) at ``point``."""
    check_variant(sol, CsvmDualSolution, "evaluate_csvm")
    out = sol(point, deriv)
    return float(out[0]) if np.ndim(point) == 0 or (sol.dim == 2 and np.size(point) == 2) \
        else out


def _check_cfg(cfg):
    if not isinstance(cfg, KernelConfig):
        raise InvalidArgumentError("cfg must be a KernelConfig")


def _solve_alpha(F, rhs, cfg):
    A = kkt_matrix(gram(F, F, cfg.sigma), np.zeros((F.n, 0)), np.zeros((0, 0)),
                   None, None, cfg.gamma)
    sol = solve_dense(A, rhs)
    return sol.x, (A, rhs, sol.x), sol.condition


def residual_functionals(problem, expr, ti):
    """Free-part functionals ``F_i`` and right-hand side of the collocated DE."""
    g = point_family(None, 1)
    F, known = 0, 0
    for k, a in enumerate(problem.lhs):
        ak = np.broadcast_to(np.asarray(a(ti), float), ti.shape)
        F = F + expr.free_part(g, ti, k) * ak
        known = known + ak * expr.offset(ti, k)
    rhs = np.broadcast_to(np.asarray(problem.rhs(ti), float), ti.shape) - known
    return F, rhs


def solve_linear_ode_csvm(problem, N, cfg, grid=UNIFORM, n_test=None):
    """First- or second-order linear ODE with constraints embedded exactly.

    First order solves the closed ``M`` system; second order goes through
    the constrained expression ``g - g(t0) - (t - t0) g'(t0)`` applied to
    the feature map.
    """
    if problem.kind not in (LINEAR_1ST, LINEAR_2ND):
        raise InvalidArgumentError(f"{problem.id} is not a linear ODE")
    _check_cfg(cfg)
    start = time.perf_counter()
    t = training_grid(problem.t0, problem.tf, N, grid)
    ti = t[1:]
    expr = build_ivp_expression(problem.t0, problem.y0, problem.ydot0)
    F, rhs = residual_functionals(problem, expr, ti)
    p_nodes = None
    if problem.kind == LINEAR_1ST:
        csys = csvm_linear_system(problem, ti, cfg)
        sol = solve_dense(csys.M, csys.rhs)
        alpha, system, cond = sol.x, (csys.M, csys.rhs, sol.x), sol.condition
        p_nodes = np.broadcast_to(problem.p(ti), ti.shape).astype(float)
    else:
        alpha, system, cond = _solve_alpha(F, rhs, cfg)
    elapsed = time.perf_counter() - start
    out = CsvmDualSolution(LINEAR_ODE, alpha, cfg, t, expr, system=system, p_nodes=p_nodes,
                           _expansion=KernelExpansion([(alpha, F)], cfg.sigma))
    report = build_report(problem, METHOD, N, out, t, test_points(problem, n_test), elapsed,
                          hp_sigma=cfg.sigma, hp_gamma=cfg.gamma, condition=cond)
    return out, report


def solve_pde_csvm(problem, n_domain, cfg, grid=UNIFORM, n_test=None):
    """Poisson problem with the Dirichlet data built into the model.

    ``F_I`` is the Laplacian of ``phi - B(phi) v v`` at interior point I, so
    the Gram matrix holds all sixteen kernel-product terms of the tensor
    form; ``rhs_I = f_I - lap(A v v)_I``.
    """
    if problem.kind != LINEAR_PDE:
        raise InvalidArgumentError(f"{problem.id} is not a PDE problem")
    _check_cfg(cfg)
    start = time.perf_counter()
    inner, edge = tensor_training_points(problem.domain, pde_side(n_domain), grid)
    expr = build_dirichlet_expression(*problem.boundaries, domain=problem.domain)
    g = point_family(None, 2)
    x, y = inner[:, 0], inner[:, 1]
    F = expr.free_part(g, x, y, (2, 0)) + expr.free_part(g, x, y, (0, 2))
    rhs = (np.asarray(problem.rhs(x, y), float)
           - expr.offset(x, y, (2, 0)) - expr.offset(x, y, (0, 2)))
    alpha, system, cond = _solve_alpha(F, rhs, cfg)
    elapsed = time.perf_counter() - start
    pts = np.vstack([inner, edge])
    out = CsvmDualSolution(PDE, alpha, cfg, pts, expr, dim=2, system=system,
                           _expansion=KernelExpansion([(alpha, F)], cfg.sigma))
    report = build_report(problem, METHOD, n_domain, out, pts, test_points(problem, n_test),
                          elapsed, hp_sigma=cfg.sigma, hp_gamma=cfg.gamma, condition=cond)
    return out, report


class _NonlinearSystem:
    """The ``3N`` stationarity system in ``(alpha, eta, y)``.

    ``D_i = phi'(t_i)`` and ``V_i = phi(t_i) - phi(t0)``.
    """

    def __init__(self, problem, t, expr, cfg):
        self.problem = problem
        self.ti = t[1:]
        self.n = self.ti.size
        g = point_family(None, 1)
        self.D = expr.free_part(g, self.ti, 1)
        self.V = expr.free_part(g, self.ti, 0)
        s = cfg.sigma
        self.DD, self.DV, self.VV = gram(self.D, self.D, s), gram(self.D, self.V, s), \
            gram(self.V, self.V, s)
        self.gamma = cfg.gamma

    def split(self, x):
        n = self.n
        return x[:n], x[n:2 * n], x[2 * n:]

    def residual(self, x):
        a, eta, y = self.split(x)
        p = self.problem
        r1 = self.DD @ a + self.DV @ eta - p.f(self.ti, y) + a / self.gamma
        r2 = self.DV.T @ a + self.VV @ eta + p.y0 - y
        r3 = a * p.f_y(self.ti, y) + eta
        return np.concatenate([r1, r2, r3])

    def jacobian(self, x):
        a, eta, y = self.split(x)
        n, p = self.n, self.problem
        fy = np.asarray(p.f_y(self.ti, y), float)
        fyy = np.broadcast_to(np.asarray(p.f_yy(self.ti, y), float), y.shape)
        A, E, Y = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n)
        J = np.zeros((3 * n, 3 * n))
        J[A, A] = self.DD + np.eye(n) / self.gamma
        J[A, E] = self.DV
        J[A, Y] = -np.diag(fy)
        J[E, A] = self.DV.T
        J[E, E] = self.VV
        J[E, Y] = -np.eye(n)
        J[Y, A] = np.diag(fy)
        J[Y, E] = np.eye(n)
        J[Y, Y] = np.diag(a * fyy)
        return J


def _dense_step(J, L):
    try:
        return solve_dense(J, L).x
    except NumericError as exc:
        raise SingularJacobianError(str(exc), condition=exc.condition) from exc


def solve_nonlinear_ode_csvm(problem, N, cfg, grid=UNIFORM, n_test=None,
                             max_iter=NONLINEAR_MAX_ITER, step_tol=NONLINEAR_STEP_TOL):
    """``y' = f(t, y)`` via Newton on the ``3N`` system; ``y(t0) = y0`` is exact."""
    if problem.kind != NONLINEAR_1ST:
        raise InvalidArgumentError(f"{problem.id} is not a nonlinear first-order ODE")
    _check_cfg(cfg)
    start = time.perf_counter()
    t = training_grid(problem.t0, problem.tf, N, grid)
    expr = build_ivp_expression(problem.t0, problem.y0)
    sysm = _NonlinearSystem(problem, t, expr, cfg)
    n = sysm.n
    x0 = np.concatenate([np.zeros(2 * n), improved_euler(problem.f, t, problem.y0)[1:]])
    x, conv = newton_solve(sysm.residual, sysm.jacobian, x0, eps=1e-300, max_iter=max_iter,
                           step_tol=step_tol, linear_solver=_dense_step,
                           reject_increase=False, floor_factor=NONLINEAR_FLOOR)
    elapsed = time.perf_counter() - start
    a, eta, y = sysm.split(x)
    J, L = sysm.jacobian(x), sysm.residual(x)
    cond = solve_dense(J, L).condition
    out = CsvmDualSolution(NONLINEAR_ODE, a, cfg, t, expr, eta=eta, y_nodes=y,
                           system=(J, L, x),
                           _expansion=KernelExpansion([(a, sysm.D), (eta, sysm.V)], cfg.sigma))
    report = build_report(problem, METHOD, N, out, t, test_points(problem, n_test), elapsed,
                          hp_sigma=cfg.sigma, hp_gamma=cfg.gamma, converged=conv.converged,
                          condition=cond, iterations=conv.iterations)
    return out, report


__all__ = ["CsvmDualSolution", "CsvmLinearSystem", "csvm_linear_system", "evaluate_csvm",
           "ky_block", "solve_linear_ode_csvm", "solve_nonlinear_ode_csvm", "solve_pde_csvm"]
