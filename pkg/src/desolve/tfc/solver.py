"""TFC solvers: Chebyshev free function inside a constrained expression."""

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from ..core.grid import chebyshev_values, make_collocation_grid
from ..core.linalg import solve_least_squares
from ..core.optimize import NEWTON_EPS, NEWTON_MAX_ITER, newton_solve
from ..errors import DomainError, InvalidArgumentError, NumericError
from ..problems import LINEAR_1ST, LINEAR_2ND, LINEAR_PDE, NONLINEAR_1ST
from ..report import build_report, test_points
from .expressions import build_dirichlet_expression, build_ivp_expression

METHOD = "tfc"
GN_STEP_TOL = 1e-12
GN_GRAD_TOL = 1e-6


class ChebyshevBasis1D:
    """``h(x(t))`` and its t-derivatives ``c^k h^(k)(x)`` on ``[t0, tf]``."""

    def __init__(self, t0, tf, m):
        self.t0, self.tf, self.m = float(t0), float(tf), int(m)
        self.c = 2.0 / (tf - t0)

    def __call__(self, t, k=0):
        x = -1.0 + self.c * (np.asarray(t, float) - self.t0)
        return self.c ** k * chebyshev_values(x, self.m, k)[k]


class ChebyshevBasis2D:
    """Products ``T_a(x) T_b(y)`` with ``a, b >= 2`` and ``a + b <= m``.

    Products with ``a < 2`` or ``b < 2`` are linear in one variable, so the
    Dirichlet expression cancels them exactly; they are left out rather than
    carried as null columns. Capping the total degree keeps the system
    overdetermined on the training grids in use.
    """

    def __init__(self, domain, m):
        (x0, x1), (y0, y1) = domain
        self.bx = ChebyshevBasis1D(x0, x1, m + 1)
        self.by = ChebyshevBasis1D(y0, y1, m + 1)
        self.m = int(m)
        self.pairs = [(a, b) for a in range(2, m + 1) for b in range(2, m + 1) if a + b <= m]
        self._ia = np.array([a for a, _ in self.pairs], dtype=int)
        self._ib = np.array([b for _, b in self.pairs], dtype=int)

    @property
    def size(self):
        return len(self.pairs)

    def __call__(self, x, y, order=(0, 0)):
        hx = self.bx(x, order[0])
        hy = self.by(y, order[1])
        return hx[:, self._ia] * hy[:, self._ib]


@dataclass(frozen=True)
class TfcSolution:
    xi: np.ndarray
    expression: object
    basis: object
    grid: object
    m: int
    domain: tuple
    convergence: object = None

    @property
    def is_2d(self):
        return isinstance(self.basis, ChebyshevBasis2D)

    def free_function(self):
        if self.is_2d:
            return lambda x, y, order: self.basis(x, y, order) @ self.xi
        return lambda t, k: self.basis(t, k) @ self.xi

    def __call__(self, points, deriv=0):
        pts = np.asarray(points, float)
        if self.is_2d:
            pts = pts.reshape(-1, 2)
            order = (0, 0) if deriv == 0 else tuple(deriv)
            return self.expression.evaluate(self.free_function(), pts[:, 0], pts[:, 1], order)
        return self.expression.evaluate(self.free_function(), np.atleast_1d(pts), deriv)


def _in_domain(domain, pts, is_2d, tol=1e-12):
    if is_2d:
        (x0, x1), (y0, y1) = domain
        return bool(np.all((pts[:, 0] >= x0 - tol) & (pts[:, 0] <= x1 + tol)
                           & (pts[:, 1] >= y0 - tol) & (pts[:, 1] <= y1 + tol)))
    return bool(np.all((pts >= domain[0] - tol) & (pts <= domain[1] + tol)))


def evaluate_tfc(sol, point, deriv=0, extrapolate=False):
    """Value (or derivative) of a TFC solution at a point or array of points."""
    pts = np.asarray(point, float)
    pts = pts.reshape(-1, 2) if sol.is_2d else np.atleast_1d(pts)
    if not extrapolate and not _in_domain(sol.domain, pts, sol.is_2d):
        raise DomainError(f"point {point} outside the solution domain {sol.domain}")
    out = sol(pts, deriv)
    return float(out[0]) if out.size == 1 and np.ndim(point) <= (1 if sol.is_2d else 0) else out


def _expression_for(problem):
    if problem.kind == LINEAR_2ND:
        return build_ivp_expression(problem.t0, problem.y0, problem.ydot0)
    return build_ivp_expression(problem.t0, problem.y0)


def _check_m(m, n_rows, n_constraints):
    if int(m) != m or m < n_constraints + 1:
        raise InvalidArgumentError(f"m must be an integer >= {n_constraints + 1}, got {m}")
    if m > n_rows:
        warnings.warn(f"m={m} exceeds the {n_rows} collocation equations; "
                      "using the minimum-norm solution", stacklevel=3)


def assemble_linear_ode(problem, expr, basis, t):
    """Rows ``A xi = b`` of the linear DE collocated at ``t``."""
    A = 0.0
    b = np.asarray(problem.rhs(t), float)
    for k, a in enumerate(problem.lhs):
        coef = np.asarray(a(t), float) * np.ones_like(t)
        A = A + coef[:, None] * expr.free_part(basis, t, k)
        b = b - coef * expr.offset(t, k)
    return A, b


def _cond(A):
    """Condition number of the column-equilibrated matrix on its numerical range.

    Columns that vanish up to rounding (the support-function directions) are
    ignored, matching what the least-squares solve does with them.
    """
    norms = np.linalg.norm(A, axis=0)
    tol = max(A.shape) * np.finfo(float).eps
    live = norms > tol * norms.max()
    if not np.any(live):
        return math.inf
    s = np.linalg.svd(A[:, live] / norms[live], compute_uv=False)
    s = s[s > tol * s[0]]
    return float(s[0] / s[-1])


def solve_linear_ode_tfc(problem, N, m, n_test=None):
    if problem.kind not in (LINEAR_1ST, LINEAR_2ND):
        raise InvalidArgumentError(f"{problem.id} is not a linear ODE")
    start = time.perf_counter()
    grid = make_collocation_grid(N, problem.t0, problem.tf)
    expr = _expression_for(problem)
    _check_m(m, N + 1, problem.order)
    basis = ChebyshevBasis1D(problem.t0, problem.tf, m)
    A, b = assemble_linear_ode(problem, expr, basis, grid.t_points)
    xi = solve_least_squares(A, b, scale_columns=True)
    elapsed = time.perf_counter() - start
    sol = TfcSolution(xi, expr, basis, grid, int(m), (problem.t0, problem.tf))
    report = build_report(problem, METHOD, N, sol, grid.t_points,
                          test_points(problem, n_test), elapsed, hp_m=m,
                          condition=_cond(A))
    return sol, report


def _scaled_lstsq(J, L):
    return solve_least_squares(J, L, scale_columns=True)


def improved_euler(f, t, y0):
    """Heun's method along the (possibly non-uniform) abscissae ``t``."""
    y = np.empty_like(t)
    y[0] = y0
    for i in range(len(t) - 1):
        h = t[i + 1] - t[i]
        k1 = f(t[i], y[i])
        k2 = f(t[i + 1], y[i] + h * k1)
        y[i + 1] = y[i] + 0.5 * h * (k1 + k2)
    return y


def solve_nonlinear_ode_tfc(problem, N, m, eps=NEWTON_EPS, max_iter=NEWTON_MAX_ITER,
                            n_test=None, step_tol=GN_STEP_TOL):
    """Newton iteration on ``y' - f(t, y)`` collocated at the CGL points.

    The initial coefficients are a least-squares fit of an improved-Euler
    trajectory on the same grid. When there are more collocation equations
    than free coefficients the residual cannot reach ``eps``; the iteration
    then counts as converged at a least-squares stationary point (residual
    orthogonal to the Jacobian's range to ``GN_GRAD_TOL``) or once the
    Gauss-Newton step drops below ``step_tol`` relative to the coefficients. The Newton record is attached
    as ``solution.convergence``.
    """
    if problem.kind != NONLINEAR_1ST:
        raise InvalidArgumentError(f"{problem.id} is not a nonlinear first-order ODE")
    start = time.perf_counter()
    grid = make_collocation_grid(N, problem.t0, problem.tf)
    t = grid.t_points
    expr = build_ivp_expression(problem.t0, problem.y0)
    _check_m(m, N + 1, 1)
    basis = ChebyshevBasis1D(problem.t0, problem.tf, m)
    Hy, cy = expr.free_part(basis, t, 0), expr.offset(t, 0)
    Hd, cd = expr.free_part(basis, t, 1), expr.offset(t, 1)

    with np.errstate(all="ignore"):
        y_euler = improved_euler(problem.f, t, problem.y0)
    if np.all(np.isfinite(y_euler)):
        xi0 = solve_least_squares(Hy, y_euler - cy, scale_columns=True)
    else:
        xi0 = np.zeros(basis.m)

    def residual(xi):
        return Hd @ xi + cd - problem.f(t, Hy @ xi + cy)

    def jacobian(xi):
        return Hd - problem.f_y(t, Hy @ xi + cy)[:, None] * Hy

    xi, conv = newton_solve(residual, jacobian, xi0, eps=eps, max_iter=max_iter,
                            step_tol=step_tol, linear_solver=_scaled_lstsq,
                            grad_tol=GN_GRAD_TOL)
    elapsed = time.perf_counter() - start
    sol = TfcSolution(xi, expr, basis, grid, int(m), (problem.t0, problem.tf), conv)
    report = build_report(problem, METHOD, N, sol, t, test_points(problem, n_test), elapsed,
                          hp_m=m, converged=conv.converged, condition=_cond(jacobian(xi)),
                          iterations=conv.iterations)
    return sol, report


def pde_side(n_interior):
    """Points per axis of the square training grid, boundary rows included."""
    if int(n_interior) != n_interior or n_interior < 1:
        raise InvalidArgumentError(f"interior point count must be positive, got {n_interior}")
    return math.isqrt(int(n_interior) - 1) + 1 + 2


def pde_collocation_points(problem, n_interior):
    side = pde_side(n_interior)
    (x0, x1), (y0, y1) = problem.domain
    gx = make_collocation_grid(side - 1, x0, x1)
    gy = make_collocation_grid(side - 1, y0, y1)
    X, Y = np.meshgrid(gx.t_points, gy.t_points, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel()]), (gx, gy)


def assemble_pde(problem, expr, basis, pts):
    x, y = pts[:, 0], pts[:, 1]
    A = expr.free_part(basis, x, y, (2, 0)) + expr.free_part(basis, x, y, (0, 2))
    b = (np.asarray(problem.rhs(x, y), float)
         - expr.offset(x, y, (2, 0)) - expr.offset(x, y, (0, 2)))
    return A, b


def solve_linear_pde_tfc(problem, n_interior, m, n_test=None):
    """Laplace-type PDE with a product-Chebyshev free function.

    The residual is collocated on the whole CGL tensor grid; the boundary
    values are exact by construction of the expression.
    """
    if problem.kind != LINEAR_PDE:
        raise InvalidArgumentError(f"{problem.id} is not a PDE problem")
    if int(m) != m or m < 4:
        raise InvalidArgumentError(f"m must be an integer >= 4, got {m}")
    start = time.perf_counter()
    pts, grids = pde_collocation_points(problem, n_interior)
    expr = build_dirichlet_expression(*problem.boundaries, domain=problem.domain)
    basis = ChebyshevBasis2D(problem.domain, m)
    A, b = assemble_pde(problem, expr, basis, pts)
    if basis.size > A.shape[0]:
        warnings.warn(f"{basis.size} basis products exceed {A.shape[0]} collocation equations; "
                      "using the minimum-norm solution", stacklevel=2)
    xi = solve_least_squares(A, b, scale_columns=True)
    elapsed = time.perf_counter() - start
    sol = TfcSolution(xi, expr, basis, grids, int(m), problem.domain)
    report = build_report(problem, METHOD, n_interior, sol, pts, test_points(problem, n_test),
                          elapsed, hp_m=m, condition=_cond(A))
    return sol, report
