"""Gauss-Newton iteration and a downhill-simplex minimizer."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError, SingularJacobianError
from .linalg import solve_least_squares

NEWTON_EPS = 1e-13
NEWTON_MAX_ITER = 30
SIMPLEX_TOL = 1e-8
SIMPLEX_MAX_EVALS = 400


@dataclass(frozen=True)
class ConvergenceReport:
    iterations: int
    residual_norm: float
    converged: bool
    history: tuple = ()
    stalled: bool = False


def newton_solve(residual_fn, jacobian_fn, xi0, eps=NEWTON_EPS, max_iter=NEWTON_MAX_ITER,
                 step_tol=None, linear_solver=None, reject_increase=True, floor_factor=None,
                 grad_tol=None):
    """Newton / Gauss-Newton iteration ``xi <- xi - (J^T J)^-1 J^T L``.

    The step is computed by ``linear_solver(J, L)``; the default is the
    minimum-norm least-squares solve, which equals the normal-equation step
    for full-rank J and stays defined when J has a null space.

    Stops when ``||L||_2 < eps``, or when ``step_tol`` is given and the step
    norm falls below ``step_tol * (1 + ||xi||)``. A step that fails to reduce
    the residual norm is rejected and the iteration stops with
    ``stalled=True``; the converged flag then reflects whether the final
    residual met ``eps``.
    """
    if eps <= 0:
        raise InvalidArgumentError("eps must be positive")
    solve = linear_solver or solve_least_squares
    xi = np.array(xi0, dtype=float)
    L = np.asarray(residual_fn(xi), dtype=float)
    norm = float(np.linalg.norm(L))
    history = [norm]
    it = 0
    converged = norm < eps
    stalled = False
    while not converged and it < max_iter:
        J = np.asarray(jacobian_fn(xi), dtype=float)
        if J.ndim != 2 or J.shape[0] != L.shape[0] or J.shape[1] != xi.shape[0]:
            raise InvalidArgumentError(
                f"jacobian shape {J.shape} inconsistent with residual {L.shape} "
                f"and unknowns {xi.shape}")
        if not np.all(np.isfinite(J)) or not np.any(J):
            raise SingularJacobianError("jacobian is zero or non-finite")
        if floor_factor is not None:
            floor = floor_factor * np.finfo(float).eps * np.linalg.norm(np.abs(J) @ np.abs(xi) + 1.0)
            if norm <= floor:
                converged = True
                break
        if grad_tol is not None:
            g = np.linalg.norm(J.T @ L)
            if g <= grad_tol * np.linalg.norm(J) * norm:
                converged = True
                break
        step = solve(J, L)
        trial = xi - step
        L_trial = np.asarray(residual_fn(trial), dtype=float)
        trial_norm = float(np.linalg.norm(L_trial))
        it += 1
        small_step = (step_tol is not None
                      and np.linalg.norm(step) <= step_tol * (1.0 + np.linalg.norm(xi)))
        if not np.isfinite(trial_norm):
            stalled = True
            break
        if reject_increase and trial_norm >= norm and not small_step:
            stalled = True
            break
        xi, L, norm = trial, L_trial, trial_norm
        history.append(norm)
        converged = norm < eps or small_step
    if stalled and grad_tol is not None and not converged:
        J = np.asarray(jacobian_fn(xi), dtype=float)
        converged = bool(np.linalg.norm(J.T @ L) <= grad_tol * np.linalg.norm(J) * norm)
    return xi, ConvergenceReport(it, norm, bool(converged), tuple(history), stalled)


def nelder_mead_minimize(objective_fn, x0, tol=SIMPLEX_TOL, max_evals=SIMPLEX_MAX_EVALS):
    """Downhill simplex (reflection 1, expansion 2, contraction 0.5, shrink 0.5).

    The start simplex perturbs each coordinate of ``x0`` by 5% (0.00025 for
    zero coordinates). Non-finite objective values away from ``x0`` count as
    +inf. Returns ``(x_best, f_best)``.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    f0 = float(objective_fn(x0 if x0.size > 1 else x0.copy()))
    if not np.isfinite(f0):
        raise InvalidArgumentError("objective is not finite at the start point")
    n = x0.size

    def f(x):
        v = float(objective_fn(x))
        return v if np.isfinite(v) else np.inf

    simplex = [x0.copy()]
    for k in range(n):
        v = x0.copy()
        v[k] = v[k] * 1.05 if v[k] != 0 else 0.00025
        simplex.append(v)
    simplex = np.array(simplex)
    fvals = np.array([f0] + [f(v) for v in simplex[1:]])
    evals = n + 1

    while evals < max_evals:
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        diam = max(np.linalg.norm(simplex[i] - simplex[j])
                   for i in range(n + 1) for j in range(i + 1, n + 1))
        if diam < tol:
            break
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = f(xr)
        evals += 1
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = f(xe)
            evals += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-1]:
            xc = centroid + 0.5 * (xr - centroid)
        else:
            xc = centroid + 0.5 * (worst - centroid)
        fc = f(xc)
        evals += 1
        if fc < min(fr, fvals[-1]):
            simplex[-1], fvals[-1] = xc, fc
            continue
        for i in range(1, n + 1):
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            fvals[i] = f(simplex[i])
        evals += n

    best = int(np.argmin(fvals))
    return simplex[best].copy(), float(fvals[best])
