"""Pieces shared by the LS-SVM and CSVM solvers.

Both methods end up with a weight vector of the form ``w = sum_f coef_f . F_f``
where each ``F_f`` is a family of linear functionals of the feature map, and
a model that is ``w^T (linear functional of phi)(t) + offset(t)``. Everything
here is expressed through :func:`~desolve.core.kernels.gram`.
"""

import math

import numpy as np

from ..core.grid import make_collocation_grid
from ..core.kernels import Functional, gram
from ..errors import InvalidArgumentError

UNIFORM = "uniform"
CHEBYSHEV = "chebyshev"
GRID_KINDS = (UNIFORM, CHEBYSHEV)


def training_grid(t0, tf, n_intervals, kind=UNIFORM):
    """``n_intervals + 1`` training abscissae on ``[t0, tf]``, endpoints exact."""
    if int(n_intervals) != n_intervals or n_intervals < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {n_intervals}")
    if kind == CHEBYSHEV:
        return np.array(make_collocation_grid(int(n_intervals), t0, tf).t_points)
    if kind != UNIFORM:
        raise InvalidArgumentError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}")
    t = np.linspace(t0, tf, int(n_intervals) + 1)
    t[0], t[-1] = t0, tf
    return t


def tensor_training_points(domain, side, kind=UNIFORM):
    """Tensor grid with ``side`` points per axis, split into interior and edge points."""
    (x0, x1), (y0, y1) = domain
    gx = training_grid(x0, x1, side - 1, kind)
    gy = training_grid(y0, y1, side - 1, kind)
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    edge = (np.isin(X.ravel(), (gx[0], gx[-1])) | np.isin(Y.ravel(), (gy[0], gy[-1])))
    return pts[~edge], pts[edge]


def point_family(points, dim):
    """Free function ``g(points..., order)`` that returns point-evaluation functionals."""
    if dim == 1:
        return lambda t, k=0: Functional.point_eval(np.atleast_1d(t), (k,))
    return lambda x, y, order=(0, 0): Functional.point_eval(np.column_stack([x, y]), order)


class KernelExpansion:
    """Weight vector ``w = sum_f coef_f . F_f`` kept in functional form."""

    def __init__(self, pairs, sigma):
        self.pairs = tuple((np.asarray(c, float), F) for c, F in pairs if F.n)
        self.sigma = float(sigma)

    def inner(self, G):
        """``w^T G_j`` for every member of the family ``G``."""
        out = np.zeros(G.n)
        for coef, F in self.pairs:
            out += coef @ gram(F, G, self.sigma)
        return out

    def norm_sq(self):
        total = 0.0
        for ca, Fa in self.pairs:
            for cb, Fb in self.pairs:
                total += ca @ gram(Fa, Fb, self.sigma) @ cb
        return float(total)


class KernelSolution:
    """Base for solved kernel models: ``y(t) = w^T model(t) + offset(t)``.

    Subclasses provide ``dim``, ``_expansion`` and
    ``_model(points..., order) -> (Functional, offset array)``.
    """

    def _points(self, points):
        pts = np.asarray(points, float)
        if self.dim == 2:
            return pts.reshape(-1, 2)
        return np.atleast_1d(pts).ravel()

    def __call__(self, points, deriv=0):
        pts = self._points(points)
        if self.dim == 2:
            order = (0, 0) if deriv == 0 else tuple(deriv)
            F, off = self._model(pts[:, 0], pts[:, 1], order)
        else:
            F, off = self._model(pts, int(deriv))
        return self._expansion.inner(F) + off


def check_variant(sol, cls, name):
    if not isinstance(sol, cls):
        raise InvalidArgumentError(
            f"{name} cannot evaluate a {type(sol).__name__} "
            f"(variant {getattr(sol, 'variant', None)!r})")


def kkt_matrix(FF, FG, GG, a0, c, gamma):
    """Symmetric KKT matrix for unknowns ``(alpha, beta, b)``.

    Rows: residual equations ``w^T F_i + a0_i b - e_i = r_i`` with
    ``e = -alpha / gamma``; equality rows ``w^T G_l + c_l b = d_l``; and the
    bias stationarity ``sum alpha_i a0_i + sum beta_l c_l = 0``. Passing
    ``a0 = c = None`` drops the bias.
    """
    n, q = FF.shape[0], GG.shape[0]
    with_b = a0 is not None
    size = n + q + (1 if with_b else 0)
    A = np.zeros((size, size))
    A[:n, :n] = FF + np.eye(n) / gamma
    A[:n, n:n + q] = FG
    A[n:n + q, :n] = FG.T
    A[n:n + q, n:n + q] = GG
    if with_b:
        A[:n, -1] = a0
        A[-1, :n] = a0
        A[n:n + q, -1] = c
        A[-1, n:n + q] = c
    return A


def relative_residual(A, x, rhs):
    """``||A x - rhs||_inf / (1 + ||rhs||_inf)``."""
    rhs = np.asarray(rhs, float)
    return float(np.max(np.abs(A @ x - rhs)) / (1.0 + np.max(np.abs(rhs))))


def safe_condition(cond):
    return float(cond) if cond is not None else math.nan
