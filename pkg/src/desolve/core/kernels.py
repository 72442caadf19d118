"""Gaussian RBF kernel, its analytic partial derivatives and kernel functionals.

For ``K(a, b) = exp(-(a - b)**2 / sigma**2)`` with ``s = (a - b) / sigma``::

    d^p/da^p d^q/db^q K = (-1)**p * H_{p+q}(s) * exp(-s**2) / sigma**(p+q)

where ``H_n`` are the physicists' Hermite polynomials. The 2-D kernel is the
product of two 1-D factors, so its partials are products of 1-D partials.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import InvalidArgumentError, UnsupportedOrderError

MAX_ORDER_1D = 4
MAX_ORDER_PER_ARG_2D = 2


@dataclass(frozen=True)
class KernelConfig:
    sigma: float
    gamma: float

    def __post_init__(self):
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise InvalidArgumentError(f"sigma must be positive, got {self.sigma}")
        if not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise InvalidArgumentError(f"gamma must be positive, got {self.gamma}")


def _hermite(n, s):
    h_prev, h = np.ones_like(s), 2.0 * s
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * s * h - 2.0 * k * h_prev
    return h


def _partial_1d(a, b, sigma, p, q):
    s = (np.subtract.outer(np.atleast_1d(a), np.atleast_1d(b))) / sigma
    sign = -1.0 if p % 2 else 1.0
    return sign * _hermite(p + q, s) * np.exp(-s * s) / sigma ** (p + q)


def _check_sigma(sigma):
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma must be positive, got {sigma}")


def rbf_partial(ti, tj, sigma, p=0, q=0):
    """Matrix of ``d^p/da^p d^q/db^q K(a, b)`` at ``a = ti[i]``, ``b = tj[j]``."""
    _check_sigma(sigma)
    if p < 0 or q < 0 or p + q > MAX_ORDER_1D:
        raise UnsupportedOrderError(f"kernel partial ({p}, {q}) exceeds order {MAX_ORDER_1D}")
    return _partial_1d(np.asarray(ti, float), np.asarray(tj, float), sigma, p, q)


def rbf_kernel_block(ti, tj, sigma):
    """Return ``(K, K1, K1T, K11)`` for all pairs ``(ti[i], tj[j])``.

    ``K1 = phi'(ti)^T phi(tj)``, ``K1T = phi(ti)^T phi'(tj)`` and
    ``K11 = phi'(ti)^T phi'(tj) = (2/sigma^2 - 4 u^2/sigma^4) K`` with u = ti - tj.
    """
    _check_sigma(sigma)
    u = np.subtract.outer(np.atleast_1d(np.asarray(ti, float)),
                          np.atleast_1d(np.asarray(tj, float)))
    s2 = sigma * sigma
    K = np.exp(-u * u / s2)
    K1 = -2.0 * u / s2 * K
    K11 = (2.0 / s2 - 4.0 * u * u / (s2 * s2)) * K
    return K, K1, -K1, K11


def rbf_kernel_2d_block(p_i, p_j, sigma, orders):
    """Analytic partials of the 2-D Gaussian kernel between two point lists.

    ``orders`` is an iterable of ``(ax, ay, bx, by)``: the derivative counts in
    x and y of the first and of the second argument. Each argument may carry
    total order at most 2. Returns ``{order: matrix}``.
    """
    _check_sigma(sigma)
    p_i = np.atleast_2d(np.asarray(p_i, float))
    p_j = np.atleast_2d(np.asarray(p_j, float))
    out = {}
    for order in orders:
        ax, ay, bx, by = order
        if min(order) < 0 or ax + ay > MAX_ORDER_PER_ARG_2D or bx + by > MAX_ORDER_PER_ARG_2D:
            raise UnsupportedOrderError(f"unsupported 2-D kernel partial {order}")
        out[tuple(order)] = (_partial_1d(p_i[:, 0], p_j[:, 0], sigma, ax, bx)
                             * _partial_1d(p_i[:, 1], p_j[:, 1], sigma, ay, by))
    return out


class Functional:
    """A family of ``n`` linear functionals acting on the feature map phi.

    Member i is ``sum_terms coef[i] * D^order phi(points[i])``. Families can be
    added, negated and scaled row-wise, so an affine expression written for
    arrays (a constrained expression, a differential operator) can be applied
    to phi symbolically. Inner products between members reduce to kernel
    partials via :func:`gram`.
    """

    __slots__ = ("terms", "n", "dim")

    def __init__(self, terms, n, dim):
        self.terms = list(terms)
        self.n = n
        self.dim = dim

    @classmethod
    def point_eval(cls, points, order=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        n, dim = pts.shape
        order = (0,) * dim if order is None else tuple(np.atleast_1d(order).tolist())
        if len(order) != dim:
            raise InvalidArgumentError(f"order {order} does not match dimension {dim}")
        return cls([(np.ones(n), order, pts)], n, dim)

    def _compatible(self, other):
        if self.n != other.n or self.dim != other.dim:
            raise InvalidArgumentError("functional families differ in size or dimension")

    def __add__(self, other):
        if isinstance(other, (int, float)) and other == 0:
            return self
        self._compatible(other)
        return Functional(self.terms + other.terms, self.n, self.dim)

    __radd__ = __add__

    def __neg__(self):
        return Functional([(-c, o, p) for c, o, p in self.terms], self.n, self.dim)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scale):
        scale = np.asarray(scale, dtype=float)
        if scale.ndim == 1 and scale.shape[0] == 1 and self.n != 1:
            scale = scale[0]
        return Functional([(c * scale, o, p) for c, o, p in self.terms], self.n, self.dim)

    __rmul__ = __mul__

    def simplified(self, atol=0.0):
        """Drop terms whose coefficients are all (near) zero."""
        kept = [t for t in self.terms if np.max(np.abs(t[0])) > atol]
        return Functional(kept, self.n, self.dim)


def gram(F, G, sigma):
    """Inner products ``<F_i, G_j>`` in feature space, shape ``(F.n, G.n)``."""
    _check_sigma(sigma)
    if F.dim != G.dim:
        raise InvalidArgumentError("functional dimensions differ")
    out = np.zeros((F.n, G.n))
    for (cf, of, pf), (cg, og, pg) in product(F.terms, G.terms):
        block = np.outer(cf, cg)
        for d in range(F.dim):
            block = block * _partial_1d(pf[:, d], pg[:, d], sigma, of[d], og[d])
        out += block
    return out
