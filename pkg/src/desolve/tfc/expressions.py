"""Constrained expressions: affine maps from a free function g to a function
that meets the problem's initial or boundary constraints for every g.

A free function is any callable ``g(points, order)`` whose result supports
row scaling and addition: an ``(n, m)`` basis matrix, a length-n vector, or a
:class:`~desolve.core.kernels.Functional`. The expressions only ever combine
``g`` linearly, so the same code builds TFC collocation rows and CSVM kernel
functionals.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError, InvalidConstraintsError, UnsupportedOrderError

FIRST_ORDER = "ivp_first_order"
SECOND_ORDER = "ivp_second_order"


def _scale(weights, val):
    """Scale row i of ``val`` by ``weights[i]``."""
    if isinstance(val, np.ndarray) and val.ndim == 2:
        return np.asarray(weights, float)[:, None] * val
    return val * np.asarray(weights, float)


@dataclass(frozen=True)
class ConstrainedExpression1D:
    """``y = g + (y0 - g(t0))`` or, for the second-order kind,
    ``y = g + (y0 - g(t0)) + (t - t0)(ydot0 - g'(t0))``."""

    kind: str
    t0: float
    y0: float
    ydot0: float = None

    def free_part(self, g, t, k=0):
        """k-th t-derivative of the g-dependent part at points ``t``."""
        t = np.atleast_1d(np.asarray(t, float))
        at0 = np.full(t.shape, self.t0)
        out = g(t, k)
        if self.kind == SECOND_ORDER:
            if k == 0:
                out = out - g(at0, 0) - _scale(t - self.t0, g(at0, 1))
            elif k == 1:
                out = out - g(at0, 1)
        elif k == 0:
            out = out - g(at0, 0)
        return out

    def offset(self, t, k=0):
        """k-th t-derivative of the constant (g-independent) part."""
        t = np.atleast_1d(np.asarray(t, float))
        if k == 0:
            out = np.full(t.shape, float(self.y0))
            if self.kind == SECOND_ORDER:
                out = out + (t - self.t0) * self.ydot0
            return out
        if k == 1 and self.kind == SECOND_ORDER:
            return np.full(t.shape, float(self.ydot0))
        return np.zeros(t.shape)

    def evaluate(self, g, t, k=0):
        return self.free_part(g, t, k) + self.offset(t, k)


def build_ivp_expression(t0, y0, ydot0=None):
    vals = [t0, y0] + ([] if ydot0 is None else [ydot0])
    if not np.all(np.isfinite(vals)):
        raise InvalidArgumentError("constraint data must be finite")
    kind = FIRST_ORDER if ydot0 is None else SECOND_ORDER
    return ConstrainedExpression1D(kind, float(t0), float(y0),
                                   None if ydot0 is None else float(ydot0))


def _linear_weights(s, length, k):
    """k-th derivatives of ``(1 - s, s)`` with respect to the unscaled coordinate."""
    if k == 0:
        return (1.0 - s, s)
    if k == 1:
        one = np.full(s.shape, 1.0 / length)
        return (-one, one)
    return None


class _CurveData:
    """Edge data of the boundary functions as ``edge(s, k)`` callables."""

    def __init__(self, curve):
        self.curve = curve

    def __call__(self, s, k):
        value = getattr(self.curve, "value", self.curve)
        if k == 0:
            return np.asarray(value(s), float)
        if k == 2:
            d2 = getattr(self.curve, "d2", None)
            if d2 is not None:
                return np.asarray(d2(s), float)
            h = 1e-3
            return (-value(s + 2 * h) + 16 * value(s + h) - 30 * value(s)
                    + 16 * value(s - h) - value(s - 2 * h)) / (12 * h * h)
        raise UnsupportedOrderError(f"boundary curves provide orders 0 and 2, not {k}")


@dataclass(frozen=True)
class ConstrainedExpression2D:
    """Dirichlet data on the rectangle ``[x0, x1] x [y0, y1]``.

    ``c1(x) = z(x, y0)``, ``c2(y) = z(x0, y)``, ``c3(x) = z(x, y1)``,
    ``c4(y) = z(x1, y)``. The expression is the transfinite (Coons)
    interpolant of the boundary data plus ``g`` minus the same interpolant
    built from g's own boundary values, i.e. ``A_ij v_i v_j + g - B(g)_ij v_i v_j``
    with ``v = [1, 1 - s, s]`` in each normalized coordinate.
    """

    c1: object
    c2: object
    c3: object
    c4: object
    domain: tuple = ((0.0, 1.0), (0.0, 1.0))

    def _coons(self, bottom, top, left, right, corners, x, y, order):
        (x0, x1), (y0, y1) = self.domain
        dx, dy = order
        sx = (x - x0) / (x1 - x0)
        sy = (y - y0) / (y1 - y0)
        u = _linear_weights(sx, x1 - x0, dx)
        w = _linear_weights(sy, y1 - y0, dy)
        out = 0
        if w is not None:
            out = out + _scale(w[0], bottom(x, dx)) + _scale(w[1], top(x, dx))
        if u is not None:
            out = out + _scale(u[0], left(y, dy)) + _scale(u[1], right(y, dy))
        if u is not None and w is not None:
            (c00, c01), (c10, c11) = corners(x.shape[0])
            out = (out - _scale(u[0] * w[0], c00) - _scale(u[0] * w[1], c01)
                   - _scale(u[1] * w[0], c10) - _scale(u[1] * w[1], c11))
        return out

    def free_part(self, g, x, y, order=(0, 0)):
        """Partial derivative ``order = (dx, dy)`` of ``g - B(g)_ij v_i v_j``."""
        x = np.atleast_1d(np.asarray(x, float))
        y = np.atleast_1d(np.asarray(y, float))
        (x0, x1), (y0, y1) = self.domain

        def full(v):
            return np.full(x.shape, v)

        def corners(n):
            return ((g(full(x0), full(y0), (0, 0)), g(full(x0), full(y1), (0, 0))),
                    (g(full(x1), full(y0), (0, 0)), g(full(x1), full(y1), (0, 0))))

        coons = self._coons(
            lambda s, k: g(s, full(y0), (k, 0)),
            lambda s, k: g(s, full(y1), (k, 0)),
            lambda s, k: g(full(x0), s, (0, k)),
            lambda s, k: g(full(x1), s, (0, k)),
            corners, x, y, tuple(order))
        return g(x, y, tuple(order)) - coons

    def offset(self, x, y, order=(0, 0)):
        x = np.atleast_1d(np.asarray(x, float))
        y = np.atleast_1d(np.asarray(y, float))
        (x0, x1), (y0, y1) = self.domain
        c1, c2, c3, c4 = (_CurveData(c) for c in (self.c1, self.c2, self.c3, self.c4))

        def corners(n):
            ones = np.ones(n)
            return ((ones * c1(np.array([x0]), 0)[0], ones * c3(np.array([x0]), 0)[0]),
                    (ones * c1(np.array([x1]), 0)[0], ones * c3(np.array([x1]), 0)[0]))

        out = self._coons(c1, c3, c2, c4, corners, x, y, tuple(order))
        return np.zeros(x.shape) + out

    def evaluate(self, g, x, y, order=(0, 0)):
        return self.free_part(g, x, y, order) + self.offset(x, y, order)


CORNER_WARN_TOL = 1e-12
CORNER_FAIL_TOL = 1e-6


def build_dirichlet_expression(c1, c2, c3, c4, domain=((0.0, 1.0), (0.0, 1.0))):
    """Constrained expression for Dirichlet data on a rectangle.

    Each ``c`` is a callable of the coordinate along its edge, optionally a
    :class:`~desolve.problems.BoundaryCurve` carrying its second derivative
    (otherwise a finite difference supplies it).
    """
    (x0, x1), (y0, y1) = domain
    if not (x1 > x0 and y1 > y0):
        raise InvalidArgumentError(f"degenerate domain {domain}")

    def at(c, s):
        return float(np.asarray(c(np.array([s], float))).ravel()[0])

    gaps = [abs(at(c1, x0) - at(c2, y0)), abs(at(c1, x1) - at(c4, y0)),
            abs(at(c3, x0) - at(c2, y1)), abs(at(c3, x1) - at(c4, y1))]
    worst = max(gaps)
    if worst > CORNER_FAIL_TOL:
        raise InvalidConstraintsError(f"boundary data disagree at a corner by {worst:.3e}")
    if worst > CORNER_WARN_TOL:
        warnings.warn(f"boundary data disagree at a corner by {worst:.3e}", stacklevel=2)
    return ConstrainedExpression2D(c1, c2, c3, c4, (tuple(map(float, domain[0])),
                                                    tuple(map(float, domain[1]))))
