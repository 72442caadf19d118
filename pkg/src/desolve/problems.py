"""The four benchmark problems and their closed-form solutions.

Linear ODEs are stored in operator form ``sum_k a_k(t) y^(k)(t) = r(t)``;
the nonlinear ODE as ``y' = f(t, y)``; the PDE as ``z_xx + z_yy = f(x, y)``
on a rectangle with Dirichlet data on its four edges.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .special import bessel_j, bessel_series, gamma_fn

LINEAR_1ST = "linear_ode_1st"
NONLINEAR_1ST = "nonlinear_ode_1st"
LINEAR_2ND = "linear_ode_2nd"
LINEAR_PDE = "linear_pde"
KINDS = (LINEAR_1ST, NONLINEAR_1ST, LINEAR_2ND, LINEAR_PDE)


@dataclass(frozen=True)
class BoundaryCurve:
    """Dirichlet data along one edge and its second derivative along the edge."""

    value: Callable
    d2: Optional[Callable] = None

    def __call__(self, s):
        return self.value(s)


@dataclass(frozen=True)
class BenchmarkProblem:
    id: str
    kind: str
    domain: tuple
    analytic: Callable
    rhs: Callable
    lhs: tuple = ()
    f: Optional[Callable] = None
    f_y: Optional[Callable] = None
    f_yy: Optional[Callable] = None
    y0: float = 0.0
    ydot0: Optional[float] = None
    analytic_dt: Optional[Callable] = None
    boundaries: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown problem kind {self.kind!r}")

    @property
    def is_pde(self):
        return self.kind == LINEAR_PDE

    @property
    def is_linear(self):
        return self.kind != NONLINEAR_1ST

    @property
    def order(self):
        return 2 if self.kind in (LINEAR_2ND, LINEAR_PDE) else 1

    @property
    def t0(self):
        return self.domain[0]

    @property
    def tf(self):
        return self.domain[1]

    def p(self, t):
        """``p`` in ``y' - p(t) y = r(t)`` for first-order linear problems."""
        a0, a1 = self.lhs
        return -np.asarray(a0(t), float) / np.asarray(a1(t), float)

    def r(self, t):
        return np.asarray(self.rhs(t), float) / np.asarray(self.lhs[-1](t), float)

    def contains(self, point, tol=1e-12):
        pt = np.atleast_1d(np.asarray(point, dtype=float))
        if self.is_pde:
            (x0, x1), (y0, y1) = self.domain
            pt = pt.reshape(-1, 2)
            return bool(np.all((pt[:, 0] >= x0 - tol) & (pt[:, 0] <= x1 + tol)
                               & (pt[:, 1] >= y0 - tol) & (pt[:, 1] <= y1 + tol)))
        return bool(np.all((pt >= self.t0 - tol) & (pt <= self.tf + tol)))

    def de_residual(self, t, y, dy, d2y=None):
        """Residual of the DE given solution values and derivatives at ``t``."""
        if self.kind == NONLINEAR_1ST:
            return dy - self.f(t, y)
        derivs = (y, dy, d2y)
        out = -np.asarray(self.rhs(t), float)
        for k, a in enumerate(self.lhs):
            out = out + np.asarray(a(t), float) * derivs[k]
        return out

    def check_analytic(self, n_points=50, seed=0, tol=1e-9, constraint_tol=1e-12):
        """Verify the closed form against the DE and its constraints.

        Derivatives come from 5-point central differences (h = 1e-3), which
        keeps the check independent of any hand-derived derivative.
        """
        rng = np.random.default_rng(seed)
        h = 1e-3
        if self.is_pde:
            (x0, x1), (y0, y1) = self.domain
            x = rng.uniform(x0 + 0.01, x1 - 0.01, n_points)
            y = rng.uniform(y0 + 0.01, y1 - 0.01, n_points)
            z = self.analytic
            lap = (_d2(lambda s: z(s, y), x, h) + _d2(lambda s: z(x, s), y, h))
            res = np.max(np.abs(lap - self.rhs(x, y)))
            if res > tol:
                raise AssertionError(f"{self.id}: PDE residual {res:.3e}")
            s = rng.uniform(0, 1, n_points)
            xs, ys = x0 + s * (x1 - x0), y0 + s * (y1 - y0)
            c1, c2, c3, c4 = self.boundaries
            bc = max(np.max(np.abs(z(xs, np.full_like(xs, y0)) - c1(xs))),
                     np.max(np.abs(z(np.full_like(ys, x0), ys) - c2(ys))),
                     np.max(np.abs(z(xs, np.full_like(xs, y1)) - c3(xs))),
                     np.max(np.abs(z(np.full_like(ys, x1), ys) - c4(ys))))
            if bc > constraint_tol:
                raise AssertionError(f"{self.id}: boundary mismatch {bc:.3e}")
            return True
        t = rng.uniform(self.t0 + 0.01, self.tf - 0.01, n_points)
        y = self.analytic(t)
        dy = _d1(self.analytic, t, h)
        d2y = _d2(self.analytic, t, h) if self.order == 2 else None
        res = np.max(np.abs(self.de_residual(t, y, dy, d2y)))
        if res > tol:
            raise AssertionError(f"{self.id}: DE residual {res:.3e}")
        if abs(self.analytic(np.array([self.t0]))[0] - self.y0) > constraint_tol:
            raise AssertionError(f"{self.id}: initial value mismatch")
        if self.ydot0 is not None:
            dt = self.analytic_dt or (lambda s: _d1(self.analytic, s, h))
            if abs(dt(np.array([self.t0]))[0] - self.ydot0) > constraint_tol:
                raise AssertionError(f"{self.id}: initial slope mismatch")
        return True


def _d1(fn, t, h):
    return (-fn(t + 2 * h) + 8 * fn(t + h) - 8 * fn(t - h) + fn(t - 2 * h)) / (12 * h)


def _d2(fn, t, h):
    return (-fn(t + 2 * h) + 16 * fn(t + h) - 30 * fn(t) + 16 * fn(t - h)
            - fn(t - 2 * h)) / (12 * h * h)


# -- problem 1 ---------------------------------------------------------------

def _p1_q(t):
    return (1 + 3 * t ** 2) / (1 + t + t ** 3)


def _p1_exact(t):
    t = np.asarray(t, float)
    return np.exp(-t ** 2 / 2) / (1 + t + t ** 3) + t ** 2


def _p1_exact_dt(t):
    t = np.asarray(t, float)
    d = 1 + t + t ** 3
    return np.exp(-t ** 2 / 2) * (-t * d - (1 + 3 * t ** 2)) / d ** 2 + 2 * t


# -- problem 2 ---------------------------------------------------------------

_G14 = gamma_fn(0.25)
_G34 = gamma_fn(0.75)
P2_SMALL_T = 1e-6


def _p2_exact(t):
    t = np.asarray(t, float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty_like(t)
    small = np.abs(t) < P2_SMALL_T
    ts = t[small]
    if ts.size:
        # the closed form divided through by its t^(-1/2) singular parts
        num = _G14 * bessel_series(-0.75, ts * ts / 2) \
            + 2 * _G34 * (ts ** 3 / 8) * bessel_series(0.75, ts * ts / 2)
        den = _G14 * (ts / 4) * bessel_series(0.25, ts * ts / 2) \
            - _G34 * bessel_series(-0.25, ts * ts / 2)
        out[small] = -num / den
    tb = t[~small]
    if tb.size:
        z = tb * tb / 2
        num = _G14 * bessel_j(-0.75, z) + 2 * _G34 * bessel_j(0.75, z)
        den = _G14 * bessel_j(0.25, z) - 2 * _G34 * bessel_j(-0.25, z)
        out[~small] = -tb * num / den
    return out[0] if scalar else out


# -- problem 3 ---------------------------------------------------------------

def _p3_exact(t):
    t = np.asarray(t, float)
    return np.sin(t) * np.exp(-t / 5)


def _p3_exact_dt(t):
    t = np.asarray(t, float)
    return np.exp(-t / 5) * (np.cos(t) - np.sin(t) / 5)


# -- problem 4 ---------------------------------------------------------------

def _p4_exact(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    return (x + y ** 3) * np.exp(-x)


def _const(value):
    return lambda t: np.full(np.shape(t), value, dtype=float)


@lru_cache(maxsize=None)
def problem_catalog():
    """Return the four benchmark problems, each checked against its DE."""
    e1 = np.exp(-1.0)
    problems = (
        BenchmarkProblem(
            id="P1", kind=LINEAR_1ST, domain=(0.0, 1.0), analytic=_p1_exact,
            lhs=(lambda t: t + _p1_q(t), _const(1.0)),
            rhs=lambda t: t ** 3 + 2 * t + t ** 2 * _p1_q(t),
            y0=1.0, analytic_dt=_p1_exact_dt),
        BenchmarkProblem(
            id="P2", kind=NONLINEAR_1ST, domain=(0.0, 0.5), analytic=_p2_exact,
            rhs=_const(0.0),
            f=lambda t, y: y * y + t * t,
            f_y=lambda t, y: 2.0 * y,
            f_yy=lambda t, y: np.full(np.shape(y), 2.0),
            y0=1.0),
        BenchmarkProblem(
            id="P3", kind=LINEAR_2ND, domain=(0.0, 2.0), analytic=_p3_exact,
            lhs=(_const(1.0), _const(0.2), _const(1.0)),
            rhs=lambda t: -0.2 * np.exp(-t / 5) * np.cos(t),
            y0=0.0, ydot0=1.0, analytic_dt=_p3_exact_dt),
        BenchmarkProblem(
            id="P4", kind=LINEAR_PDE, domain=((0.0, 1.0), (0.0, 1.0)),
            analytic=_p4_exact,
            rhs=lambda x, y: np.exp(-x) * (x - 2 + y ** 3 + 6 * y),
            boundaries=(
                BoundaryCurve(lambda x: x * np.exp(-x), lambda x: (x - 2) * np.exp(-x)),
                BoundaryCurve(lambda y: y ** 3, lambda y: 6 * y),
                BoundaryCurve(lambda x: (x + 1) * np.exp(-x), lambda x: (x - 1) * np.exp(-x)),
                BoundaryCurve(lambda y: (1 + y ** 3) * e1, lambda y: 6 * y * e1),
            )),
    )
    for prob in problems:
        prob.check_analytic()
    return problems


def get_problem(problem_id):
    if not isinstance(problem_id, str):
        raise InvalidArgumentError(f"problem id must be a string, got {problem_id!r}")
    for prob in problem_catalog():
        if prob.id == problem_id.upper():
            return prob
    raise InvalidArgumentError(f"unknown problem {problem_id!r}")


def analytic_solution(problem, point):
    """Exact solution at ``point`` (a scalar ``t`` or an ``(x, y)`` pair)."""
    if not problem.contains(point):
        raise DomainError(f"point {point} outside the domain of {problem.id}")
    if problem.is_pde:
        pt = np.asarray(point, float).reshape(-1, 2)
        out = problem.analytic(pt[:, 0], pt[:, 1])
    else:
        out = problem.analytic(np.atleast_1d(np.asarray(point, float)))
    return float(out[0]) if np.size(out) == 1 else out
