"""Chebyshev-Gauss-Lobatto grids, affine domain maps and Chebyshev bases."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError, UnsupportedOrderError

MAX_BASIS_DERIV = 4


@dataclass(frozen=True)
class CollocationGrid:
    """Collocation abscissae on ``[t0, tf]`` and their images on ``[-1, 1]``.

    ``scale_c`` is dx/dt, so a k-th t-derivative of a basis function is
    ``scale_c**k`` times its k-th x-derivative.
    """

    n_intervals: int
    t0: float
    tf: float
    t_points: np.ndarray
    x_points: np.ndarray
    scale_c: float

    def to_x(self, t):
        return -1.0 + self.scale_c * (np.asarray(t, dtype=float) - self.t0)

    def to_t(self, x):
        return self.t0 + (np.asarray(x, dtype=float) + 1.0) / self.scale_c


def make_collocation_grid(N, t0, tf):
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if not tf > t0:
        raise InvalidArgumentError(f"need tf > t0, got [{t0}, {tf}]")
    N = int(N)
    i = np.arange(N + 1)
    # sin form of -cos(i*pi/N): exactly antisymmetric about the midpoint
    x = np.sin(np.pi * (2 * i - N) / (2 * N))
    x[0], x[-1] = -1.0, 1.0
    c = 2.0 / (tf - t0)
    t = t0 + (x + 1.0) / c
    t[0], t[-1] = t0, tf
    x.setflags(write=False)
    t.setflags(write=False)
    return CollocationGrid(N, float(t0), float(tf), t, x, c)


def chebyshev_values(x, m, max_deriv=0):
    """Return ``[T, T', ..., T^(max_deriv)]`` evaluated at ``x``.

    Each entry has shape ``(len(x), m)``; column j holds the j-th x-derivative
    order of T_j. Built from the differentiated three-term recurrence
    ``T_{j+1}^(k) = 2x T_j^(k) + 2k T_j^(k-1) - T_{j-1}^(k)``.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m!r}")
    if max_deriv < 0 or max_deriv > MAX_BASIS_DERIV:
        raise UnsupportedOrderError(
            f"derivative order {max_deriv} outside 0..{MAX_BASIS_DERIV}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = x.shape[0]
    out = [np.zeros((n, m)) for _ in range(max_deriv + 1)]
    out[0][:, 0] = 1.0
    if m > 1:
        out[0][:, 1] = x
        if max_deriv >= 1:
            out[1][:, 1] = 1.0
    for j in range(1, m - 1):
        out[0][:, j + 1] = 2.0 * x * out[0][:, j] - out[0][:, j - 1]
        for k in range(1, max_deriv + 1):
            out[k][:, j + 1] = (2.0 * x * out[k][:, j] + 2.0 * k * out[k - 1][:, j]
                                - out[k][:, j - 1])
    return out


@dataclass(frozen=True)
class BasisMatrix:
    values: np.ndarray
    derivs: tuple  # derivs[k-1] is the k-th x-derivative matrix

    def deriv(self, k):
        return self.values if k == 0 else self.derivs[k - 1]


def chebyshev_basis(grid, m, max_deriv=0):
    mats = chebyshev_values(grid.x_points, m, max_deriv)
    return BasisMatrix(mats[0], tuple(mats[1:]))
