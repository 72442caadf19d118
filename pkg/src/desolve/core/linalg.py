"""Dense linear solvers: minimum-norm least squares and full-pivot LU."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from ..errors import InvalidArgumentError, NumericError


def _check(A, b):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise InvalidArgumentError(
            f"dimension mismatch: A{A.shape} vs b{b.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidArgumentError("empty system")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise NumericError("non-finite entries in linear system")
    return A, b


def solve_least_squares(A, b, scale_columns=False):
    """Minimum-norm minimizer of ``||A xi - b||_2`` via SVD.

    Singular values below ``max(p, q) * eps * ||A||_2`` are treated as zero,
    which is what makes rank-deficient collocation matrices usable.

    With ``scale_columns`` the columns are first normalized to unit 2-norm and
    columns whose norm is below ``max(p, q) * eps`` times the largest one are
    zeroed; the returned vector is then minimum-norm in the scaled variables.
    Collocation matrices whose columns are null only up to rounding need this.
    """
    A, b = _check(A, b)
    rcond = max(A.shape) * np.finfo(float).eps
    if not scale_columns:
        xi, *_ = np.linalg.lstsq(A, b, rcond=rcond)
        return xi
    norms = np.linalg.norm(A, axis=0)
    live = norms > rcond * norms.max() if norms.max() > 0 else np.zeros_like(norms, bool)
    xi = np.zeros(A.shape[1])
    if np.any(live):
        z, *_ = np.linalg.lstsq(A[:, live] / norms[live], b, rcond=rcond)
        xi[live] = z / norms[live]
    return xi


@dataclass(frozen=True)
class DenseSolve:
    x: np.ndarray
    condition: float  # 1-norm condition estimate


def solve_dense(A, b):
    """Solve a square system by LU with complete pivoting (LAPACK getc2).

    Returns the solution together with a 1-norm condition estimate. A zero
    pivot or a non-finite solution raises :class:`NumericError`.
    """
    A, b = _check(A, b)
    n = A.shape[0]
    if A.shape[1] != n:
        raise InvalidArgumentError(f"square matrix required, got {A.shape}")
    anorm = np.abs(A).sum(axis=0).max()
    lu, ipiv, jpiv, info = lapack.dgetc2(A)
    if anorm == 0.0:
        raise NumericError("zero matrix", condition=np.inf)
    rcond, _ = lapack.dgecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0.0 else 1.0 / rcond
    x, scale = lapack.dgesc2(lu, b.copy(), ipiv, jpiv)
    x = x / scale
    if not np.all(np.isfinite(x)) or np.any(np.diag(lu) == 0.0):
        raise NumericError(f"singular matrix (condition ~ {cond:.3g})",
                           condition=cond)
    return DenseSolve(x, cond)
