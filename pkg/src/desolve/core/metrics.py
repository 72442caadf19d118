from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError


@dataclass(frozen=True)
class ErrorMetrics:
    mse: float
    max_abs_error: float
    n_points: int


def error_metrics(y_true, y_hat):
    """Mean squared error and maximum absolute error between two samples."""
    y_true = np.ravel(np.asarray(y_true, dtype=float))
    y_hat = np.ravel(np.asarray(y_hat, dtype=float))
    if y_true.shape != y_hat.shape:
        raise InvalidArgumentError(
            f"length mismatch: {y_true.shape[0]} vs {y_hat.shape[0]}")
    if y_true.size == 0:
        raise InvalidArgumentError("need at least one point")
    err = y_true - y_hat
    return ErrorMetrics(float(np.mean(err * err)), float(np.max(np.abs(err))), err.size)
