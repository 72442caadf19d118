"""Per-run error records and the sample sets they are measured on."""

from dataclasses import dataclass, field, fields, replace
import math

import numpy as np

from .core.metrics import error_metrics

CSV_COLUMNS = ("problem", "method", "n_train", "train_time_s", "max_err_train", "mse_train",
               "max_err_test", "mse_test", "hp_m", "hp_sigma", "hp_gamma", "converged")
TEST_POINTS_1D = 1000
TEST_SIDE_2D = 33


@dataclass(frozen=True)
class ErrorReport:
    problem: str
    method: str
    n_train: int
    train_time_s: float
    max_err_train: float
    mse_train: float
    max_err_test: float
    mse_test: float
    hp_m: int = None
    hp_sigma: float = None
    hp_gamma: float = None
    converged: bool = True
    condition_estimate: float = field(default=math.nan, compare=False)
    iterations: int = field(default=0, compare=False)

    def as_record(self):
        return {name: getattr(self, name) for name in CSV_COLUMNS}

    @classmethod
    def from_record(cls, rec):
        names = {f.name for f in fields(cls)}
        unknown = set(rec) - names
        if unknown:
            raise ValueError(f"unknown report keys: {sorted(unknown)}")
        return cls(**rec)

    def with_time(self, seconds):
        return replace(self, train_time_s=float(seconds))


def failed_report(problem, method, n_train, hp_m=None, hp_sigma=None, hp_gamma=None,
                  condition=math.nan):
    nan = math.nan
    return ErrorReport(problem, method, int(n_train), nan, nan, nan, nan, nan,
                       hp_m, hp_sigma, hp_gamma, False, condition)


def test_points(problem, n=None):
    """1000 uniform points on the interval, or a 33 x 33 uniform grid."""
    if problem.is_pde:
        side = n or TEST_SIDE_2D
        (x0, x1), (y0, y1) = problem.domain
        X, Y = np.meshgrid(np.linspace(x0, x1, side), np.linspace(y0, y1, side),
                           indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])
    return np.linspace(problem.t0, problem.tf, n or TEST_POINTS_1D)


def exact_values(problem, pts):
    if problem.is_pde:
        return problem.analytic(pts[:, 0], pts[:, 1])
    return problem.analytic(pts)


def build_report(problem, method, n_train, predict, train_pts, test_pts, elapsed,
                 hp_m=None, hp_sigma=None, hp_gamma=None, converged=True,
                 condition=math.nan, iterations=0):
    tr = error_metrics(exact_values(problem, train_pts), predict(train_pts))
    te = error_metrics(exact_values(problem, test_pts), predict(test_pts))
    return ErrorReport(problem.id, method, int(n_train), float(elapsed),
                       tr.max_abs_error, tr.mse, te.max_abs_error, te.mse,
                       None if hp_m is None else int(hp_m),
                       None if hp_sigma is None else float(hp_sigma),
                       None if hp_gamma is None else float(hp_gamma),
                       bool(converged), float(condition), int(iterations))
