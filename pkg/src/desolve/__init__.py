"""Differential-equation solvers: TFC spectral collocation, LS-SVM and CSVM.

The benchmark problems live in :mod:`desolve.problems`; the solvers in
:mod:`desolve.tfc` and :mod:`desolve.svm`; tuning and report files in
:mod:`desolve.bench`.
"""

from .bench import RunSpec, emit_report, read_report, run_benchmark, tune_hyperparameters
from .core.kernels import KernelConfig
from .errors import (DesolveError, DomainError, InvalidArgumentError, InvalidConstraintsError,
                     NumericError, SingularJacobianError, TuningFailure,
                     UnsupportedOrderError)
from .problems import analytic_solution, get_problem, problem_catalog
from .report import ErrorReport

__version__ = "0.1.0"

__all__ = [
    "DesolveError", "DomainError", "ErrorReport", "InvalidArgumentError",
    "InvalidConstraintsError", "KernelConfig", "NumericError", "RunSpec",
    "SingularJacobianError", "TuningFailure", "UnsupportedOrderError", "analytic_solution",
    "emit_report", "get_problem", "problem_catalog", "read_report", "run_benchmark",
    "tune_hyperparameters",
]
