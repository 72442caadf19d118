"""Shared numerical kernels used by every solver."""

from .grid import (BasisMatrix, CollocationGrid, chebyshev_basis, chebyshev_values,
                   make_collocation_grid)
from .kernels import (Functional, KernelConfig, gram, rbf_kernel_2d_block,
                      rbf_kernel_block, rbf_partial)
from .linalg import DenseSolve, solve_dense, solve_least_squares
from .metrics import ErrorMetrics, error_metrics
from .optimize import ConvergenceReport, nelder_mead_minimize, newton_solve

__all__ = [
    "BasisMatrix", "CollocationGrid", "ConvergenceReport", "DenseSolve", "ErrorMetrics",
    "Functional", "KernelConfig", "chebyshev_basis", "chebyshev_values", "error_metrics",
    "gram", "make_collocation_grid", "nelder_mead_minimize", "newton_solve",
    "rbf_kernel_2d_block", "rbf_kernel_block", "rbf_partial", "solve_dense",
    "solve_least_squares",
]
