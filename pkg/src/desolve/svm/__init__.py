"""Kernel collocation solvers: plain LS-SVM and the constrained CSVM variant."""

from .csvm import (CsvmDualSolution, CsvmLinearSystem, csvm_linear_system, evaluate_csvm,
                   solve_linear_ode_csvm, solve_nonlinear_ode_csvm, solve_pde_csvm)
from .dual import CHEBYSHEV, UNIFORM, training_grid
from .lssvm import (DualSolution, evaluate_dual, solve_linear_ode_lssvm,
                    solve_linear_pde_lssvm, solve_nonlinear_ode_lssvm)

__all__ = [
    "CHEBYSHEV", "CsvmDualSolution", "CsvmLinearSystem", "DualSolution", "UNIFORM",
    "csvm_linear_system", "evaluate_csvm", "evaluate_dual", "solve_linear_ode_csvm",
    "solve_linear_ode_lssvm", "solve_linear_pde_lssvm", "solve_nonlinear_ode_csvm",
    "solve_nonlinear_ode_lssvm", "solve_pde_csvm", "training_grid",
]
