"""Theory of Functional Connections: constrained expressions and solvers."""

from .expressions import (ConstrainedExpression1D, ConstrainedExpression2D,
                          build_dirichlet_expression, build_ivp_expression)
from .solver import (ChebyshevBasis1D, ChebyshevBasis2D, TfcSolution, evaluate_tfc,
                     improved_euler, solve_linear_ode_tfc, solve_linear_pde_tfc,
                     solve_nonlinear_ode_tfc)

__all__ = [
    "ChebyshevBasis1D", "ChebyshevBasis2D", "ConstrainedExpression1D",
    "ConstrainedExpression2D", "TfcSolution", "build_dirichlet_expression",
    "build_ivp_expression", "evaluate_tfc", "improved_euler", "solve_linear_ode_tfc",
    "solve_linear_pde_tfc", "solve_nonlinear_ode_tfc",
]
