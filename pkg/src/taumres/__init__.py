"""Tau-preconditioned MINRES for symmetrized multilevel Toeplitz systems.

Solves the nonsymmetric multilevel Toeplitz systems arising from
Riemann-Liouville fractional diffusion equations by flipping them into
symmetric Hankel form and running MINRES with a sine-transform
diagonalized multilevel tau preconditioner, and verifies the governing
eigenvalue-interval bounds densely at desk scale.
"""

from .discretization import (FIRST_ORDER, SECOND_ORDER, CoefficientTable,
                             ConvergenceBound, FractionalParams, GridSpec,
                             assemble_operator, build_L, convergence_bound,
                             epsilon_bound, grunwald_g, omega_bound, symbol_closed,
                             symbol_series, weights_first, weights_second)
from .krylov import BreakdownError, MinresConfig, MinresResult, bound_curve, pminres
from .pde import (ALPHA_PAIRS, FractionalProblem, StepReport, example1_problem,
                  example2_problem, run_example1, run_example2, run_steps,
                  sample_grid, step_first_order, step_second_order)
from .spectrum import (SpectrumReport, equivalence_spectrum, export_spectrum_csv,
                       ideal_preconditioned_spectrum, preconditioned_spectrum,
                       sym_eig, unpreconditioned_spectrum)
from .tau import (Tau1D, TauPreconditioner, build_preconditioner, tau_dense,
                  tau_eigs, tau_eigs_direct)
from .toeplitz import MultilevelOperator, Toeplitz1D, flip
from .transforms import TransformPlan, circular_convolve, dst1, dst1_multi

__version__ = "0.1.0"

__all__ = [
    "FIRST_ORDER", "SECOND_ORDER",
    "CoefficientTable", "ConvergenceBound", "FractionalParams", "GridSpec",
    "assemble_operator", "build_L", "convergence_bound", "epsilon_bound",
    "grunwald_g", "omega_bound", "symbol_closed", "symbol_series",
    "weights_first", "weights_second",
    "BreakdownError", "MinresConfig", "MinresResult", "bound_curve", "pminres",
    "ALPHA_PAIRS", "FractionalProblem", "StepReport", "example1_problem",
    "example2_problem", "run_example1", "run_example2", "run_steps",
    "sample_grid", "step_first_order", "step_second_order",
    "SpectrumReport", "equivalence_spectrum", "export_spectrum_csv",
    "ideal_preconditioned_spectrum", "preconditioned_spectrum", "sym_eig",
    "unpreconditioned_spectrum",
    "Tau1D", "TauPreconditioner", "build_preconditioner", "tau_dense",
    "tau_eigs", "tau_eigs_direct",
    "MultilevelOperator", "Toeplitz1D", "flip",
    "TransformPlan", "circular_convolve", "dst1", "dst1_multi",
]
