"""Bernoulli-polynomial operational matrices and a Galerkin solver for IVPs on [0, 1]."""

from .basis import (
    BasisContext,
    BernoulliTable,
    basis_context,
    bernoulli_numbers,
    build_dual_matrix,
    build_m_matrix,
    build_q_matrix,
    eval_basis,
    expand_polynomial,
    project,
)
from .benchmarks import BENCHMARKS, SolveReport, run_benchmark
from .galerkin import IvpProblem, SolverError, SpectralSolution, assemble_residual, evaluate_solution, solve
from .operational import (
    OperationalSet,
    build_derivative_matrix,
    build_integration_matrix,
    build_product_matrix,
    build_projected_product_matrix,
    operational_set,
)

__all__ = [
    "BENCHMARKS",
    "BasisContext",
    "BernoulliTable",
    "IvpProblem",
    "OperationalSet",
    "SolveReport",
    "SolverError",
    "SpectralSolution",
    "assemble_residual",
    "basis_context",
    "bernoulli_numbers",
    "build_derivative_matrix",
    "build_dual_matrix",
    "build_integration_matrix",
    "build_m_matrix",
    "build_product_matrix",
    "build_projected_product_matrix",
    "build_q_matrix",
    "eval_basis",
    "evaluate_solution",
    "expand_polynomial",
    "operational_set",
    "project",
    "run_benchmark",
    "solve",
]
