"""Splitting preconditioners for complex symmetric systems ``(W1 - W2 + iT) x = b``.

Methods I, II, III(alpha) and SNSS, used as stationary iterations or as
preconditioners for GMRES and FGMRES. Inner complex solves use
PRESB-preconditioned Chebyshev iteration on top of sparse Cholesky.
"""
from ._backend import COMPILED
from .chebyshev import ChebyshevConfig, cheb_solve, chebyshev_bound
from .core_la import ComplexVector, DimensionMismatch, SparseReal
from .direct_spd import CholeskyFactor, NonPositivePivot, factor, solve
from .krylov import ConfigurationError, KrylovConfig, gmres_solve
from .model_problems import (
    ProblemInstance,
    example1,
    example2,
    example3,
    load_problem,
    make_problem,
    save_problem,
)
from .presb import PresbOperator, presb_apply, presb_build, presb_spectrum_probe
from .reports import SolveReport
from .spectral import SpectralEstimates, contraction_estimate, hatted_norm, spectral_estimates
from .splittings import (
    SplittingOperators,
    SplittingScheme,
    build_operators,
    precond_apply,
    stationary_solve,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "ChebyshevConfig",
    "CholeskyFactor",
    "ComplexVector",
    "ConfigurationError",
    "DimensionMismatch",
    "KrylovConfig",
    "NonPositivePivot",
    "PresbOperator",
    "ProblemInstance",
    "SolveReport",
    "SparseReal",
    "SpectralEstimates",
    "SplittingOperators",
    "SplittingScheme",
    "build_operators",
    "cheb_solve",
    "chebyshev_bound",
    "contraction_estimate",
    "example1",
    "example2",
    "example3",
    "factor",
    "gmres_solve",
    "hatted_norm",
    "load_problem",
    "make_problem",
    "precond_apply",
    "presb_apply",
    "presb_build",
    "presb_spectrum_probe",
    "save_problem",
    "solve",
    "spectral_estimates",
    "stationary_solve",
]
