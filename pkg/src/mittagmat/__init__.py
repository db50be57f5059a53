"""Matrix Mittag-Leffler functions."""

from mittagmat.errors import (
    DefectiveStructureUndetermined,
    DomainLimitError,
    ForcingEvaluationError,
    IllConditionedTransform,
    InvalidParams,
    InvalidSpec,
    MittagMatError,
    NonConvergence,
    NumericalFailure,
    NumericalOverflow,
    RequestedAccuracyUnreachable,
    SingularMatrix,
    SingularReference,
)
from mittagmat.fde import (
    BagleyTorvikSpec,
    DerivativeKind,
    FdeProblem,
    TimeGrid,
    Trajectory,
    bagley_torvik_reduce,
    bagley_torvik_solve,
    companion_matrix,
    convolve_forcing,
    reference_H1,
    reference_H2,
    solve,
    solve_caputo,
    solve_rl,
)
from mittagmat.linalg import (
    EigenvalueCluster,
    JordanDecomposition,
    cluster_eigenvalues,
    eigenvalues,
    hessenberg_reduce,
    jordan_decompose,
    rank_with_tol,
    schur_decompose,
    solve_linear,
)
from mittagmat.matrix import (
    ScaledEvaluator,
    SpectrumValues,
    alpha_exponential,
    fill_jordan_block,
    interpolation_oracle,
    ml_matrix,
    spectrum_values,
)
from mittagmat.special import (
    DEFAULT_CONFIG,
    EvalConfig,
    MLParams,
    erfc,
    mittag_leffler,
    ml_derivative,
    ml_scalar,
    rgamma,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "BagleyTorvikSpec",
    "DefectiveStructureUndetermined",
    "DerivativeKind",
    "DomainLimitError",
    "EigenvalueCluster",
    "EvalConfig",
    "FdeProblem",
    "ForcingEvaluationError",
    "IllConditionedTransform",
    "InvalidParams",
    "InvalidSpec",
    "JordanDecomposition",
    "MLParams",
    "MittagMatError",
    "NonConvergence",
    "NumericalFailure",
    "NumericalOverflow",
    "RequestedAccuracyUnreachable",
    "ScaledEvaluator",
    "SingularMatrix",
    "SingularReference",
    "SpectrumValues",
    "TimeGrid",
    "Trajectory",
    "alpha_exponential",
    "bagley_torvik_reduce",
    "bagley_torvik_solve",
    "cluster_eigenvalues",
    "companion_matrix",
    "convolve_forcing",
    "eigenvalues",
    "erfc",
    "fill_jordan_block",
    "hessenberg_reduce",
    "interpolation_oracle",
    "jordan_decompose",
    "mittag_leffler",
    "ml_derivative",
    "ml_matrix",
    "ml_scalar",
    "rank_with_tol",
    "reference_H1",
    "reference_H2",
    "rgamma",
    "schur_decompose",
    "solve",
    "solve_caputo",
    "solve_linear",
    "solve_rl",
    "spectrum_values",
]
