"""Numerical laboratory for the bad science matrix problem.

beta(A) averages the largest absolute row response over all sign vectors;
this package constructs candidate row-normalized matrices, evaluates beta
exactly or by Monte Carlo, decomposes the sign cube into cells to run the
level-1 bound chain, and compares against the Gaussian model.
"""

from .asymptotics import (
    AsymptoticCurvePoint,
    abstract_lower,
    beta_expansion,
    curve_sweep,
    curve_to_csv,
    f_level1,
    jensen_upper,
    subcube_rate,
)
from .beta import BetaEstimate, beta_exact, beta_monte_carlo, max_abs_image
from .cells import (
    AnalysisReport,
    CellPartition,
    analyze,
    compute_cells,
    level1_weights,
    subcube_w1_reference,
)
from .constructions import (
    HadamardMatrix,
    TreeMatrix,
    build_hadamard,
    construct,
    constructible_orders,
    format_recipe,
    hadamard_normalized,
    identity,
    known_optimal,
    kronecker,
    orthonormal_almost_hadamard,
    paley_i,
    paley_ii,
    random_sign,
    smallest_constructible_order,
    sylvester,
    tree_matrix,
)
from .errors import (
    BadResidue,
    BadScienceError,
    DimensionMismatch,
    NotPSD,
    NotPrime,
    ParseError,
    RankDeficient,
    TooLarge,
    Unsupported,
    ZeroRow,
)
from .gaussian import (
    CovarianceDiagnostics,
    covariance,
    covariance_diagnostics,
    gaussian_max_expansion,
    gaussian_max_mc,
)
from .matrix import (
    ConstructionSpec,
    RowNormalizedMatrix,
    SignVector,
    SquareMatrix,
    absolute_entry_fingerprint,
    equivalent_up_to_symmetry,
    load_matrix,
    normalize_rows,
    save_matrix,
)
from .numerics import (
    STREAM_CONSTRUCTION,
    STREAM_TRIPLE_SAMPLER,
    QrResult,
    RngStream,
    cholesky_psd,
    compensated_sum,
    qr_positive_diag,
    rademacher,
    standard_normal,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "AsymptoticCurvePoint",
    "BadResidue",
    "BadScienceError",
    "BetaEstimate",
    "CellPartition",
    "ConstructionSpec",
    "CovarianceDiagnostics",
    "DimensionMismatch",
    "HadamardMatrix",
    "NotPSD",
    "NotPrime",
    "ParseError",
    "QrResult",
    "RankDeficient",
    "RngStream",
    "RowNormalizedMatrix",
    "STREAM_CONSTRUCTION",
    "STREAM_TRIPLE_SAMPLER",
    "SignVector",
    "SquareMatrix",
    "TooLarge",
    "TreeMatrix",
    "Unsupported",
    "ZeroRow",
    "absolute_entry_fingerprint",
    "abstract_lower",
    "analyze",
    "beta_exact",
    "beta_expansion",
    "beta_monte_carlo",
    "build_hadamard",
    "cholesky_psd",
    "compensated_sum",
    "compute_cells",
    "construct",
    "constructible_orders",
    "covariance",
    "covariance_diagnostics",
    "curve_sweep",
    "curve_to_csv",
    "equivalent_up_to_symmetry",
    "f_level1",
    "format_recipe",
    "gaussian_max_expansion",
    "gaussian_max_mc",
    "hadamard_normalized",
    "identity",
    "jensen_upper",
    "known_optimal",
    "kronecker",
    "level1_weights",
    "load_matrix",
    "max_abs_image",
    "normalize_rows",
    "orthonormal_almost_hadamard",
    "paley_i",
    "paley_ii",
    "qr_positive_diag",
    "rademacher",
    "random_sign",
    "save_matrix",
    "smallest_constructible_order",
    "standard_normal",
    "subcube_rate",
    "subcube_w1_reference",
    "sylvester",
    "tree_matrix",
]
