"""minsos: low-rank sum-of-squares certificates on surfaces of minimal degree.

The package computes Gram spectrahedra of nonnegative quadratic forms on
rational normal scrolls, the Veronese surface, and cones over rational
normal curves; enumerates all rank-3 Gram matrices by polynomial homotopy
continuation; classifies them as psd / indefinite / complex; and factors
psd symmetric matrices of binary forms as B B^T with few columns.
"""

from .biform import (
    COMPLEX,
    RATIONAL,
    Biform,
    BinaryForm,
    TermPoly,
    bihomogenize,
    biform_to_termpoly,
    binary_gcd,
)
from .binary_sos import (
    RankTwoReport,
    RootMultiset,
    class_representation,
    enumerate_rank_two,
    enumerate_two_squares,
    is_nonnegative,
    rep_forms,
    rnc_basis,
    roots,
    two_squares_residual,
)
from .cones import (
    enumerate_cone,
    lift,
    lift_gram,
    reduce_form,
    schur_reduce_gram,
    split,
)
from .enumerator import (
    CountReport,
    MinorSystem,
    SolutionSet,
    classify,
    enumerate_rank,
    expected_counts,
    minor_system,
    solve,
)
from .errors import (
    ApexCoefficientNotPositive,
    DegreeMismatch,
    DimensionMismatch,
    IterationBudgetExceeded,
    MinsosError,
    NonSymmetric,
    NotAQuadraticForm,
    NotAScroll,
    NotInFiber,
    NotNonnegative,
    NotPSD,
    OddDiagonalDegree,
    OffDiagonalDegreeMismatch,
    PathFailureBudgetExceeded,
    RankTooLarge,
    StuckAboveTarget,
    UnsupportedDegree,
)
from .factorization import (
    FactorResult,
    PrismSpec,
    SymMatrixPoly,
    check_psd_on_grid,
    degree_pattern,
    embed,
    factor,
    prism_gram_space,
    psd_feasible,
    rank_reduce,
)
from .gram import (
    GramSpace,
    Representation,
    build_gram_space,
    equivalent,
    extract_representation,
    gram_space_from_basis,
    inertia,
    symmetric_rank,
    verify_representation,
)
from .sampling import (
    curve_samples,
    distinct_seeds,
    random_dyad_matrix,
    random_nonneg_binary,
    random_positive_form,
)
from .surfaces import (
    GenericityReport,
    MonomialBasis,
    SurfaceSpec,
    cone_rnc,
    discriminant,
    genericity_check,
    hilbert_data,
    monomial_basis,
    projective_roots,
    quadratic_form_blocks,
    scroll,
    veronese,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "COMPLEX",
    "RATIONAL",
    "Biform",
    "BinaryForm",
    "TermPoly",
    "bihomogenize",
    "biform_to_termpoly",
    "binary_gcd",
    "RankTwoReport",
    "RootMultiset",
    "class_representation",
    "enumerate_rank_two",
    "enumerate_two_squares",
    "is_nonnegative",
    "rep_forms",
    "rnc_basis",
    "roots",
    "two_squares_residual",
    "enumerate_cone",
    "lift",
    "lift_gram",
    "reduce_form",
    "schur_reduce_gram",
    "split",
    "CountReport",
    "MinorSystem",
    "SolutionSet",
    "classify",
    "enumerate_rank",
    "expected_counts",
    "minor_system",
    "solve",
    "ApexCoefficientNotPositive",
    "DegreeMismatch",
    "DimensionMismatch",
    "IterationBudgetExceeded",
    "MinsosError",
    "NonSymmetric",
    "NotAQuadraticForm",
    "NotAScroll",
    "NotInFiber",
    "NotNonnegative",
    "NotPSD",
    "OddDiagonalDegree",
    "OffDiagonalDegreeMismatch",
    "PathFailureBudgetExceeded",
    "RankTooLarge",
    "StuckAboveTarget",
    "UnsupportedDegree",
    "FactorResult",
    "PrismSpec",
    "SymMatrixPoly",
    "check_psd_on_grid",
    "degree_pattern",
    "embed",
    "factor",
    "prism_gram_space",
    "psd_feasible",
    "rank_reduce",
    "GramSpace",
    "Representation",
    "build_gram_space",
    "equivalent",
    "extract_representation",
    "gram_space_from_basis",
    "inertia",
    "symmetric_rank",
    "verify_representation",
    "curve_samples",
    "distinct_seeds",
    "random_dyad_matrix",
    "random_nonneg_binary",
    "random_positive_form",
    "GenericityReport",
    "MonomialBasis",
    "SurfaceSpec",
    "cone_rnc",
    "discriminant",
    "genericity_check",
    "hilbert_data",
    "monomial_basis",
    "projective_roots",
    "quadratic_form_blocks",
    "scroll",
    "veronese",
]
