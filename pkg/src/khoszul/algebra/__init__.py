"""Exact linear algebra: sparse integer matrices, Smith form, presented groups."""

from .complexes import (
    FreeChainComplex,
    GradedHomology,
    InvariantError,
    chain_map_check,
    complex_homology,
)
from .fields import (
    GF,
    QQ,
    ZHALF,
    ZZ,
    CoefficientReport,
    Coefficients,
    Field,
    FieldHomology,
    Span,
    change_coefficients,
    field_homology,
    matrix_rank,
    nullspace,
)
from .groups import (
    AlgebraError,
    GroupMorphism,
    HomologyResult,
    PresentedGroup,
    direct_sum,
    homology_at,
    image_basis,
    in_span,
    kernel_basis,
    presented_homology_at,
    solve_lattice,
)
from .matrix import (
    IntMatrix,
    SmithDecomposition,
    block_diag,
    check_snf,
    elementary_divisors,
    hstack,
    integer_rank,
    snf,
    vstack,
    xgcd,
)
