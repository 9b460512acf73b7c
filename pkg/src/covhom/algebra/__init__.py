"""Exact scalar arithmetic, sparse matrices and normal forms."""

from covhom.algebra.fields import (
    QQ,
    CyclotomicField,
    CyclotomicNumber,
    Field,
    PrimeField,
    RationalField,
    field_selector,
    parse_field,
)
from covhom.algebra.linalg import GenericMatrix, RankKernelImage, rank_kernel_image
from covhom.algebra.series import (
    Diagonalization,
    ModuleDecomposition,
    PreconditionError,
    TruncatedRing,
    TruncatedSeries,
    cokernel,
    diagonalize_truncated,
    module_homology,
)
from covhom.algebra.sparse import ExactMatrix

__all__ = [
    "QQ",
    "CyclotomicField",
    "CyclotomicNumber",
    "Diagonalization",
    "ExactMatrix",
    "Field",
    "GenericMatrix",
    "ModuleDecomposition",
    "PreconditionError",
    "PrimeField",
    "RankKernelImage",
    "RationalField",
    "TruncatedRing",
    "TruncatedSeries",
    "cokernel",
    "diagonalize_truncated",
    "field_selector",
    "module_homology",
    "parse_field",
    "rank_kernel_image",
]
