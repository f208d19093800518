from .field import QQ, PrimeField, RationalField, field_from_spec
from .linalg import (Echelon, NoSolution, SparseMatrix, kernel_basis, kernel_of_columns,
                     rank, solve_or_reject)
from .ring import GradedRing, NonPositiveGrading, check_positive, monomial_basis

__all__ = [
    "QQ", "PrimeField", "RationalField", "field_from_spec",
    "Echelon", "NoSolution", "SparseMatrix", "kernel_basis", "kernel_of_columns", "rank",
    "solve_or_reject",
    "GradedRing", "NonPositiveGrading", "check_positive", "monomial_basis",
]
