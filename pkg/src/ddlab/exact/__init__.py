"""Exact rational kernel: linear algebra, sparse polynomials, Sturm counting."""

from .linalg import determinant, nullspace, rank, solve
from .poly import (
    MultiPoly,
    X,
    Y,
    Z,
    directional_form,
    monomials,
    monomials_upto,
    product,
    restrict_to_line,
    veronese,
)
from .univariate import (
    UniPoly,
    count_real_roots,
    gcd,
    isolate_real_roots,
    sample_between_roots,
    squarefree_part,
)

__all__ = [
    "MultiPoly", "UniPoly", "X", "Y", "Z",
    "count_real_roots", "determinant", "directional_form", "gcd",
    "isolate_real_roots", "monomials", "monomials_upto", "nullspace", "product",
    "rank", "restrict_to_line", "sample_between_roots", "solve", "squarefree_part",
    "veronese",
]
