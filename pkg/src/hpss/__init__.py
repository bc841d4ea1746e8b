"""Exact holomorphic Poisson bi-complex computations on 2-step nilpotent algebras
with abelian complex structure."""

from .exact import GaussianRational, SparseMatrix, Subspace, kernel_basis, rank, solve, subquotient_dim
from .model import AlgebraSpec, Element, RealFrameSpec, builtin_example, complexify, validate
from .calculus import Bivector, ad_bivector, ad_vector, dbar, total_differential

__all__ = [
    "GaussianRational",
    "SparseMatrix",
    "Subspace",
    "kernel_basis",
    "rank",
    "solve",
    "subquotient_dim",
    "AlgebraSpec",
    "Element",
    "RealFrameSpec",
    "builtin_example",
    "complexify",
    "validate",
    "Bivector",
    "ad_bivector",
    "ad_vector",
    "dbar",
    "total_differential",
]
