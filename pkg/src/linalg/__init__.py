"""Hermitian matrix core: eigendecomposition, spectral calculus, order, polar parts."""

from .hermitian import (
    abs_op,
    apply_scalar_function,
    as_hermitian,
    conjugator_for_adjoint,
    eig_hermitian,
    hermitian_part,
    inv_positive,
    loewner_leq,
    min_eig,
    mpower,
    operator_norm,
    polar,
    spectral_dominance,
    sqrt_positive,
    using_eig_solver,
)
from .matrix_io import matrix_from_json, matrix_to_json

__all__ = [
    "abs_op",
    "apply_scalar_function",
    "as_hermitian",
    "conjugator_for_adjoint",
    "eig_hermitian",
    "hermitian_part",
    "inv_positive",
    "loewner_leq",
    "matrix_from_json",
    "matrix_to_json",
    "min_eig",
    "mpower",
    "operator_norm",
    "polar",
    "spectral_dominance",
    "sqrt_positive",
    "using_eig_solver",
]
