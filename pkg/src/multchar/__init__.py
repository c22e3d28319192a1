"""Connes–Karoubi multiplicative character on Loday symbols."""
from .algebra import LaurentAlgebra, OperatorAlgebra, PointwiseAlgebra, as_matrix, matrix
from .chains import HochschildChain, LieChain, boundary_b, cyclic_t, norm_N, shuffle_product, star_product
from .character import (
    LodaySymbol,
    PreconditionError,
    branch_difference,
    commutator_form,
    lattice_reduce,
    multiplicative_character,
    path_equivalence_check,
)
from .fredholm import make_commuting_module, make_pointwise_module, make_toeplitz_module, tau_cocycle
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "HochschildChain",
    "LaurentAlgebra",
    "LieChain",
    "LodaySymbol",
    "OperatorAlgebra",
    "PointwiseAlgebra",
    "PreconditionError",
    "as_matrix",
    "boundary_b",
    "branch_difference",
    "commutator_form",
    "cyclic_t",
    "lattice_reduce",
    "make_commuting_module",
    "make_pointwise_module",
    "make_toeplitz_module",
    "matrix",
    "multiplicative_character",
    "norm_N",
    "path_equivalence_check",
    "run_suite",
    "shuffle_product",
    "star_product",
    "tau_cocycle",
]
