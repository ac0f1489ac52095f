"""Groebner and standard bases, normal forms and the ideal/module calculus."""

from .engine import BasisTooLarge
from .module import FreeElement, GBasis, Submodule, groebner_basis, normal_form, standard_basis
from .ops import (
    INFINITE,
    ColengthBoundExceeded,
    SymPowerTooLarge,
    colength,
    count_standard_monomials,
    determinant,
    eliminate,
    ideal_quotient,
    is_unit_ideal,
    leading_monomials,
    minors,
    power_in_sym,
    preimage_submodule,
    quotient_length,
    reduced_ideal_basis,
    saturate,
    standard_monomials,
    sym_basis,
)

__all__ = [
    "BasisTooLarge", "ColengthBoundExceeded", "FreeElement", "GBasis", "INFINITE", "Submodule", "SymPowerTooLarge", "colength",
    "count_standard_monomials", "determinant", "eliminate", "groebner_basis", "ideal_quotient",
    "is_unit_ideal", "leading_monomials", "minors", "normal_form", "power_in_sym", "preimage_submodule",
    "quotient_length", "reduced_ideal_basis", "saturate", "standard_basis", "standard_monomials", "sym_basis",
]
