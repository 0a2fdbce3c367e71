"""Exact linear algebra over Q: matrices, polynomials, lattices, invariant subspaces."""

from .invariant import (
    CompositionFactor,
    InvariantSearch,
    IrreducibilityCertificate,
    composition_factors,
    enveloping_algebra,
    largest_invariant_inside,
    minimal_invariant_subspaces,
    quotient_action,
    restriction,
    spin,
    verify_certificate,
)
from .lattice import hermite_normal_form, integer_kernel, lattice_hnf, maximal_minor_gcd, primitive
from .matrix import Matrix, commutator, cross, dot, fraction_str, to_fraction, vec
from .poly import (
    ROOT_OF_UNITY_EXPONENT,
    IntPolynomial,
    all_eigenvalues_roots_of_unity,
    charpoly,
    rational_charpoly,
    root_of_unity_exponent,
    unit_root_kernel,
)
from .subspace import Subspace, adapted_basis, coordinates

__all__ = [
    "CompositionFactor",
    "IntPolynomial",
    "InvariantSearch",
    "IrreducibilityCertificate",
    "Matrix",
    "ROOT_OF_UNITY_EXPONENT",
    "Subspace",
    "adapted_basis",
    "all_eigenvalues_roots_of_unity",
    "charpoly",
    "commutator",
    "composition_factors",
    "coordinates",
    "cross",
    "dot",
    "enveloping_algebra",
    "fraction_str",
    "hermite_normal_form",
    "integer_kernel",
    "largest_invariant_inside",
    "lattice_hnf",
    "maximal_minor_gcd",
    "minimal_invariant_subspaces",
    "primitive",
    "quotient_action",
    "rational_charpoly",
    "restriction",
    "root_of_unity_exponent",
    "spin",
    "to_fraction",
    "unit_root_kernel",
    "vec",
    "verify_certificate",
]
