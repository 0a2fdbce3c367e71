"""Nilmanifold layer: exact orbit bookkeeping for N_{3,2} and Hermite-truncated metaplectic operators."""

from .n32 import (
    CoadjointOrbit,
    RationalityCertificate,
    StabilizerSample,
    aut_action_on_orbit,
    aut_matrix,
    brute_force_rational,
    coadjoint_action,
    coadjoint_orbit,
    cross_product_identity,
    delta_lattice,
    group_product,
    orbit_is_rational,
    orbit_stabilizer_ball,
)

__all__ = [
    "CoadjointOrbit",
    "RationalityCertificate",
    "StabilizerSample",
    "aut_action_on_orbit",
    "aut_matrix",
    "brute_force_rational",
    "coadjoint_action",
    "coadjoint_orbit",
    "cross_product_identity",
    "delta_lattice",
    "group_product",
    "orbit_is_rational",
    "orbit_stabilizer_ball",
]
