"""Groups of affine torus maps: spectral gap verdicts, ergodicity and mixing checks."""

from .affine import AffineGroupSpec, AffineMap, dualize
from .amenable import amenable_core, amenable_core_report, commutator_levels
from .verdict import Budgets, Verdict, check_nogap_witness, factor_torus_data, spectral_gap_verdict
from .virtual import (
    PingPongCertificate,
    VirtualAbelianResult,
    classify_factors,
    find_ping_pong,
    verify_ping_pong,
    virtually_abelian,
)

__all__ = [
    "AffineGroupSpec",
    "AffineMap",
    "Budgets",
    "PingPongCertificate",
    "Verdict",
    "VirtualAbelianResult",
    "amenable_core",
    "amenable_core_report",
    "check_nogap_witness",
    "classify_factors",
    "commutator_levels",
    "dualize",
    "factor_torus_data",
    "find_ping_pong",
    "spectral_gap_verdict",
    "verify_ping_pong",
    "virtually_abelian",
]
