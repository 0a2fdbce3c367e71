"""Spectral gap verdicts for groups of affine torus maps.

The action of H on T = R^d/Z^d fails to have a spectral gap exactly when some
nonzero rational subspace W of the character space, invariant under the dual
group, carries an amenable (equivalently, virtually abelian) image of H.
Translations play no role: only the automorphism parts enter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exact.invariant import minimal_invariant_subspaces, restriction
from ..exact.subspace import Subspace
from .affine import AffineGroupSpec, dualize
from .amenable import amenable_core_report
from .virtual import classify_factors, virtually_abelian

THEOREM_CHAIN = (
    "no spectral gap <=> some nonzero invariant rational subspace of the dual has amenable image "
    "<=> some such subspace has virtually abelian image"
)


@dataclass(frozen=True)
class Budgets:
    depth: int = 3
    ball: int = 6
    effort: int = 16
    seed: int = 0

    def to_json(self) -> dict:
        return {"depth": self.depth, "ball": self.ball, "effort": self.effort, "seed": self.seed}


@dataclass
class Verdict:
    kind: str  # "Gap" | "NoGap" | "Unknown"
    witness: Subspace | None = None
    factor_torus: dict | None = None
    evidence: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "witness": None if self.witness is None else self.witness.to_json(),
            "factor_torus": self.factor_torus,
            "evidence": self.evidence,
        }


def factor_torus_data(w: Subspace) -> dict:
    """Characters ``W ∩ Z^d`` of the factor torus and the lattice of the collapsed subtorus.

    The subtorus is ``S = W⊥ / (W⊥ ∩ Z^d)`` and the factor is ``T / S``.
    """
    perp = w.complement()
    return {
        "character_lattice": [list(v) for v in w.integral_basis()],
        "subtorus_lattice": [list(v) for v in perp.integral_basis()],
        "factor_dim": w.dim,
    }


def _nogap(w: Subspace, evidence: list[dict]) -> Verdict:
    return Verdict("NoGap", w.saturated(), factor_torus_data(w), evidence)


def spectral_gap_verdict(spec: AffineGroupSpec, budgets: Budgets | None = None) -> Verdict:
    b = budgets or Budgets()
    dual = dualize(spec)
    d = spec.dim
    ev: list[dict] = [{"step": "dualize", "generators": [g.to_strings() for g in dual]}]
    if not spec.is_automorphism_group:
        ev.append({"step": "translations", "note": "ignored; the criterion only involves automorphism parts"})

    core = amenable_core_report(dual, b.depth)
    ev.append({"step": "amenable_core", **core.to_json()})
    if not core.subspace.is_zero():
        mats = [restriction(g, core.subspace) for g in dual]
        factors, complete = classify_factors(mats, effort=b.effort, seed=b.seed, ball=b.ball)
        ok = complete and all(f.status == "amenable" for f in factors)
        ev.append(
            {
                "step": "core_amenability",
                "complete": complete,
                "factors": [f.to_json() for f in factors],
                "certified": ok,
            }
        )
        if ok:
            ev.append({"step": "conclusion", "chain": THEOREM_CHAIN})
            return _nogap(core.subspace, ev)

    search = minimal_invariant_subspaces(dual, effort=b.effort, seed=b.seed)
    ev.append(
        {
            "step": "invariant_subspaces",
            "flag": search.flag,
            "found": [s.to_json() for s in search.subspaces],
            "certificate": None if search.certificate is None else search.certificate.to_json(),
        }
    )
    candidates = list(search.subspaces) if search.flag != "exhausted" else []
    candidates.append(Subspace.full(d))
    for w in candidates:
        mats = [restriction(g, w) for g in dual]
        va = virtually_abelian(mats, ball=b.ball)
        ev.append({"step": "virtually_abelian", "subspace_dim": w.dim, **va.to_json()})
        if va.answer == "yes":
            ev.append({"step": "conclusion", "chain": THEOREM_CHAIN})
            return _nogap(w, ev)
    if search.flag == "exhausted" and va.answer == "no":
        # Q-irreducible and not virtually abelian: the only candidate subspace fails
        ev.append({"step": "conclusion", "chain": THEOREM_CHAIN})
        return Verdict("Gap", None, None, ev)

    factors, complete = classify_factors(dual, effort=b.effort, seed=b.seed, ball=b.ball)
    ev.append(
        {
            "step": "composition_factors",
            "complete": complete,
            "factors": [f.to_json() for f in factors],
        }
    )
    if complete and all(f.status == "non-amenable" for f in factors):
        # every nonzero invariant subspace contains an irreducible one, isomorphic to some
        # composition factor, whose image is not amenable
        ev.append({"step": "conclusion", "chain": THEOREM_CHAIN})
        return Verdict("Gap", None, None, ev)
    ev.append({"step": "conclusion", "note": "budgets exhausted without a decisive certificate"})
    return Verdict("Unknown", None, None, ev)


def check_nogap_witness(spec: AffineGroupSpec, verdict: Verdict, budgets: Budgets | None = None) -> bool:
    """Re-verify a NoGap witness: exact invariance plus a fresh amenability certificate."""
    b = budgets or Budgets()
    if verdict.kind != "NoGap" or verdict.witness is None:
        return False
    dual = dualize(spec)
    w = verdict.witness
    if w.is_zero() or not all(w.is_invariant(g) for g in dual):
        return False
    mats = [restriction(g, w) for g in dual]
    factors, complete = classify_factors(mats, effort=b.effort, seed=b.seed, ball=b.ball)
    if complete and all(f.status == "amenable" for f in factors):
        return True
    return virtually_abelian(mats, ball=b.ball).answer == "yes"
