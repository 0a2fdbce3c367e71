"""The amenable core: where every commutator acts with root-of-unity eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..exact.invariant import largest_invariant_inside
from ..exact.matrix import Matrix, commutator
from ..exact.poly import unit_root_kernel
from ..exact.subspace import Subspace


def commutator_levels(gens: Sequence[Matrix], depth: int) -> list[list[tuple[str, Matrix]]]:
    """Nested commutators by level.

    Level 1 holds ``[g_i^±, g_j^±]`` for ``i < j``; level ``k+1`` holds
    ``[c, g^±]`` for ``c`` in level ``k``. Inverses are skipped since
    ``[a, b]^-1 = [b, a]`` has the same generalized eigenspaces.
    """
    if depth < 1:
        raise ValueError("commutator depth must be at least 1")
    letters = []
    for i, g in enumerate(gens, start=1):
        letters.append((f"g{i}", g))
        letters.append((f"g{i}^-1", g.inverse()))
    first = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            for la, a in letters[2 * i : 2 * i + 2]:
                for lb, b in letters[2 * j : 2 * j + 2]:
                    first.append((f"[{la},{lb}]", commutator(a, b)))
    levels = [first]
    ident = Matrix.identity(gens[0].nrows)
    for _ in range(depth - 1):
        nxt = []
        for lc, c in levels[-1]:
            if c == ident:
                continue
            for lg, g in letters:
                nxt.append((f"[{lc},{lg}]", commutator(c, g)))
        levels.append(nxt)
    return levels


@dataclass
class AmenableCore:
    subspace: Subspace
    depth: int
    commutators_tested: int
    killing_commutator: str | None

    def to_json(self) -> dict:
        return {
            "subspace": self.subspace.to_json(),
            "depth": self.depth,
            "commutators_tested": self.commutators_tested,
            "first_commutator_to_shrink_to_zero": self.killing_commutator,
        }


def amenable_core_report(gens_dual: Sequence[Matrix], depth: int = 3) -> AmenableCore:
    n = gens_dual[0].nrows
    u = Subspace.full(n)
    tested = 0
    killer = None
    for level in commutator_levels(gens_dual, depth):
        for label, c in level:
            tested += 1
            u = u.intersect(Subspace(n, unit_root_kernel(c)))
            if u.is_zero():
                killer = label
                break
        if u.is_zero():
            break
    return AmenableCore(largest_invariant_inside(u, gens_dual), depth, tested, killer)


def amenable_core(gens_dual: Sequence[Matrix], depth: int = 3) -> Subspace:
    """Largest invariant subspace on which every tested commutator has root-of-unity eigenvalues.

    Contained in the true amenable core, so a nonzero answer is a sound
    starting point for a no-gap witness.
    """
    return amenable_core_report(gens_dual, depth).subspace
