"""Affine maps of the torus R^d/Z^d and finitely generated groups of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exact.matrix import Matrix, to_fraction


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + translation`` on ``R^d/Z^d``, with ``matrix`` in GL_d(Z)."""

    matrix: Matrix
    translation: tuple[Fraction, ...] = ()

    def __post_init__(self):
        m = self.matrix if isinstance(self.matrix, Matrix) else Matrix(self.matrix)
        if not m.is_square:
            raise ValueError(f"matrix must be square, got {m.shape}")
        if not m.is_integer():
            raise ValueError("matrix entries must be integers")
        if abs(m.det()) != 1:
            raise ValueError(f"matrix is not unimodular (det = {m.det()})")
        t = self.translation or (0,) * m.nrows
        if len(t) != m.nrows:
            raise ValueError(f"translation has length {len(t)}, expected {m.nrows}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", tuple(_mod1(to_fraction(x)) for x in t))

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    @property
    def is_automorphism(self) -> bool:
        return not any(self.translation)

    def __call__(self, x: Sequence) -> tuple[Fraction, ...]:
        y = self.matrix @ x
        return tuple(_mod1(a + b) for a, b in zip(y, self.translation))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self ∘ other``."""
        t = tuple(a + b for a, b in zip(self.matrix @ other.translation, self.translation))
        return AffineMap(self.matrix @ other.matrix, t)

    def inverse(self) -> "AffineMap":
        inv = self.matrix.adjugate_inverse()
        return AffineMap(inv, tuple(-x for x in inv @ self.translation))

    def dual_matrix(self) -> Matrix:
        """Action on characters: ``(matrix^-1)^T``."""
        return self.matrix.adjugate_inverse().T

    def stripped(self) -> "AffineMap":
        return AffineMap(self.matrix)

    @classmethod
    def identity(cls, d: int) -> "AffineMap":
        return cls(Matrix.identity(d))


@dataclass(frozen=True)
class AffineGroupSpec:
    """Generators of a group of affine torus maps plus an optional walk measure.

    ``weights`` is a probability vector over the symmetrized alphabet
    ``[g1, g1^-1, g2, g2^-1, ...]``; ``None`` means uniform.
    """

    dim: int
    generators: tuple[AffineMap, ...]
    weights: tuple[Fraction, ...] | None = None
    name: str = ""
    notes: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        gens = tuple(g if isinstance(g, AffineMap) else AffineMap(*g) for g in self.generators)
        if not gens:
            raise ValueError("at least one generator is required")
        for i, g in enumerate(gens):
            if g.dim != self.dim:
                raise ValueError(f"generator {i} has dimension {g.dim}, expected {self.dim}")
        object.__setattr__(self, "generators", gens)
        if self.weights is not None:
            w = tuple(to_fraction(x) for x in self.weights)
            if len(w) != 2 * len(gens):
                raise ValueError(f"weights must have length {2 * len(gens)} (one per generator and inverse)")
            if any(x < 0 for x in w):
                raise ValueError("weights must be nonnegative")
            if sum(w) != 1:
                raise ValueError(f"weights sum to {sum(w)}, not 1")
            object.__setattr__(self, "weights", w)

    @property
    def is_automorphism_group(self) -> bool:
        return all(g.is_automorphism for g in self.generators)

    def matrices(self) -> list[Matrix]:
        return [g.matrix for g in self.generators]

    def alphabet(self) -> list[tuple[str, AffineMap]]:
        out = []
        for i, g in enumerate(self.generators, start=1):
            out.append((f"g{i}", g))
            out.append((f"g{i}^-1", g.inverse()))
        return out

    def alphabet_weights(self) -> tuple[Fraction, ...]:
        if self.weights is not None:
            return self.weights
        n = 2 * len(self.generators)
        return tuple(Fraction(1, n) for _ in range(n))

    def conjugate(self, c: Matrix) -> "AffineGroupSpec":
        """Conjugate every generator by the automorphism ``c``: ``c g c^-1``."""
        cm = AffineMap(c)
        ci = cm.inverse()
        gens = tuple(cm.compose(g).compose(ci) for g in self.generators)
        return AffineGroupSpec(self.dim, gens, self.weights, self.name)


def dualize(spec: AffineGroupSpec) -> list[Matrix]:
    """Dual generators ``(g^-1)^T`` acting on the character lattice Z^d."""
    return [g.dual_matrix() for g in spec.generators]
