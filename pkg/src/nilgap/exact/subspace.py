"""Rational subspaces of Q^d in canonical echelon form."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import hermite_normal_form, integer_kernel, lattice_hnf
from .matrix import Matrix, fraction_str, vec


class Subspace:
    """A subspace of Q^d stored as the nonzero rows of its reduced echelon form.

    ``lattice_basis`` is filled in by :meth:`saturated` and holds a Z-basis of
    ``W ∩ Z^d`` in Hermite normal form.
    """

    __slots__ = ("ambient_dim", "basis", "lattice_basis")

    def __init__(self, ambient_dim: int, basis: Sequence[Sequence] = (), lattice_basis=None):
        self.ambient_dim = ambient_dim
        rows = [vec(v) for v in basis]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("basis vector length does not match ambient dimension")
        if rows:
            red, pivots = Matrix(rows).rref()
            self.basis = tuple(red.row(i) for i in range(len(pivots)))
        else:
            self.basis = ()
        self.lattice_basis = None if lattice_basis is None else tuple(tuple(int(x) for x in v) for v in lattice_basis)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, list(vectors))

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(d, Matrix.identity(d).rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x != 0) for r in self.basis)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        rows = [[fraction_str(x) for x in r] for r in self.basis]
        return f"Subspace(d={self.ambient_dim}, basis={rows})"

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        if all(x == 0 for x in v):
            return True
        if self.is_zero():
            return False
        return Matrix(list(self.basis) + [v]).rank() == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def complement(self) -> "Subspace":
        """Orthogonal complement for the standard dot product."""
        if self.is_zero():
            return Subspace.full(self.ambient_dim)
        return Subspace(self.ambient_dim, Matrix(self.basis).nullspace())

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        return (self.complement() + other.complement()).complement()

    def image(self, g: Matrix) -> "Subspace":
        return Subspace(self.ambient_dim, [g @ b for b in self.basis])

    def preimage(self, g: Matrix) -> "Subspace":
        """``{v : g v in self}``; does not require ``g`` invertible."""
        if self.is_full():
            return Subspace.full(self.ambient_dim)
        c = Matrix(self.complement().basis)
        return Subspace(self.ambient_dim, (c @ g).nullspace())

    def is_invariant(self, g: Matrix) -> bool:
        return all(self.contains(g @ b) for b in self.basis)

    def saturated(self) -> "Subspace":
        """Copy carrying the HNF Z-basis of ``W ∩ Z^d``."""
        if self.is_zero():
            lat = []
        elif self.is_full():
            lat = [tuple(int(i == j) for j in range(self.ambient_dim)) for i in range(self.ambient_dim)]
        else:
            lat = lattice_hnf(integer_kernel(self.complement().basis))
        return Subspace(self.ambient_dim, self.basis, lattice_basis=lat)

    def integral_basis(self) -> tuple[tuple[int, ...], ...]:
        s = self if self.lattice_basis is not None else self.saturated()
        return s.lattice_basis

    def to_json(self) -> dict:
        out = {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "basis": [[fraction_str(x) for x in r] for r in self.basis],
        }
        out["lattice_basis"] = [list(v) for v in self.integral_basis()]
        return out


def coordinates(basis_cols: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...]:
    """Coordinates of ``v`` in the (independent) list ``basis_cols``; raises if ``v`` is outside the span."""
    k = len(basis_cols)
    aug = Matrix([list(col) + [x] for col, x in zip(zip(*basis_cols), vec(v))])
    red, pivots = aug.rref()
    if k in pivots:
        raise ValueError("vector is not in the span")
    if len(pivots) != k:
        raise ValueError("basis is linearly dependent")
    return tuple(red[i, k] for i in range(k))


def adapted_basis(w: Subspace) -> tuple[Matrix, Matrix]:
    """Unimodular ``P`` whose first ``dim w`` columns are the lattice basis of ``w``.

    Returns ``(P, P^-1)``; in the basis of columns of ``P`` every integer
    matrix leaving ``w`` invariant is block upper triangular with integral
    diagonal blocks.
    """
    d = w.ambient_dim
    lat = w.integral_basis()
    k = len(lat)
    if k == 0:
        ident = Matrix.identity(d)
        return ident, ident
    at = [list(col) for col in zip(*lat)]  # d x k
    h, u = hermite_normal_form(at)
    top = Matrix([row[:k] for row in h[:k]])
    if top != Matrix.identity(k) or any(any(r) for r in h[k:]):
        raise ArithmeticError("lattice basis is not saturated")
    u_mat = Matrix(u)
    return u_mat.inverse(), u_mat
