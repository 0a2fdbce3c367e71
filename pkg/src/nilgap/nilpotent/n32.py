"""Exact coadjoint-orbit bookkeeping for the free 2-step nilpotent group on three generators.

The Lie algebra is ``R^3 ⊕ R^3`` with bracket ``[(X1,Y1),(X2,Y2)] = (0, 2 X1∧X2)``;
the group law is ``(x1,y1)(x2,y2) = (x1+x2, y1+y2+x1∧x2)``. Identifying the
algebra with its dual by the standard scalar product,
``Ad*(x,y)(X0,Y0) = (X0 + x∧Y0, Y0)``, so for ``Y0 ≠ 0`` the orbit is the
affine plane ``{(λ0 Y0 + Y, Y0) : Y ⊥ Y0}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..exact.lattice import hermite_normal_form
from ..exact.matrix import Matrix, cross, dot, fraction_str, vec
from ..torus.virtual import iter_word_ball

Vec3 = tuple[Fraction, Fraction, Fraction]


def _v3(v) -> Vec3:
    out = vec(v)
    if len(out) != 3:
        raise ValueError(f"expected a 3-vector, got length {len(out)}")
    return out


def _strs(v) -> list[str]:
    return [fraction_str(x) for x in v]


@dataclass(frozen=True)
class CoadjointOrbit:
    """``O_{λ0, Y0}`` for ``Y0 ≠ 0``, or the singleton ``{(X0, 0)}``.

    The pair ``(λ0, Y0)`` determines the plane, so equality of descriptors is
    equality of orbits.
    """

    y0: Vec3
    lambda0: Fraction | None = None
    fixed_point: Vec3 | None = None

    @property
    def singleton(self) -> bool:
        return self.fixed_point is not None

    def contains(self, x: Sequence, y: Sequence) -> bool:
        x, y = _v3(x), _v3(y)
        if self.singleton:
            return x == self.fixed_point and not any(y)
        if y != self.y0:
            return False
        return dot(x, self.y0) == self.lambda0 * dot(self.y0, self.y0)

    def to_json(self) -> dict:
        if self.singleton:
            return {"kind": "singleton", "point": [_strs(self.fixed_point), _strs((0, 0, 0))]}
        return {"kind": "plane", "lambda0": fraction_str(self.lambda0), "y0": _strs(self.y0)}


def coadjoint_orbit(x0: Sequence, y0: Sequence) -> CoadjointOrbit:
    x0, y0 = _v3(x0), _v3(y0)
    if not any(y0):
        return CoadjointOrbit(y0, None, x0)
    return CoadjointOrbit(y0, dot(x0, y0) / dot(y0, y0))


def coadjoint_action(x: Sequence, y: Sequence, x0: Sequence, y0: Sequence) -> tuple[Vec3, Vec3]:
    """``Ad*(x, y)(X0, Y0) = (X0 + x∧Y0, Y0)``; the central part ``y`` acts trivially."""
    _v3(y)
    x0, y0 = _v3(x0), _v3(y0)
    w = cross(_v3(x), y0)
    return tuple(a + b for a, b in zip(x0, w)), y0


def group_product(g: tuple[Sequence, Sequence], h: tuple[Sequence, Sequence]) -> tuple[Vec3, Vec3]:
    (x1, y1), (x2, y2) = (tuple(map(_v3, g)), tuple(map(_v3, h)))
    w = cross(x1, x2)
    return (
        tuple(a + b for a, b in zip(x1, x2)),
        tuple(a + b + c for a, b, c in zip(y1, y2, w)),
    )


@dataclass
class RationalityCertificate:
    rational: bool
    generator: int | None  # Δ_{Y0} = generator · Z
    target: str | None  # m = λ0 ||Y0||^2
    bezout: tuple[int, int, int] | None  # <bezout, Y0> = generator
    lattice_point: tuple[tuple[int, ...], tuple[int, ...]] | None
    reason: str

    def to_json(self) -> dict:
        return {
            "rational": self.rational,
            "delta_generator": self.generator,
            "m": self.target,
            "bezout_vector": None if self.bezout is None else list(self.bezout),
            "lattice_point": None if self.lattice_point is None else [list(p) for p in self.lattice_point],
            "reason": self.reason,
        }


def delta_lattice(y0: Sequence[int]) -> tuple[int, tuple[int, int, int]]:
    """Generator ``g`` of ``Δ_{Y0} = {m : m Y0 ∈ (R Y0)⊥ + ||Y0||² Z³}`` with a Bézout vector.

    ``m Y0 − ||Y0||² X ⊥ Y0`` reads ``m = <X, Y0>``, so ``Δ_{Y0}`` is the image
    of ``X ↦ <X, Y0>`` on ``Z³``; the Hermite form of the column ``Y0`` gives
    its generator and a preimage.
    """
    h, u = hermite_normal_form([[int(c)] for c in y0])
    g = h[0][0]
    x = tuple(u[0])
    if sum(a * b for a, b in zip(x, y0)) != g:
        raise AssertionError("Hermite transform does not reproduce the gcd")
    return g, x


def orbit_is_rational(o: CoadjointOrbit) -> RationalityCertificate:
    """Does ``O_{λ0,Y0}`` meet ``Z³ ⊕ Z³``? Certificate: an explicit lattice point."""
    if o.singleton:
        raise ValueError("rationality is decided for two-dimensional orbits only")
    y0 = o.y0
    if any(c.denominator != 1 for c in y0):
        return RationalityCertificate(False, None, None, None, None, "Y0 is not integral")
    yi = tuple(int(c) for c in y0)
    m = o.lambda0 * sum(c * c for c in yi)
    g, bez = delta_lattice(yi)
    if m.denominator != 1:
        return RationalityCertificate(False, g, fraction_str(m), bez, None, "lambda0 ||Y0||^2 is not an integer")
    m = int(m)
    if m % g:
        return RationalityCertificate(False, g, str(m), bez, None, f"{m} is not a multiple of gcd(Y0) = {g}")
    x = tuple(c * (m // g) for c in bez)
    if not o.contains(x, yi):
        raise AssertionError("certificate point is not on the orbit")
    return RationalityCertificate(True, g, str(m), bez, (x, yi), "lattice point found")


def brute_force_rational(o: CoadjointOrbit, bound: int = 10) -> bool:
    """Scan ``X ∈ Z³`` with sup-norm ``<= bound`` for a point of the orbit."""
    if any(c.denominator != 1 for c in o.y0):
        return False
    target = o.lambda0 * dot(o.y0, o.y0)
    rng = range(-bound, bound + 1)
    return any(dot(x, o.y0) == target for x in product(rng, repeat=3))


def _check_sl3(a: Matrix) -> None:
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {a.shape}")
    if a.det() != 1:
        raise ValueError(f"det A = {a.det()}, expected 1")


def aut_matrix(a: Matrix, b: Matrix | None = None) -> Matrix:
    """``g_{A,B}`` = [[A, 0], [B, (det A)(A^t)^-1]] acting on ``(x, y)``."""
    b = b if b is not None else Matrix.zeros(3, 3)
    lower = a.T.inverse().scale(a.det())
    rows = [list(r) + [0, 0, 0] for r in a.rows] + [list(rb) + list(rl) for rb, rl in zip(b.rows, lower.rows)]
    return Matrix(rows)


def aut_action_on_orbit(a: Matrix, o: CoadjointOrbit) -> CoadjointOrbit:
    """Image of the orbit under ``g_{A,0}``, ``A ∈ SL3``: ``(X, Y) ↦ (AX, (A^t)^-1 Y)``.

    On descriptors, ``O_{λ0,Y0} ↦ O_{β0, (A^t)^-1 Y0}`` with
    ``β0 = λ0 ||Y0||² / ||(A^t)^-1 Y0||²``.
    """
    _check_sl3(a)
    if o.singleton:
        return CoadjointOrbit(o.y0, None, tuple(a @ o.fixed_point))
    y1 = tuple(a.T.inverse() @ o.y0)
    beta = o.lambda0 * dot(o.y0, o.y0) / dot(y1, y1)
    return CoadjointOrbit(y1, beta)


def cross_product_identity(a: Matrix, x: Sequence, y: Sequence) -> bool:
    """``(AX)∧(AY) = (det A)(A^t)^-1 (X∧Y)``, exactly.

    This is what makes ``g_{A,B}`` respect the group law. The left side must
    be ``(AX)∧(AY)``; ``A(X∧Y)`` differs from it in general.
    """
    x, y = _v3(x), _v3(y)
    lhs = cross(tuple(a @ x), tuple(a @ y))
    rhs = a.T.inverse().scale(a.det()) @ cross(x, y)
    return tuple(lhs) == tuple(rhs)


@dataclass
class StabilizerSample:
    members: list[tuple[tuple[int, ...], Matrix]]
    projective_kernel: list[tuple[int, ...]]
    coset_counts: list[int]  # distinct A^t Y0 seen, per radius
    index_estimate: int | None

    def to_json(self) -> dict:
        return {
            "members": [{"word": list(w), "matrix": m.to_strings()} for w, m in self.members],
            "projective_kernel_words": [list(w) for w in self.projective_kernel],
            "coset_counts": self.coset_counts,
            "index_estimate": self.index_estimate,
        }


def orbit_stabilizer_ball(gens: Sequence[Matrix], o: CoadjointOrbit, ball: int) -> StabilizerSample:
    """Elements of the word ball with ``A^t Y0 = Y0``.

    Right cosets ``Γ0 A`` correspond to the vectors ``A^t Y0``, so their count
    per radius tracks the index; when two consecutive radii agree the count is
    reported as the index estimate. Members fixing ``(R Y0)⊥`` pointwise too
    (and ``λ0 ≠ 0``) act trivially on the orbit and are listed as the projective kernel.
    """
    if o.singleton:
        raise ValueError("stabilizers are computed for two-dimensional orbits")
    for g in gens:
        _check_sl3(g)
    y0 = o.y0
    perp = Matrix([list(y0)]).nullspace()
    ident = Matrix.identity(3)
    members, kernel = [], []
    images: set = set()
    counts = [0] * (ball + 1)
    for w, m in iter_word_ball(list(gens), ball):
        # words arrive by length, so the running count is the count for every radius >= len(w)
        images.add(tuple(m.T @ y0))
        for r in range(len(w), ball + 1):
            counts[r] = len(images)
        if tuple(m.T @ y0) == y0:
            members.append((w, m))
            if m == ident or (o.lambda0 != 0 and all(tuple(m @ p) == tuple(p) for p in perp)):
                kernel.append(w)
    index = counts[-1] if ball >= 1 and counts[-1] == counts[-2] else None
    return StabilizerSample(members, kernel, counts, index)
