"""Named example groups, including an arithmetic lattice built by restriction of scalars.

The Z[√2] example: ``H = SL_3(Z[√2]) ∩ SO(q)`` with ``q = x1² + x2² − √2·x3²``.
Writing ``Z[√2]^3 ≅ Z^6`` turns each element into a 6×6 integer matrix; the
group is irreducible over Q although it preserves two real 3-spaces (the
eigenspaces of multiplication by √2).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .exact.matrix import Matrix
from .torus.affine import AffineGroupSpec, AffineMap


@dataclass(frozen=True, order=True)
class QuadInt:
    """``a + b√2`` with integer ``a, b``."""

    a: int
    b: int = 0

    def __add__(self, other):
        other = _q(other)
        return QuadInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _q(other)
        return QuadInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _q(other) - self

    def __neg__(self):
        return QuadInt(-self.a, -self.b)

    def __mul__(self, other):
        other = _q(other)
        return QuadInt(self.a * other.a + 2 * self.b * other.b, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadInt":
        return QuadInt(self.a, -self.b)

    def norm(self) -> int:
        return self.a * self.a - 2 * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return self.a + self.b * 2**0.5

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        coef = "" if abs(self.b) == 1 else str(abs(self.b))
        if self.a == 0:
            return f"{'-' if self.b < 0 else ''}{coef}√2"
        return f"{self.a}{'+' if self.b > 0 else '-'}{coef}√2"


SQRT2 = QuadInt(0, 1)


def _q(x) -> QuadInt:
    return x if isinstance(x, QuadInt) else QuadInt(int(x), 0)


@dataclass(frozen=True)
class QuadIntMatrix:
    """Square matrix over Z[√2]."""

    rows: tuple[tuple[QuadInt, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_q(x) for x in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("QuadIntMatrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int = 3) -> "QuadIntMatrix":
        return cls(tuple(tuple(QuadInt(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, values) -> "QuadIntMatrix":
        n = len(values)
        return cls(tuple(tuple(_q(values[i]) if i == j else QuadInt(0) for j in range(n)) for i in range(n)))

    def __matmul__(self, other: "QuadIntMatrix") -> "QuadIntMatrix":
        cols = list(zip(*other.rows))
        return QuadIntMatrix(
            tuple(tuple(sum((x * y for x, y in zip(r, c)), QuadInt(0)) for c in cols) for r in self.rows)
        )

    def __add__(self, other: "QuadIntMatrix") -> "QuadIntMatrix":
        return QuadIntMatrix(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    @property
    def T(self) -> "QuadIntMatrix":
        return QuadIntMatrix(tuple(zip(*self.rows)))

    def conjugate(self) -> "QuadIntMatrix":
        return QuadIntMatrix(tuple(tuple(x.conjugate() for x in r) for r in self.rows))

    def scale(self, c) -> "QuadIntMatrix":
        c = _q(c)
        return QuadIntMatrix(tuple(tuple(c * x for x in r) for r in self.rows))

    def det(self) -> QuadInt:
        m = self.rows
        if self.n == 1:
            return m[0][0]
        total = QuadInt(0)
        for j in range(self.n):
            minor = QuadIntMatrix(tuple(tuple(r[k] for k in range(self.n) if k != j) for r in m[1:]))
            term = m[0][j] * minor.det()
            total = total + term if j % 2 == 0 else total - term
        return total

    def commutes_with(self, other: "QuadIntMatrix") -> bool:
        return self @ other == other @ self

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"


Q_FORM = QuadIntMatrix.diag([1, 1, -SQRT2])


def preserves_q(g: QuadIntMatrix) -> bool:
    """Exact test ``g^T Q g = Q`` for ``Q = diag(1, 1, −√2)``."""
    return g.T @ Q_FORM @ g == Q_FORM


def restrict_scalars(g: QuadIntMatrix) -> Matrix:
    """Integer matrix of ``g`` on Z[√2]^n ≅ Z^{2n}.

    Coordinates are interleaved: ``(x_j, y_j)`` stands for ``x_j + y_j√2``, so
    an entry ``a + b√2`` becomes the block ``[[a, 2b], [b, a]]``.
    """
    n = g.n
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i, j in product(range(n), repeat=2):
        e = g.rows[i][j]
        out[2 * i][2 * j] = e.a
        out[2 * i][2 * j + 1] = 2 * e.b
        out[2 * i + 1][2 * j] = e.b
        out[2 * i + 1][2 * j + 1] = e.a
    return Matrix(out)


def sqrt2_multiplier(n: int = 3) -> Matrix:
    """The centralizing element J: multiplication by √2, with J² = 2I."""
    return restrict_scalars(QuadIntMatrix.identity(n).scale(SQRT2))


def galois_sign(n: int = 3) -> Matrix:
    """Block-diagonal sign matrix diag(1, −1, ...) realising a + b√2 -> a − b√2."""
    return Matrix.diag([1 if k % 2 == 0 else -1 for k in range(2 * n)])


def _rotations() -> list[QuadIntMatrix]:
    out = []
    for c, s in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        out.append(QuadIntMatrix(((c, -s, 0), (s, c, 0), (0, 0, 1))))
    # reflections in the (x1, x2) plane paired with x3 -> -x3 keep det = 1
    for c, s in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        out.append(QuadIntMatrix(((c, s, 0), (s, -c, 0), (0, 0, -1))))
    return out


def boost(plane: int, a: QuadInt, c: QuadInt) -> QuadIntMatrix:
    """Hyperbolic block ``[[a, √2 c], [c, a]]`` on ``(x_plane, x3)``; needs ``a² − √2 c² = 1``."""
    rows = [[QuadInt(int(i == j)) for j in range(3)] for i in range(3)]
    i = plane
    rows[i][i] = a
    rows[i][2] = SQRT2 * c
    rows[2][i] = c
    rows[2][2] = a
    return QuadIntMatrix(tuple(tuple(r) for r in rows))


def pell_solutions(bound: int) -> list[tuple[QuadInt, QuadInt]]:
    """All ``(a, c)`` with coefficients in ``[-bound, bound]``, ``c ≠ 0`` and ``a² − √2c² = 1``."""
    one = QuadInt(1)
    rng = range(-bound, bound + 1)
    sols = []
    for a0, a1, c0, c1 in product(rng, repeat=4):
        a, c = QuadInt(a0, a1), QuadInt(c0, c1)
        if c.is_zero():
            continue
        if a * a - SQRT2 * c * c == one:
            sols.append((a, c))
    return sorted(sols)


@dataclass
class SearchResult:
    elements: list[QuadIntMatrix]
    diagnostic: str


def search_so_q(entry_bound: int) -> SearchResult:
    """det-1 elements of SO(q) over Z[√2]: plane rotations and Pell-type boosts.

    The boost family ``[[a, √2c], [c, a]]`` preserves ``x_i² − √2 x3²``
    exactly when ``a² − √2c² = 1``.
    """
    if entry_bound < 1:
        raise ValueError("entry_bound must be at least 1")
    found = [g for g in _rotations()]
    for a, c in pell_solutions(entry_bound):
        for plane in (0, 1):
            found.append(boost(plane, a, c))
    found = [g for g in found if g.det() == QuadInt(1) and preserves_q(g)]
    pairs = any(not g.commutes_with(h) for g in found for h in found)
    diag = "ok" if pairs else "fewer than two non-commuting elements; raise the bound"
    return SearchResult(found, diag)


# -- curated corpus --------------------------------------------------------------


@dataclass(frozen=True)
class NamedExample:
    name: str
    spec: AffineGroupSpec
    expected: str
    description: str
    witness: tuple = ()


def _aff(rows, translation=()) -> AffineMap:
    return AffineMap(Matrix(rows), tuple(translation))


def exa1_generators() -> list[QuadIntMatrix]:
    """A quarter-turn in (x1, x2) and the smallest boost in (x1, x3)."""
    a, c = QuadInt(3, 2), QuadInt(2, 2)
    return [_rotations()[1], boost(0, a, c)]


def curated_examples() -> list[NamedExample]:
    s = [[0, -1], [1, 0]]
    t = [[1, 1], [0, 1]]
    cat = [[2, 1], [1, 1]]
    flip = [[-1, 0], [1, 1]]  # conjugates the cat map to its inverse, order 2
    exa1 = [restrict_scalars(g) for g in exa1_generators()]
    return [
        NamedExample(
            "cat_map",
            AffineGroupSpec(2, (_aff(cat),), name="cat_map"),
            "NoGap",
            "single hyperbolic automorphism; cyclic groups are amenable",
            witness=((1, 0), (0, 1)),
        ),
        NamedExample(
            "sl2z_ST",
            AffineGroupSpec(2, (_aff(s), _aff(t)), name="sl2z_ST"),
            "Gap",
            "S and T generate SL_2(Z), irreducible with a free subgroup",
        ),
        NamedExample(
            "shear",
            AffineGroupSpec(2, (_aff(t),), name="shear"),
            "NoGap",
            "unipotent shear; fixes a dual vector, so not even ergodic",
            witness=((1, 0), (0, 1)),
        ),
        NamedExample(
            "rational_rotation",
            AffineGroupSpec(2, (_aff([[1, 0], [0, 1]], ("1/3", "0")),), name="rational_rotation"),
            "NoGap",
            "translation by (1/3, 0); has finite orbits",
            witness=((1, 0), (0, 1)),
        ),
        NamedExample(
            "exa1_6dim",
            AffineGroupSpec(6, tuple(AffineMap(m) for m in exa1), name="exa1_6dim"),
            "Gap",
            "SO(x1²+x2²−√2x3²) over Z[√2] restricted to Z^6; Q-irreducible but R-reducible",
        ),
        NamedExample(
            "dihedral_hyperbolic",
            AffineGroupSpec(2, (_aff(cat), _aff(flip)), name="dihedral_hyperbolic"),
            "NoGap",
            "cat map and an involution inverting it: infinite dihedral, virtually cyclic",
            witness=((1, 0), (0, 1)),
        ),
        NamedExample(
            "block_reducible",
            AffineGroupSpec(
                3,
                (_aff([[0, -1, 1], [1, 0, 0], [0, 0, 1]]), _aff([[1, 1, 0], [0, 1, 1], [0, 0, 1]])),
                name="block_reducible",
            ),
            "NoGap",
            "SL_2(Z)-block extended by a coupling column; the last coordinate is an invariant circle factor",
            witness=((0, 0, 1),),
        ),
    ]


def example(name: str) -> NamedExample:
    for ex in curated_examples():
        if ex.name == name:
            return ex
    raise KeyError(f"unknown example {name!r}")
