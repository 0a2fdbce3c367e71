"""Immutable exact matrices over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every value entering the exact layer must already be
    rational and written exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rational entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    if hasattr(x, "__index__"):
        return Fraction(int(x))
    raise TypeError(f"cannot use {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Matrix:
    """Dense matrix with :class:`~fractions.Fraction` entries.

    Instances are immutable and hashable, so they can be used as dictionary
    keys during group-ball enumeration.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if not data:
            raise ValueError("matrix must have at least one row")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple) -> "Matrix":
        m = object.__new__(cls)
        m._rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0])
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls._raw(tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        vals = [to_fraction(v) for v in values]
        return cls._raw(tuple(tuple(vals[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(zip(*cols))

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        out = [[Fraction(0)] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[r + i][c + j] = b._rows[i][j]
            r += b.nrows
            c += b.ncols
        return cls._raw(tuple(tuple(row) for row in out))

    # -- accessors ---------------------------------------------------------

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for r in self._rows for x in r)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_int_rows(self) -> list[list[int]]:
        if not self.is_integer():
            raise ValueError("matrix has non-integer entries")
        return [[int(x) for x in r] for r in self._rows]

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    def to_strings(self) -> list[list[str]]:
        return [[fraction_str(x) for x in r] for r in self._rows]

    # -- arithmetic ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.to_strings()})"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._rows))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other._rows))
            return Matrix._raw(
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows)
            )
        vec = tuple(to_fraction(x) for x in other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self._rows)))

    def trace(self) -> Fraction:
        self._require_square()
        return sum((self._rows[i][i] for i in range(self.nrows)), Fraction(0))

    def _require_square(self) -> None:
        if not self.is_square:
            raise ValueError(f"square matrix required, got {self.shape}")

    def __pow__(self, k: int) -> "Matrix":
        self._require_square()
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def det(self) -> Fraction:
        """Determinant by fraction-free Bareiss elimination on a scaled copy."""
        self._require_square()
        n = self.nrows
        a = [list(r) for r in self._rows]
        sign = 1
        prev = Fraction(1)
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def inverse(self) -> "Matrix":
        self._require_square()
        n = self.nrows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._rows)]
        for c in range(n):
            piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            aug[c], aug[piv] = aug[piv], aug[c]
            p = aug[c][c]
            aug[c] = [x / p for x in aug[c]]
            for i in range(n):
                if i != c and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        return Matrix._raw(tuple(tuple(r[n:]) for r in aug))

    def adjugate_inverse(self) -> "Matrix":
        """Inverse of a unimodular integer matrix: sign(det) times the adjugate.

        The result is integral by construction; the general inverse is used to
        form it and then checked for integrality.
        """
        d = self.det()
        if abs(d) != 1:
            raise ValueError(f"determinant {d} is not a unit")
        inv = self.inverse()
        if self.is_integer() and not inv.is_integer():
            raise ArithmeticError("inverse of a unimodular integer matrix is not integral")
        return inv

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row-echelon form and pivot columns."""
        a = [list(r) for r in self._rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            if r >= nr:
                break
            piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            p = a[r][c]
            a[r] = [x / p for x in a[r]]
            for i in range(nr):
                if i != r and a[i][c] != 0:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
        return Matrix._raw(tuple(tuple(row) for row in a)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of the right kernel, one vector per free column."""
        red, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for i, p in enumerate(pivots):
                v[p] = -red[i, f]
            basis.append(tuple(v))
        return basis

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)


def vec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(x) for x in values)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def cross(u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
    u = vec(u)
    v = vec(v)
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def commutator(a: Matrix, b: Matrix) -> Matrix:
    """``a b a^-1 b^-1``."""
    return a @ b @ a.inverse() @ b.inverse()
