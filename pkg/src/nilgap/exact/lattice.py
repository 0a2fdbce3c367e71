"""Integer row reduction: Hermite normal form, integer kernels, saturation."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .matrix import Matrix


def _clear_denominators(row: Sequence) -> list[int]:
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF ``H = U A`` with ``U`` unimodular.

    Pivots of ``H`` are positive and entries above a pivot are reduced into
    ``[0, pivot)``. Returns ``(H, U)`` as lists of integer rows.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r >= m:
            break
        # Euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return a, u


def integer_kernel(rows: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Z-basis of ``{x in Z^n : A x = 0}`` for a rational matrix ``A`` (given by rows)."""
    rows = [_clear_denominators(r) for r in rows]
    if not rows:
        raise ValueError("need at least one row (use the standard basis for an empty system)")
    n = len(rows[0])
    at = [list(col) for col in zip(*rows)]  # n x m
    h, u = hermite_normal_form(at)
    return [tuple(u[i]) for i in range(n) if all(x == 0 for x in h[i])]


def primitive(v: Sequence) -> tuple[int, ...]:
    w = _clear_denominators(v)
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    w = [x // g for x in w]
    first = next(x for x in w if x != 0)
    if first < 0:
        w = [-x for x in w]
    return tuple(w)


def lattice_hnf(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Canonical HNF basis of the lattice spanned by integer vectors."""
    if not vectors:
        return []
    h, _ = hermite_normal_form(vectors)
    return [tuple(r) for r in h if any(r)]


def maximal_minor_gcd(vectors: Sequence[Sequence[int]]) -> int:
    """gcd of the k x k minors of a k x n integer matrix; 1 iff the rows are saturated."""
    k = len(vectors)
    n = len(vectors[0])
    g = 0
    for cols in combinations(range(n), k):
        sub = Matrix([[v[c] for c in cols] for v in vectors])
        g = gcd(g, int(sub.det()))
        if g == 1:
            return 1
    return g
