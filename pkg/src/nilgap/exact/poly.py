"""Integer polynomials, characteristic polynomials and root-of-unity tests."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from .matrix import Matrix


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, ascending degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [0]
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        if self.coefficients == (0,):
            return -1
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def charpoly(m: Matrix) -> IntPolynomial:
    """``det(xI - m)`` for a square integer matrix (Faddeev-LeVerrier)."""
    if not m.is_square:
        raise ValueError(f"charpoly needs a square matrix, got {m.shape}")
    if not m.is_integer():
        raise ValueError("charpoly expects integer entries")
    coeffs = rational_charpoly(m)
    return IntPolynomial(tuple(int(c) for c in coeffs))


def rational_charpoly(m: Matrix) -> list[Fraction]:
    """Ascending coefficients of ``det(xI - m)`` for any square rational matrix."""
    if not m.is_square:
        raise ValueError(f"charpoly needs a square matrix, got {m.shape}")
    n = m.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = Matrix.identity(n)
    acc = Matrix.zeros(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        acc = m @ acc + ident.scale(c)
        c = -(m @ acc).trace() / k
        coeffs[n - k] = c
    return coeffs


def totient(n: int) -> int:
    result = n
    p = 2
    k = n
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


@lru_cache(maxsize=None)
def orders_up_to(d: int) -> tuple[int, ...]:
    """All k with ``totient(k) <= d``; ``totient(k) >= sqrt(k/2)`` bounds the search."""
    bound = 2 * d * d + 2
    return tuple(k for k in range(1, bound + 1) if totient(k) <= d)


@lru_cache(maxsize=None)
def root_of_unity_exponent(d: int) -> int:
    """lcm of the orders of roots of unity of degree at most ``d`` over Q."""
    if d < 1:
        raise ValueError("dimension must be positive")
    out = 1
    for k in orders_up_to(d):
        out = lcm(out, k)
    return out


ROOT_OF_UNITY_EXPONENT = {d: root_of_unity_exponent(d) for d in range(1, 13)}


def _require_unimodular(m: Matrix) -> None:
    if not m.is_square or not m.is_integer():
        raise ValueError("expected a square integer matrix")
    if abs(m.det()) != 1:
        raise ValueError("matrix is not in GL_d(Z): |det| != 1")


def all_eigenvalues_roots_of_unity(m: Matrix) -> bool:
    """Exact test that every eigenvalue of ``m`` in GL_d(Z) is a root of unity.

    With ``N = root_of_unity_exponent(d)``, all eigenvalues are roots of unity
    iff ``m**N`` is unipotent, i.e. ``(m**N - I)**d == 0``.
    """
    _require_unimodular(m)
    d = m.nrows
    u = m ** root_of_unity_exponent(d) - Matrix.identity(d)
    return (u ** d).is_zero()


def rational_factorization(coeffs: Sequence[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Monic irreducible factors over Q with multiplicities, lowest degree first."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    _, facs = poly.factor_list()
    out = []
    for f, mult in facs:
        cs = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in reversed(f.all_coeffs())]
        lead = cs[-1]
        out.append(([c / lead for c in cs], int(mult)))
    out.sort(key=lambda pm: (len(pm[0]), pm[0]))
    return out


def rational_factors(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    """Distinct monic irreducible factors over Q, lowest degree first."""
    return [p for p, _ in rational_factorization(coeffs)]


def poly_at_matrix(p: Sequence[Fraction], a: Matrix) -> Matrix:
    acc = Matrix.zeros(a.nrows)
    ident = Matrix.identity(a.nrows)
    for c in reversed(p):
        acc = a @ acc + ident.scale(c)
    return acc


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _x_power_mod(n: int, p: list[Fraction]) -> list[Fraction]:
    result = [Fraction(1)]
    base = [Fraction(0), Fraction(1)]
    while n:
        if n & 1:
            result = poly_divmod(poly_mul(result, base), p)[1]
        n >>= 1
        if n:
            base = poly_divmod(poly_mul(base, base), p)[1]
    return result


def is_cyclotomic_factor(p: Sequence[Fraction], d: int) -> bool:
    """Whether the monic irreducible ``p`` of degree <= d divides ``x^N(d) - 1``."""
    if any(c.denominator != 1 for c in p):
        return False
    r = _x_power_mod(root_of_unity_exponent(d), list(p))
    return _trim(r) == [Fraction(1)]


def unit_root_kernel(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of the sum of generalized eigenspaces of ``m`` for root-of-unity eigenvalues.

    The cyclotomic part ``q`` of the characteristic polynomial (factors
    dividing ``x^N - 1``, with multiplicity) is found by factoring, and the
    kernel of ``q(m)`` is returned. For the power-based cross-check see
    :func:`unit_root_kernel_by_power`.
    """
    d = m.nrows
    q = [Fraction(1)]
    for p, mult in rational_factorization(rational_charpoly(m)):
        if is_cyclotomic_factor(p, d):
            for _ in range(mult):
                q = poly_mul(q, p)
    if len(q) == 1:
        return []
    return poly_at_matrix(q, m).nullspace()


def unit_root_kernel_by_power(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Same space as :func:`unit_root_kernel`, as the kernel of ``(m^N - I)^d``."""
    d = m.nrows
    u = m ** root_of_unity_exponent(d) - Matrix.identity(d)
    return (u ** d).nullspace()


# -- rational polynomial helpers (ascending Fraction lists) ---------------------


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r != [0]:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = _trim(r[:-1]) if len(r) > 1 else [Fraction(0)]
    return _trim(q), _trim(r)


def poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b != [0]:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a != [0]:
        a = [c / a[-1] for c in a]
    return a


def derivative(p: list[Fraction]) -> list[Fraction]:
    return _trim([k * p[k] for k in range(1, len(p))] or [Fraction(0)])


def is_squarefree(p: list[Fraction]) -> bool:
    return len(poly_gcd(p, derivative(p))) == 1


def content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, int(c))
    return g
