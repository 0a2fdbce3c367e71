"""Certificates for (non-)amenability of finitely generated subgroups of GL_d(Z).

Positive side: a group is virtually abelian when the kernel of reduction
mod n (finite index, torsion-free for n >= 3) has pairwise commuting Schreier
generators.  Negative side: an exact ping-pong certificate on projective space
exhibits a free subgroup of rank two.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Sequence

import numpy as np

from ..exact.invariant import composition_factors
from ..exact.matrix import Matrix, dot


def generators_commute(mats: Sequence[Matrix]) -> bool:
    return all(a @ b == b @ a for a, b in combinations(mats, 2))


# -- congruence kernels ----------------------------------------------------------


IntMat = tuple[tuple[int, ...], ...]


def _as_int(m: Matrix) -> IntMat:
    return tuple(tuple(r) for r in m.to_int_rows())


def _imul(a: IntMat, b: IntMat, n: int | None = None) -> IntMat:
    cols = list(zip(*b))
    if n is None:
        return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a)
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) % n for c in cols) for r in a)


def _iident(d: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def congruence_image(mats: Sequence[Matrix], n: int, cap: int) -> dict | None:
    """BFS of the image in GL_d(Z/n).

    Returns ``key -> (rep, rep_inverse)`` with integer representatives, or
    None once more than ``cap`` residues are seen.
    """
    d = mats[0].nrows
    gens = [(_as_int(g), _as_int(g.adjugate_inverse())) for g in mats]
    ident = _iident(d)
    reps = {ident: (ident, ident)}
    queue = deque([ident])
    while queue:
        k = queue.popleft()
        rep, rep_inv = reps[k]
        for g, g_inv in gens:
            h = _imul(k, g, n)
            if h not in reps:
                if len(reps) >= cap:
                    return None
                reps[h] = (_imul(rep, g), _imul(g_inv, rep_inv))
                queue.append(h)
    return reps


def congruence_kernel_generators(mats: Sequence[Matrix], n: int, cap: int) -> list[Matrix] | None:
    """Schreier generators of ``H ∩ ker(GL_d(Z) -> GL_d(Z/n))``."""
    reps = congruence_image(mats, n, cap)
    if reps is None:
        return None
    return [Matrix(s) for s in _schreier(mats, reps, n)]


def _schreier(mats, reps, n):
    d = mats[0].nrows
    ident = _iident(d)
    out = []
    seen = set()
    for k, (rep, _) in reps.items():
        for g in mats:
            gi = _as_int(g)
            tg = _imul(rep, gi)
            s = _imul(tg, reps[_imul(k, gi, n)][1])
            if s != ident and s not in seen:
                seen.add(s)
                out.append(s)
    return out


def _int_commute(ms) -> bool:
    return all(_imul(a, b) == _imul(b, a) for a, b in combinations(ms, 2))


@dataclass(frozen=True)
class CongruenceCertificate:
    """The kernel mod ``modulus`` has index ``index`` and abelian generators."""

    modulus: int
    index: int
    kernel_generators: tuple[Matrix, ...]

    def to_json(self) -> dict:
        return {
            "method": "congruence-kernel",
            "modulus": self.modulus,
            "index": self.index,
            "kernel_generators": [m.to_strings() for m in self.kernel_generators],
        }


def virtually_abelian_by_congruence(
    mats: Sequence[Matrix], moduli: Sequence[int] = (3, 4, 5), cap: int = 3000
) -> CongruenceCertificate | None:
    for n in moduli:
        reps = congruence_image(mats, n, cap)
        if reps is None:
            continue
        gens = _schreier(mats, reps, n)
        if _int_commute(gens):
            return CongruenceCertificate(n, len(reps), tuple(Matrix(g) for g in gens))
    return None


# -- exact ping-pong -------------------------------------------------------------


def sqrt_upper(q: Fraction) -> Fraction:
    """Rational upper bound on sqrt(q) with about 64 significant bits."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0)
    shift = max(0, 128 - (q.numerator.bit_length() - q.denominator.bit_length()))
    shift += shift % 2
    scaled = (q.numerator << shift) // q.denominator + 1
    return Fraction(isqrt(scaled) + 1, 1 << (shift // 2))


def _norm2(v) -> Fraction:
    return dot(v, v)


@dataclass(frozen=True)
class Cone:
    """Projective neighbourhood ``{[v] : tan angle(v, center) <= slope}``."""

    center: tuple[Fraction, ...]
    slope: Fraction

    def to_json(self) -> dict:
        return {"center": [str(x) for x in self.center], "slope": str(self.slope)}


def cones_disjoint(c1: Cone, c2: Cone) -> bool:
    t1, t2 = c1.slope, c2.slope
    if t1 * t2 >= 1:
        return False
    ip = dot(c1.center, c2.center)
    if ip == 0:
        return True
    n1, n2 = _norm2(c1.center), _norm2(c2.center)
    tan2 = (n1 * n2 - ip * ip) / (ip * ip)
    t = (t1 + t2) / (1 - t1 * t2)
    return tan2 > t * t


def maps_into(m: Matrix, src: Cone, dst: Cone) -> bool:
    """Exact sufficient check that ``m`` sends the cone ``src`` into ``dst``.

    Points of ``src`` are ``t(u + w)`` with ``w ⟂ u`` and ``|w| <= slope |u|``.
    """
    u, u2 = src.center, dst.center
    n2 = _norm2(u2)
    mu = m @ u
    gamma = abs(dot(u2, mu))
    if gamma == 0:
        return False
    proj = Matrix.identity(m.nrows) - Matrix([[a * b / n2 for b in u2] for a in u2])
    pm = proj @ m
    alpha = sqrt_upper(_norm2(pm @ u))
    beta = sqrt_upper(sum((x * x for r in pm.rows for x in r), Fraction(0)))
    delta = sqrt_upper(_norm2(m.T @ u2))
    eps = src.slope * sqrt_upper(_norm2(u))
    denom = gamma - delta * eps
    if denom <= 0:
        return False
    lhs = (alpha + beta * eps) * sqrt_upper(n2)
    return lhs <= dst.slope * denom


@dataclass(frozen=True)
class PingPongCertificate:
    """``A = a^power`` and ``B = b^power`` play ping-pong on four cones.

    ``A^{±1}`` map ``X_b ∪ cone_a^{±}`` into ``cone_a^{±}``, likewise for ``B``,
    and the cones of ``a`` are disjoint from those of ``b``; hence
    ``⟨A, B⟩`` is free of rank two.
    """

    word_a: tuple
    word_b: tuple
    a: Matrix
    b: Matrix
    power: int
    cones: tuple[Cone, Cone, Cone, Cone]  # a+, a-, b+, b-

    def to_json(self) -> dict:
        return {
            "method": "ping-pong",
            "word_a": list(self.word_a),
            "word_b": list(self.word_b),
            "power": self.power,
            "cones": {k: c.to_json() for k, c in zip(("a+", "a-", "b+", "b-"), self.cones)},
        }


def verify_ping_pong(cert: PingPongCertificate) -> bool:
    a = cert.a ** cert.power
    b = cert.b ** cert.power
    ai, bi = a.inverse(), b.inverse()
    ap, am, bp, bm = cert.cones
    if not all(cones_disjoint(x, y) for x in (ap, am) for y in (bp, bm)):
        return False
    checks = [
        (a, (bp, bm, ap), ap),
        (ai, (bp, bm, am), am),
        (b, (ap, am, bp), bp),
        (bi, (ap, am, bm), bm),
    ]
    return all(maps_into(m, s, dst) for m, srcs, dst in checks for s in srcs)


def _rationalize(v: np.ndarray, denominator: int = 1 << 20) -> tuple[Fraction, ...]:
    v = np.real(v)
    v = v / np.max(np.abs(v))
    return tuple(Fraction(float(x)).limit_denominator(denominator) for x in v)


def _proximal_direction(m: np.ndarray, ratio: float = 1.05):
    vals, vecs = np.linalg.eig(m)
    order = np.argsort(-np.abs(vals))
    top, second = vals[order[0]], vals[order[1]]
    if abs(top.imag) > 1e-9 or abs(top) < ratio * abs(second):
        return None
    v = vecs[:, order[0]]
    if np.max(np.abs(v.imag)) > 1e-9 * np.max(np.abs(v.real)):
        return None
    return v.real


def iter_word_ball(mats: Sequence[Matrix], radius: int):
    """Yield ``(word, matrix)`` for distinct elements, shortest words first.

    Letters are ``±(i+1)`` for generator ``i`` and its inverse; the identity
    comes first with the empty word.
    """
    d = mats[0].nrows
    letters = []
    for i, g in enumerate(mats):
        letters.append((i + 1, g))
        letters.append((-(i + 1), g.adjugate_inverse()))
    ident = Matrix.identity(d)
    seen = {ident}
    yield (), ident
    frontier = [((), ident)]
    for _ in range(radius):
        nxt = []
        for w, m in frontier:
            for s, g in letters:
                if w and w[-1] == -s:
                    continue
                h = m @ g
                if h not in seen:
                    seen.add(h)
                    nxt.append((w + (s,), h))
                    yield w + (s,), h
        frontier = nxt


def word_ball(mats: Sequence[Matrix], radius: int) -> list[tuple[tuple, Matrix]]:
    return list(iter_word_ball(mats, radius))


def find_ping_pong(
    mats: Sequence[Matrix],
    radius: int = 6,
    max_candidates: int = 16,
    powers: Sequence[int] = (1, 2, 4, 8, 16, 32),
    slopes: Sequence[Fraction] = (Fraction(1, 4), Fraction(1, 16), Fraction(1, 64)),
) -> PingPongCertificate | None:
    d = mats[0].nrows
    if d < 2:
        return None
    candidates = []
    for w, m in iter_word_ball(mats, radius):
        if not w:
            continue
        f = m.to_float()
        plus = _proximal_direction(f)
        if plus is None:
            continue
        minus = _proximal_direction(np.linalg.inv(f))
        if minus is None:
            continue
        candidates.append((w, m, plus, minus))
        if len(candidates) >= max_candidates:
            break

    def angle_ok(x, y):
        c = abs(np.dot(x, y)) / (np.linalg.norm(x) * np.linalg.norm(y))
        return c < 0.999

    for (wa, ma, ap, am), (wb, mb, bp, bm) in combinations(candidates, 2):
        if not all(angle_ok(x, y) for x in (ap, am) for y in (bp, bm)):
            continue
        centers = [_rationalize(x) for x in (ap, am, bp, bm)]
        for power in powers:
            for slope in slopes:
                cones = tuple(Cone(c, slope) for c in centers)
                cert = PingPongCertificate(wa, wb, ma, mb, power, cones)
                if verify_ping_pong(cert):
                    return cert
    return None


# -- verdict helpers ---------------------------------------------------------------


@dataclass(frozen=True)
class VirtualAbelianResult:
    answer: str  # "yes" | "no" | "unknown"
    certificate: object | None = None

    def to_json(self) -> dict:
        out = {"answer": self.answer}
        if self.certificate is None:
            out["certificate"] = None
        elif isinstance(self.certificate, str):
            out["certificate"] = {"method": self.certificate}
        else:
            out["certificate"] = self.certificate.to_json()
        return out


def virtually_abelian(gens: Sequence[Matrix], ball: int = 6) -> VirtualAbelianResult:
    """Decide virtual abelianness of ⟨gens⟩ ⊂ GL_d(Z) when a certificate is found."""
    if ball < 1:
        raise ValueError("ball radius must be at least 1")
    if generators_commute(gens):
        return VirtualAbelianResult("yes", "abelian")
    cert = virtually_abelian_by_congruence(gens)
    if cert is not None:
        return VirtualAbelianResult("yes", cert)
    pp = find_ping_pong(gens, radius=ball)
    if pp is not None:
        return VirtualAbelianResult("no", pp)
    return VirtualAbelianResult("unknown")


@dataclass
class FactorAmenability:
    dim: int
    matrices: list[Matrix]
    irreducible: object | None
    status: str  # "amenable" | "non-amenable" | "unknown"
    certificate: object | None

    def to_json(self) -> dict:
        cert = self.certificate
        if isinstance(cert, str):
            cert = {"method": cert}
        elif cert is not None:
            cert = cert.to_json()
        return {
            "dim": self.dim,
            "status": self.status,
            "irreducibility": None if self.irreducible is None else self.irreducible.to_json(),
            "certificate": cert,
        }


def classify_factors(mats: Sequence[Matrix], effort: int = 16, seed: int = 0, ball: int = 6):
    """Composition factors of ⟨mats⟩ with an amenability status for each image.

    The group is amenable iff every factor image is: the kernel of the action
    on the associated graded module is unipotent.
    """
    factors, complete = composition_factors(mats, effort=effort, seed=seed)
    out = []
    for f in factors:
        ms = f.matrices
        if f.dim == 1 or generators_commute(ms):
            out.append(FactorAmenability(f.dim, ms, f.certificate, "amenable", "abelian"))
            continue
        cong = virtually_abelian_by_congruence(ms)
        if cong is not None:
            out.append(FactorAmenability(f.dim, ms, f.certificate, "amenable", cong))
            continue
        pp = find_ping_pong(ms, radius=ball)
        if pp is not None:
            out.append(FactorAmenability(f.dim, ms, f.certificate, "non-amenable", pp))
        else:
            out.append(FactorAmenability(f.dim, ms, f.certificate, "unknown", None))
    return out, complete
