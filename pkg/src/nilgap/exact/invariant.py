"""Invariant subspaces of finitely generated matrix groups over Q.

Proper invariant subspaces are found by spinning kernel vectors of ``p(a)``
for random elements ``a`` of the enveloping algebra and rational irreducible
factors ``p`` of their characteristic polynomials (the rational meataxe).
Irreducibility is certified either by Burnside (the algebra is all of
``M_d(Q)``) or by Norton's criterion, which also covers modules whose
endomorphism ring is a proper field extension of Q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .matrix import Matrix, vec
from .poly import poly_at_matrix, rational_charpoly, rational_factors
from .subspace import Subspace, adapted_basis, coordinates


class _EchelonSpan:
    """Incrementally maintained span; ``add`` returns whether the vector was new."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[tuple[int, list[Fraction]]] = []

    def reduce(self, v) -> list[Fraction]:
        v = list(v)
        for p, r in self.rows:
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, r)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x != 0), None)
        if p is None:
            return False
        c = v[p]
        self.rows.append((p, [x / c for x in v]))
        return True

    def __len__(self) -> int:
        return len(self.rows)


def _check_gens(gens: Sequence[Matrix]) -> int:
    if not gens:
        raise ValueError("at least one generator is required")
    d = gens[0].nrows
    for i, g in enumerate(gens):
        if g.shape != (d, d):
            raise ValueError(f"generator {i} has shape {g.shape}, expected {(d, d)}")
    return d


def spin(seed: Sequence[Sequence], gens: Sequence[Matrix]) -> Subspace:
    """Smallest subspace containing ``seed`` and invariant under every generator."""
    d = _check_gens(gens)
    span = _EchelonSpan(d)
    frontier = []
    for v in seed:
        v = vec(v)
        if len(v) != d:
            raise ValueError(f"seed vector has length {len(v)}, expected {d}")
        if span.add(v):
            frontier.append(v)
    while frontier and len(span) < d:
        nxt = []
        for v in frontier:
            for g in gens:
                w = g @ v
                if span.add(w):
                    nxt.append(w)
        frontier = nxt
    return Subspace(d, [r for _, r in span.rows])


def largest_invariant_inside(w: Subspace, gens: Sequence[Matrix]) -> Subspace:
    """Largest ``U`` inside ``w`` with ``g(U) ⊆ U`` for all generators."""
    d = _check_gens(gens)
    if w.ambient_dim != d:
        raise ValueError(f"subspace lives in dimension {w.ambient_dim}, generators in {d}")
    u = w
    while not u.is_zero():
        nxt = u
        for g in gens:
            nxt = nxt.intersect(u.preimage(g))
        if nxt.dim == u.dim:
            return u
        u = nxt
    return u


def restriction(m: Matrix, w: Subspace) -> Matrix:
    """Matrix of ``m`` on ``w``; integral (in the lattice basis) when ``m`` is."""
    if m.shape != (w.ambient_dim, w.ambient_dim):
        raise ValueError("dimension mismatch")
    if w.is_zero():
        raise ValueError("restriction to the zero subspace")
    if not w.is_invariant(m):
        raise ValueError("subspace is not invariant under the matrix")
    basis = w.integral_basis() if m.is_integer() else w.basis
    cols = [coordinates(basis, m @ b) for b in basis]
    return Matrix.from_columns(cols)


def quotient_action(m: Matrix, w: Subspace) -> Matrix:
    """Integral matrix of ``m`` on ``Z^d / (w ∩ Z^d)`` in an adapted basis."""
    if not w.is_invariant(m):
        raise ValueError("subspace is not invariant under the matrix")
    p, p_inv = adapted_basis(w)
    conj = p_inv @ m @ p
    k = w.dim
    d = w.ambient_dim
    return Matrix([[conj[i, j] for j in range(k, d)] for i in range(k, d)])


def lift_from(w: Subspace, u: Subspace, integral: bool = True) -> Subspace:
    """Map a subspace written in coordinates of ``w`` back to the ambient space.

    Coordinates refer to the lattice basis when ``integral`` (matching
    :func:`restriction` for integer matrices), else to the echelon basis.
    """
    basis = w.integral_basis() if integral else w.basis
    out = []
    for c in u.basis:
        out.append(tuple(sum((ci * b[j] for ci, b in zip(c, basis)), Fraction(0)) for j in range(w.ambient_dim)))
    return Subspace(w.ambient_dim, out)


# -- certificates --------------------------------------------------------------


@dataclass(frozen=True)
class IrreducibilityCertificate:
    """Why a module over Q is irreducible.

    ``method`` is ``"dimension-one"``, ``"burnside"`` (``words`` lists ``d^2``
    generator words whose matrices span ``M_d(Q)``) or ``"norton"``
    (``element`` is an algebra element, ``factor`` an irreducible factor of its
    characteristic polynomial with ``dim ker factor(element) = deg factor``, and
    ``vector``/``dual_vector`` spin to the whole space and its dual).
    """

    method: str
    dim: int
    words: tuple = ()
    element: Matrix | None = None
    factor: tuple = ()
    vector: tuple = ()
    dual_vector: tuple = ()

    def to_json(self) -> dict:
        out = {"method": self.method, "dim": self.dim}
        if self.method == "burnside":
            out["words"] = [list(w) for w in self.words]
        if self.method == "norton":
            out["element"] = self.element.to_strings()
            out["factor"] = [str(c) for c in self.factor]
            out["vector"] = [str(c) for c in self.vector]
            out["dual_vector"] = [str(c) for c in self.dual_vector]
        return out


def enveloping_algebra(gens: Sequence[Matrix], limit: int | None = None) -> tuple[list[Matrix], list[tuple[int, ...]]]:
    """Basis of the Q-algebra generated by ``gens`` as words (generator index tuples).

    Closure under left multiplication by generators suffices: the inverses lie
    in the algebra by Cayley-Hamilton.
    """
    d = _check_gens(gens)
    limit = d * d if limit is None else limit
    span = _EchelonSpan(d * d)
    ident = Matrix.identity(d)
    span.add([x for r in ident.rows for x in r])
    basis = [ident]
    words = [()]
    head = 0
    while head < len(basis) and len(basis) < limit:
        m, w = basis[head], words[head]
        head += 1
        for i, g in enumerate(gens):
            p = g @ m
            if span.add([x for r in p.rows for x in r]):
                basis.append(p)
                words.append((i,) + w)
                if len(basis) >= limit:
                    break
    return basis, words


def _verify_burnside(gens: Sequence[Matrix], words) -> bool:
    d = gens[0].nrows
    span = _EchelonSpan(d * d)
    for w in words:
        m = Matrix.identity(d)
        for i in reversed(w):
            m = gens[i] @ m
        span.add([x for r in m.rows for x in r])
    return len(span) == d * d


@dataclass
class _Probe:
    submodules: list[Subspace] = field(default_factory=list)
    certificate: IrreducibilityCertificate | None = None


def _probe(gens: Sequence[Matrix], effort: int, rng: random.Random, collect: bool) -> _Probe:
    d = _check_gens(gens)
    out = _Probe()
    if d == 1:
        out.certificate = IrreducibilityCertificate("dimension-one", 1)
        return out
    basis, words = enveloping_algebra(gens)
    if len(basis) == d * d:
        out.certificate = IrreducibilityCertificate("burnside", d, words=tuple(words))
        return out
    transposed = [g.T for g in gens]
    seen = set()
    for _ in range(effort):
        coeffs = [rng.randint(-3, 3) for _ in basis]
        if not any(coeffs):
            coeffs[-1] = 1
        a = Matrix.zeros(d)
        for c, b in zip(coeffs, basis):
            if c:
                a = a + b.scale(c)
        for p in rational_factors(rational_charpoly(a)):
            pa = poly_at_matrix(p, a)
            ker = pa.nullspace()
            if not ker:
                continue
            found = False
            for v in ker:
                s = spin([v], gens)
                if not s.is_full():
                    found = True
                    if s not in seen:
                        seen.add(s)
                        out.submodules.append(s)
                    break
            kt = pa.T.nullspace()
            st = spin([kt[0]], transposed)
            if not st.is_full():
                found = True
                s = st.complement()
                if s not in seen:
                    seen.add(s)
                    out.submodules.append(s)
            if not found and len(ker) == len(p) - 1:
                out.certificate = IrreducibilityCertificate(
                    "norton", d, element=a, factor=tuple(p), vector=ker[0], dual_vector=kt[0]
                )
                out.submodules = []
                return out
            if out.submodules and not collect:
                return out
    return out


def verify_certificate(gens: Sequence[Matrix], cert: IrreducibilityCertificate) -> bool:
    """Independent re-check of an irreducibility certificate."""
    d = _check_gens(gens)
    if cert.dim != d:
        return False
    if cert.method == "dimension-one":
        return d == 1
    if cert.method == "burnside":
        return _verify_burnside(gens, cert.words)
    if cert.method == "norton":
        basis, _ = enveloping_algebra(gens)
        flat = _EchelonSpan(d * d)
        for b in basis:
            flat.add([x for r in b.rows for x in r])
        if any(flat.reduce([x for r in cert.element.rows for x in r])):
            return False
        p = list(cert.factor)
        if rational_factors(p) != [p]:
            return False
        pa = poly_at_matrix(p, cert.element)
        if len(pa.nullspace()) != len(p) - 1:
            return False
        if any(pa @ cert.vector) or any(pa.T @ cert.dual_vector):
            return False
        return spin([cert.vector], gens).is_full() and spin([cert.dual_vector], [g.T for g in gens]).is_full()
    return False


# -- public searches -------------------------------------------------------------


@dataclass
class InvariantSearch:
    """Result of :func:`minimal_invariant_subspaces`.

    ``flag`` is ``"exhausted"`` when the whole space is certified irreducible
    (so the empty list is complete), ``"minimal"`` when every returned subspace
    is certified irreducible, and ``"partial"`` when the budget ran out before
    some certificate was found.
    """

    subspaces: list[Subspace]
    flag: str
    certificate: IrreducibilityCertificate | None = None
    sub_certificates: list[IrreducibilityCertificate | None] = field(default_factory=list)


def _restricted(gens: Sequence[Matrix], w: Subspace) -> list[Matrix]:
    return [restriction(g, w) for g in gens]


def _minimize(gens, w: Subspace, effort: int, rng: random.Random):
    """Shrink ``w`` to an irreducible invariant subspace, returning it with its certificate."""
    while True:
        sub = _restricted(gens, w)
        probe = _probe(sub, effort, rng, collect=False)
        if probe.certificate is not None:
            return w, probe.certificate
        if not probe.submodules:
            return w, None
        integral = all(g.is_integer() for g in gens)
        w = lift_from(w, probe.submodules[0], integral).saturated()


def minimal_invariant_subspaces(gens: Sequence[Matrix], effort: int = 16, seed: int = 0) -> InvariantSearch:
    """Proper nonzero invariant subspaces, each irreducible when certified.

    Sorted by dimension, then by echelon basis.
    """
    _check_gens(gens)
    if effort <= 0:
        raise ValueError("effort budget must be positive")
    rng = random.Random(seed)
    probe = _probe(gens, effort, rng, collect=True)
    if probe.certificate is not None:
        return InvariantSearch([], "exhausted", certificate=probe.certificate)
    found = {}
    for s in probe.submodules:
        m, cert = _minimize(gens, s.saturated(), effort, rng)
        found.setdefault(m, cert)
    ordered = sorted(found, key=lambda s: (s.dim, s.basis))
    certs = [found[s] for s in ordered]
    if not ordered:
        return InvariantSearch([], "partial")
    flag = "minimal" if all(c is not None for c in certs) else "partial"
    return InvariantSearch(ordered, flag, sub_certificates=certs)


@dataclass
class CompositionFactor:
    """An irreducible subquotient with integral generator matrices."""

    matrices: list[Matrix]
    certificate: IrreducibilityCertificate | None

    @property
    def dim(self) -> int:
        return self.matrices[0].nrows


def composition_factors(gens: Sequence[Matrix], effort: int = 16, seed: int = 0) -> tuple[list[CompositionFactor], bool]:
    """Factors of a composition series of ``Z^d`` under integer ``gens``.

    Returns ``(factors, complete)``; when the budget runs out a factor is left
    with ``certificate=None`` and ``complete`` is False.
    """
    _check_gens(gens)
    if effort <= 0:
        raise ValueError("effort budget must be positive")
    rng = random.Random(seed)
    out: list[CompositionFactor] = []

    def walk(ms: list[Matrix]) -> None:
        probe = _probe(ms, effort, rng, collect=False)
        if probe.certificate is not None or not probe.submodules:
            out.append(CompositionFactor(ms, probe.certificate))
            return
        w = probe.submodules[0].saturated()
        p, p_inv = adapted_basis(w)
        k, d = w.dim, w.ambient_dim
        conj = [p_inv @ g @ p for g in ms]
        walk([Matrix([[c[i, j] for j in range(k)] for i in range(k)]) for c in conj])
        walk([Matrix([[c[i, j] for j in range(k, d)] for i in range(k, d)]) for c in conj])

    walk(list(gens))
    return out, all(f.certificate is not None for f in out)
