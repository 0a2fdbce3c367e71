"""Ergodicity, weak mixing and mixing evidence from the dual action on Z^d∖{0}.

An invariant L^2 function expands into characters whose coefficients have
constant modulus along dual orbits, so only finite orbits can carry one.
On a finite orbit the Koopman operators act by phase permutations and an
invariant vector exists iff the phases propagate consistently, which is
decided exactly in Q/Z.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice, product

from ..exact.matrix import Matrix, dot
from ..exact.poly import root_of_unity_exponent, unit_root_kernel
from .affine import AffineGroupSpec, AffineMap, _mod1
from .virtual import _as_int, _iident, _imul, iter_word_ball


def _dual_letters(spec: AffineGroupSpec) -> list[tuple[str, Matrix, tuple[Fraction, ...]]]:
    out = []
    for label, g in spec.alphabet():
        out.append((label, g.dual_matrix(), g.translation))
    return out


def _int_vec(v) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def ball_points(d: int, bound: int):
    """Nonzero integer vectors with sup-norm <= bound, shell by shell, each shell lexicographic."""
    for r in range(1, bound + 1):
        for p in product(range(-r, r + 1), repeat=d):
            if max(abs(x) for x in p) == r:
                yield p


@dataclass
class FiniteOrbit:
    points: list[tuple[int, ...]]
    invariant_phases: list[str] | None  # phase of each coordinate in Q/Z, or None
    inconsistent_edge: dict | None = None

    def to_json(self) -> dict:
        return {
            "size": len(self.points),
            "points": [list(p) for p in self.points],
            "invariant_vector": None
            if self.invariant_phases is None
            else {
                "coefficients": "exp(2 pi i phase) / sqrt(size)",
                "phases": self.invariant_phases,
            },
            "obstruction": self.inconsistent_edge,
        }


def _int_rows(spec: AffineGroupSpec) -> list[tuple[tuple[int, ...], ...]]:
    return [tuple(tuple(r) for r in s.to_int_rows()) for _, s, _ in _dual_letters(spec)]


def _apply(rows, p):
    return tuple(sum(a * x for a, x in zip(r, p)) for r in rows)


def dual_orbit(spec: AffineGroupSpec, m: tuple[int, ...], cap: int, norm_cap: int, _rows=None):
    """BFS the orbit of ``m``.

    Returns ``(points, complete)``; ``complete`` is False when the orbit
    exceeded ``cap`` points or left the sup-norm ball of radius ``norm_cap``.
    """
    rows = _rows if _rows is not None else _int_rows(spec)
    seen = {m}
    order = [m]
    queue = deque([m])
    while queue:
        p = queue.popleft()
        for s in rows:
            q = _apply(s, p)
            if q not in seen:
                if len(seen) >= cap or max(abs(x) for x in q) > norm_cap:
                    return order, False
                seen.add(q)
                order.append(q)
                queue.append(q)
    return order, True


def invariant_vector_on_orbit(spec: AffineGroupSpec, orbit: list[tuple[int, ...]]) -> FiniteOrbit:
    """Exact search for a vector fixed by every phase-permutation operator on the orbit.

    With ``U(g) delta_m = exp(-2 pi i <s m, a>) delta_{s m}`` (``s`` the dual
    matrix), an invariant ``f`` satisfies ``f(s m) = exp(-2 pi i <s m, a>) f(m)``.
    """
    letters = _dual_letters(spec)
    phase = {orbit[0]: Fraction(0)}
    queue = deque([orbit[0]])
    while queue:
        p = queue.popleft()
        for label, s, a in letters:
            q = _int_vec(s @ p)
            want = _mod1(phase[p] - dot(q, a))
            if q not in phase:
                phase[q] = want
                queue.append(q)
            elif phase[q] != want:
                return FiniteOrbit(
                    orbit,
                    None,
                    {"from": list(p), "letter": label, "to": list(q), "phase_defect": str(_mod1(phase[q] - want))},
                )
    return FiniteOrbit(orbit, [str(phase[p]) for p in orbit])


def verify_invariant_vector(spec: AffineGroupSpec, orbit: FiniteOrbit, tol: float = 1e-12) -> bool:
    """Check ``U(g) f = f`` for every generator, exactly in Q/Z and numerically."""
    import cmath

    if orbit.invariant_phases is None:
        return False
    phase = {p: Fraction(s) for p, s in zip(orbit.points, orbit.invariant_phases)}
    pts = set(orbit.points)
    for g in spec.generators:
        s = g.dual_matrix()
        for p in orbit.points:
            q = _int_vec(s @ p)
            if q not in pts:
                return False
            if _mod1(phase[p] - dot(q, g.translation)) != phase[q]:
                return False
            z = cmath.exp(-2j * cmath.pi * float(dot(q, g.translation))) * cmath.exp(2j * cmath.pi * float(phase[p]))
            if abs(z - cmath.exp(2j * cmath.pi * float(phase[q]))) > tol:
                return False
    return True


def infinite_orbit_certificate(spec: AffineGroupSpec, ball: int = 4):
    """A word whose dual matrix has no root-of-unity eigenvalue; then no nonzero
    dual vector has a finite orbit."""
    duals = [g.dual_matrix() for g in spec.generators]
    for w, m in iter_word_ball(duals, ball):
        if w and not unit_root_kernel(m):
            return list(w), m
    return None


@dataclass
class ErgodicityReport:
    ergodic: str  # "yes" | "no" | "evidence-only"
    weakly_mixing: str
    strongly_mixing_evidence: dict | None
    finite_orbits_found: list[FiniteOrbit] = field(default_factory=list)
    norm_bound: int = 0
    notes: list[str] = field(default_factory=list)
    certificate: dict | None = None

    def to_json(self) -> dict:
        return {
            "ergodic": self.ergodic,
            "weakly_mixing": self.weakly_mixing,
            "strongly_mixing_evidence": self.strongly_mixing_evidence,
            "finite_orbits_found": [o.to_json() for o in self.finite_orbits_found],
            "norm_bound": self.norm_bound,
            "notes": self.notes,
            "infinite_orbit_certificate": self.certificate,
        }


def ergodicity_check(
    spec: AffineGroupSpec,
    norm_bound: int = 50,
    orbit_cap: int = 512,
    max_reported: int = 8,
    max_starts: int = 4000,
    mixing_ball: int = 8,
) -> ErgodicityReport:
    for i, g in enumerate(spec.generators):
        if any(not isinstance(x, Fraction) for x in g.translation):
            raise ValueError(f"generator {i}: translation must be rational")
    notes = []
    cert = infinite_orbit_certificate(spec)
    orbits: list[FiniteOrbit] = []
    if cert is not None:
        word, m = cert
        notes.append(f"dual word {word} has no root-of-unity eigenvalue; every dual orbit is infinite")
        cert_json = {"word": word, "dual_matrix": m.to_strings()}
    else:
        cert_json = None
        visited = set()
        unresolved = 0
        norm_cap = 4 * norm_bound
        rows = _int_rows(spec)
        started = 0
        for p in ball_points(spec.dim, norm_bound):
            if p in visited:
                continue
            if started >= max_starts:
                notes.append(f"stopped after {max_starts} orbit starts (budget)")
                break
            started += 1
            orb, complete = dual_orbit(spec, p, orbit_cap, norm_cap, rows)
            visited.update(orb)
            if not complete:
                unresolved += 1
                continue
            fo = invariant_vector_on_orbit(spec, orb)
            orbits.append(fo)
        if unresolved:
            notes.append(f"{unresolved} starting points had orbits beyond the enumeration caps")
    invariant = [o for o in orbits if o.invariant_phases is not None]
    if invariant:
        ergodic = "no"
    elif cert is not None:
        ergodic = "yes"
    else:
        ergodic = "evidence-only"
    if orbits:
        weakly = "no"
    elif cert is not None:
        weakly = "yes"
    else:
        weakly = "evidence-only"
    # report invariant witnesses first, then a few obstructed orbits
    reported = (invariant + [o for o in orbits if o.invariant_phases is None])[:max_reported]
    mixing = mixing_evidence(spec, ball=mixing_ball, norm_bound=min(norm_bound, 3)) if spec.is_automorphism_group else None
    if mixing is None:
        notes.append("mixing statistics apply to automorphism groups only")
    return ErgodicityReport(ergodic, weakly, mixing, reported, norm_bound, notes, cert_json)


def _int_ball(duals: list[Matrix], radius: int) -> tuple[list, list[int]]:
    """Distinct elements of the word ball as integer row tuples, and the ball size per radius."""
    letters = []
    for m in duals:
        letters.append(_as_int(m))
        letters.append(_as_int(m.adjugate_inverse()))
    ident = _iident(duals[0].nrows)
    seen = {ident}
    frontier = [ident]
    sizes = [1]
    for _ in range(radius):
        nxt = []
        for m in frontier:
            for g in letters:
                h = _imul(m, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(seen))
    return list(seen), sizes


def mixing_evidence(spec: AffineGroupSpec, ball: int = 8, norm_bound: int = 3, samples: int = 16) -> dict:
    """Fiber counts ``#{γ in ball : s_γ m = m'}`` over sampled dual pairs.

    A finite group (the ball closes up) or an infinite-order word fixing a
    dual vector certifies that the action is not mixing.
    """
    if not spec.is_automorphism_group:
        raise ValueError("mixing evidence needs an automorphism group (all translations zero)")
    d = spec.dim
    duals = [g.dual_matrix() for g in spec.generators]
    elements, sizes = _int_ball(duals, ball)
    closed = len(sizes) > 1 and sizes[-1] == sizes[-2]
    n_exp = root_of_unity_exponent(d)
    ident = Matrix.identity(d)
    stabilizer = None
    for w, m in iter_word_ball(duals, min(ball, 4)):
        if not w or m ** n_exp == ident:
            continue
        fixed = (m - ident).nullspace()
        if fixed:
            from ..exact.lattice import primitive

            stabilizer = {"word": list(w), "fixed_dual_vector": list(primitive(fixed[0]))}
            break
    pts = list(islice(ball_points(d, norm_bound), samples))
    fibers = []
    for p in pts:
        counts: dict = {}
        for m in elements:
            q = _apply(m, p)
            counts[q] = counts.get(q, 0) + 1
        fibers.append(max(counts.values()))
    if closed:
        verdict, cert = "no", {"method": "finite-group", "order": sizes[-1]}
    elif stabilizer is not None:
        verdict, cert = "no", {"method": "infinite-stabilizer", **stabilizer}
    else:
        verdict, cert = "evidence-only", None
    return {
        "strongly_mixing": verdict,
        "certificate": cert,
        "ball": ball,
        "ball_sizes": sizes,
        "sampled_points": len(pts),
        "max_fiber": max(fibers) if fibers else 0,
        "fibers": fibers,
    }
