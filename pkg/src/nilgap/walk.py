"""Truncated Koopman random-walk operators on the nonzero characters of the torus.

For ``g(x) = γx + a`` the Koopman operator moves characters along the dual
action: ``U(g) δ_m = exp(-2πi <σm, a>) δ_{σm}`` with ``σ = (γ^-1)^T``.
Averaging over a measure and compressing to an ℓ∞ ball gives a sparse
matrix whose norm is a lower bound for ``||U⁰(μ)||``; dropping the mass that
leaves the ball keeps it a contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .exact.matrix import to_fraction
from .torus.affine import AffineGroupSpec, AffineMap

Word = tuple[int, ...]


def _invert_word(w: Word) -> Word:
    return tuple(-s for s in reversed(w))


@dataclass(frozen=True)
class Measure:
    """Finitely supported probability measure on words in the signed alphabet.

    Letter ``+i`` is generator ``i`` (1-based) and ``-i`` its inverse; the
    empty word is the identity.
    """

    atoms: tuple[tuple[Word, Fraction], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("measure has no atoms")
        merged: dict[Word, Fraction] = {}
        for w, p in self.atoms:
            w = tuple(int(s) for s in w)
            if any(s == 0 for s in w):
                raise ValueError(f"word {w}: letters are nonzero signed generator indices")
            p = to_fraction(p)
            if p <= 0:
                raise ValueError(f"word {w}: weights must be positive")
            merged[w] = merged.get(w, Fraction(0)) + p
        if sum(merged.values()) != 1:
            raise ValueError(f"weights sum to {sum(merged.values())}, not 1")
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @classmethod
    def from_spec(cls, spec: AffineGroupSpec) -> "Measure":
        """The spec's weights on ``g1, g1^-1, g2, ...`` (uniform when absent)."""
        atoms = []
        for k, p in enumerate(spec.alphabet_weights()):
            if p > 0:
                i = k // 2 + 1
                atoms.append(((i,) if k % 2 == 0 else (-i,), p))
        return cls(tuple(atoms))

    @classmethod
    def uniform(cls, words: Sequence[Sequence[int]]) -> "Measure":
        p = Fraction(1, len(words))
        return cls(tuple((tuple(w), p) for w in words))

    @classmethod
    def delta(cls, word: Sequence[int] = ()) -> "Measure":
        return cls(((tuple(word), Fraction(1)),))

    @property
    def symmetric(self) -> bool:
        table = dict(self.atoms)
        return all(table.get(_invert_word(w)) == p for w, p in self.atoms)

    def max_letter(self) -> int:
        return max((abs(s) for w, _ in self.atoms for s in w), default=0)

    def to_json(self) -> dict:
        return {
            "atoms": [{"word": list(w), "weight": str(p)} for w, p in self.atoms],
            "symmetric": self.symmetric,
        }


def word_map(spec: AffineGroupSpec, word: Word) -> AffineMap:
    """The affine map ``g_{s1} ∘ g_{s2} ∘ ... ∘ g_{sk}``."""
    out = AffineMap.identity(spec.dim)
    for s in word:
        if abs(s) > len(spec.generators):
            raise ValueError(f"letter {s} refers to a missing generator")
        g = spec.generators[abs(s) - 1]
        out = out.compose(g if s > 0 else g.inverse())
    return out


def _roots_of_unity(den: int) -> np.ndarray:
    """``exp(-2πi k/den)`` for ``k < den``, exact at multiples of a quarter turn."""
    k = np.arange(den)
    out = np.exp(-2j * np.pi * k / den)
    for num, val in ((0, 1), (1, -1j), (2, -1), (3, 1j)):
        hit = (4 * k) == num * den
        out[hit] = val
    return out


def ball_array(d: int, radius: int) -> np.ndarray:
    """Nonzero points of ``{-R..R}^d`` in lexicographic order, one per row."""
    axes = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return grid[np.any(grid != 0, axis=1)]


def _linear_index(points: np.ndarray, radius: int) -> np.ndarray:
    side = 2 * radius + 1
    lin = np.zeros(points.shape[0], dtype=np.int64)
    for j in range(points.shape[1]):
        lin = lin * side + (points[:, j] + radius)
    return lin


@dataclass
class WalkOperator:
    radius: int
    points: np.ndarray  # row i of the matrix is the character points[i]
    matrix: sp.csr_matrix
    measure: Measure
    translations_present: bool

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def index_of(self, m: Sequence[int]) -> int:
        m = np.asarray(m, dtype=np.int64).reshape(1, -1)
        if np.max(np.abs(m)) > self.radius or not np.any(m):
            raise KeyError(f"{m.ravel().tolist()} is not a nonzero point of the ball")
        lin = _linear_index(m, self.radius)[0]
        zero = (self.points.shape[0]) // 2  # the origin sits in the middle of the grid
        return int(lin if lin < zero else lin - 1)


def build_operator(spec: AffineGroupSpec, mu: Measure, radius: int) -> WalkOperator:
    """Compression of ``Σ μ(w) U(g_w)`` to the nonzero points of the sup-norm ball."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if mu.max_letter() > len(spec.generators):
        raise ValueError(f"measure uses letter {mu.max_letter()} but the spec has {len(spec.generators)} generators")
    d = spec.dim
    pts = ball_array(d, radius)
    n = pts.shape[0]
    side = 2 * radius + 1
    lookup = np.full(side**d, -1, dtype=np.int64)
    lookup[_linear_index(pts, radius)] = np.arange(n)
    rows, cols, vals = [], [], []
    translated = False
    for word, p in mu.atoms:
        g = word_map(spec, word)
        sigma = np.array(g.dual_matrix().to_int_rows(), dtype=object)
        if int(np.max(np.abs(sigma))) * radius * d >= 2**62:
            raise OverflowError(f"word {list(word)}: dual entries too large for 64-bit arithmetic")
        q = pts @ sigma.astype(np.int64).T
        inside = np.all(np.abs(q) <= radius, axis=1)
        src = np.nonzero(inside)[0]
        dst = lookup[_linear_index(q[inside], radius)]
        if g.is_automorphism:
            phase = np.ones(src.size, dtype=complex)
        else:
            translated = True
            den = math.lcm(*(x.denominator for x in g.translation))
            num = np.array([int(x * den) for x in g.translation], dtype=np.int64)
            k = (q[inside] @ num) % den
            phase = _roots_of_unity(den)[k]
        rows.append(dst)
        cols.append(src)
        vals.append(float(p) * phase)
    a = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n), dtype=complex
    ).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    return WalkOperator(radius, pts, a, mu, translated)


@dataclass
class NormEstimate:
    value: float
    radius: int
    iterations: int
    residual: float
    converged: bool
    trend: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "radius": self.radius,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "trend": self.trend,
        }


def _start_vector(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def power_norm(
    apply, apply_adj, n: int, iterations: int, tol: float, seed: int, start: np.ndarray | None = None
) -> tuple[float, int, float, bool]:
    """Power iteration on ``A*A``; returns ``(sqrt(λ), steps, residual, converged)``.

    Each ``sqrt(λ) = ||Av||`` with ``||v|| = 1`` is a lower bound for ``||A||``;
    the residual is ``||A*Av − λv||``.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    v = _start_vector(n, seed) if start is None else np.asarray(start, dtype=complex) / np.linalg.norm(start)
    lam, res = 0.0, math.inf
    steps = 0
    for steps in range(1, iterations + 1):
        w = apply(v)
        lam = float(np.vdot(w, w).real)
        u = apply_adj(w)
        res = float(np.linalg.norm(u - lam * v))
        if res <= tol:
            return math.sqrt(lam), steps, res, True
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0, steps, 0.0, True
        v = u / nu
    return math.sqrt(lam), steps, res, False


def estimate_norm(
    op: WalkOperator, iterations: int = 500, tol: float = 1e-10, seed: int = 0, start: np.ndarray | None = None
) -> NormEstimate:
    a = op.matrix
    ah = a.conj().T.tocsr()
    value, steps, res, ok = power_norm(a.dot, ah.dot, op.size, iterations, tol, seed, start)
    return NormEstimate(value, op.radius, steps, res, ok)


def norm_trend(
    spec: AffineGroupSpec,
    mu: Measure,
    radii: Sequence[int],
    iterations: int = 500,
    tol: float = 1e-10,
    seed: int = 0,
) -> list[NormEstimate]:
    """Estimates at each radius; every record carries the values so far in ``trend``."""
    out, values = [], []
    for r in radii:
        est = estimate_norm(build_operator(spec, mu, r), iterations, tol, seed)
        values.append(est.value)
        est.trend = list(values)
        out.append(est)
    return out


def _dense_norm(a: sp.spmatrix) -> float:
    return float(np.linalg.norm(a.toarray(), 2))


def _nonnegative_upper_bound(a: sp.csr_matrix, iterations: int, seed: int) -> float:
    """Collatz–Wielandt bound ``ρ(AᵀA) <= max_i (AᵀAx)_i / x_i`` for a positive ``x``."""
    b = abs(a)
    bt = b.T.tocsr()
    rng = np.random.default_rng(seed)
    x = rng.random(b.shape[0]) + 0.5
    best = math.inf
    for _ in range(iterations):
        y = bt.dot(b.dot(x))
        best = min(best, float(np.max(y / x)))
        x = y / np.max(y) + 1e-12
    return math.sqrt(best)


DENSE_LIMIT = 2500


def herz_check(
    spec: AffineGroupSpec,
    mu: Measure,
    radius: int = 6,
    iterations: int = 500,
    seed: int = 0,
    tol: float = 1e-9,
) -> dict:
    """Compare the phased operator with its phase-stripped (automorphism) image.

    Entrywise ``|A_phased| = A_stripped``, so ``||A_phased|| <= ||A_stripped||``.
    Small balls use dense two-norms; large ones compare a power-iteration lower
    bound for the phased side with a Collatz–Wielandt upper bound.
    """
    stripped = AffineGroupSpec(spec.dim, tuple(g.stripped() for g in spec.generators), spec.weights, spec.name)
    a = build_operator(spec, mu, radius)
    b = build_operator(stripped, mu, radius)
    if a.size <= DENSE_LIMIT:
        method = "dense"
        phased, phaseless = _dense_norm(a.matrix), _dense_norm(b.matrix)
        bound = phaseless
    else:
        method = "power-iteration vs Collatz-Wielandt"
        phased = estimate_norm(a, iterations, seed=seed).value
        phaseless = estimate_norm(b, iterations, seed=seed).value
        bound = _nonnegative_upper_bound(b.matrix, iterations, seed)
    return {
        "radius": radius,
        "points": a.size,
        "method": method,
        "phased": phased,
        "phaseless": phaseless,
        "phaseless_upper": bound,
        "holds": bool(phased <= bound + tol),
        "tolerance": tol,
    }


def escape_profile(
    spec: AffineGroupSpec,
    mu: Measure,
    start: Sequence[int],
    steps: int,
    samples: int,
    seed: int = 0,
) -> dict:
    """Sample dual trajectories ``m_t = σ_{w_t} ... σ_{w_1} m``.

    Norms are tracked in exact integers. The start ball is the sup-norm ball
    through ``start``; the Lyapunov estimate is the least-squares slope of the
    median ``log ||m_t||∞``.
    """
    if steps < 1 or samples < 1:
        raise ValueError("steps and samples must be at least 1")
    m0 = tuple(int(x) for x in start)
    if len(m0) != spec.dim or not any(m0):
        raise ValueError(f"start must be a nonzero integer {spec.dim}-vector")
    r0 = max(abs(x) for x in m0)
    words = [w for w, _ in mu.atoms]
    probs = np.array([float(p) for _, p in mu.atoms])
    probs /= probs.sum()
    duals = [word_map(spec, w).dual_matrix().to_int_rows() for w in words]
    rng = np.random.default_rng(seed)
    choices = rng.choice(len(words), size=(samples, steps), p=probs)
    lognorm = np.empty((samples, steps + 1))
    inside = np.zeros((samples, steps + 1), dtype=bool)
    for s in range(samples):
        m = m0
        lognorm[s, 0] = math.log(r0)
        inside[s, 0] = True
        for t in range(steps):
            rows = duals[choices[s, t]]
            m = tuple(sum(a * x for a, x in zip(r, m)) for r in rows)
            top = max(abs(x) for x in m)
            lognorm[s, t + 1] = math.log(top)
            inside[s, t + 1] = top <= r0
    q10, q50, q90 = np.quantile(lognorm, [0.1, 0.5, 0.9], axis=0)
    ts = np.arange(steps + 1)
    slope = float(np.polyfit(ts, q50, 1)[0]) if steps >= 1 else 0.0
    return {
        "start": list(m0),
        "steps": steps,
        "samples": samples,
        "seed": seed,
        "log_norm_q10": q10.tolist(),
        "log_norm_median": q50.tolist(),
        "log_norm_q90": q90.tolist(),
        "return_frequency": inside.mean(axis=0).tolist(),
        "lyapunov_estimate": slope,
    }
