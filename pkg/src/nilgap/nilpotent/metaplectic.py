"""Hermite-truncated metaplectic operators for SL_2(Z).

The Fourier transform ``F f(ξ) = (2π)^{-1/2} ∫ f(x) e^{-ixξ} dx`` is diagonal on
Hermite functions with eigenvalues ``(-i)^k``; it realises ``S``. Multiplication
by ``e^{ix²/2}`` realises ``T`` (the unit shear of phase space); with this sign
``(ST)^3 = e^{iπ/4} S²``. Entries of ``T`` come from Gauss–Hermite quadrature.

Truncating to the first ``K`` Hermite functions is a compression, so norms of
``Σ μ(g) ω(g)`` over single letters are lower bounds that increase with ``K``.
The shear moves level ``j`` up to about ``φ² j`` (``φ`` the golden ratio), so
the leading block that is unitary to high accuracy has size about ``K/φ²``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import roots_hermite

from ..walk import Measure, power_norm

LETTERS = {1: "S", -1: "S^-1", 2: "T", -2: "T^-1"}
SL2_S = ((0, -1), (1, 0))
SL2_T = ((1, 1), (0, 1))


def hermite_functions(x: np.ndarray, k: int) -> np.ndarray:
    """``h_0..h_{k-1}`` at ``x``, one row per degree.

    The three-term recurrence runs on ``h_k e^{x²/2}`` with periodic rescaling,
    so far-out quadrature nodes do not underflow before the Gaussian is applied.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((k, x.size))
    logs = np.empty((k, x.size))
    cur = np.full(x.size, math.pi**-0.25)
    prev = np.zeros(x.size)
    acc = np.zeros(x.size)
    for j in range(k):
        out[j] = cur
        logs[j] = acc
        cur, prev = math.sqrt(2 / (j + 1)) * x * cur - math.sqrt(j / (j + 1)) * prev, cur
        big = np.abs(cur) > 1e100
        cur[big] *= 1e-100
        prev[big] *= 1e-100
        acc[big] += 100 * math.log(10)
    return out * np.exp(logs - x * x / 2)


@lru_cache(maxsize=8)
def _rule(nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes, weights for ``∫ f dx`` and Hermite values with ``nodes`` points.

    Weights are Christoffel numbers ``1 / Σ_k h_k(x_n)²`` rather than scipy's,
    which underflow to zero in the tails.
    """
    x, _ = roots_hermite(nodes)
    h = hermite_functions(x, nodes)
    w = 1.0 / np.sum(h * h, axis=0)
    return x, w, h


def _chirp_matrix(k: int, nodes: int) -> np.ndarray:
    x, w, h = _rule(nodes)
    hk = h[:k]
    return (hk * (w * np.exp(0.5j * x * x))) @ hk.T


@dataclass
class MetaplecticOp:
    truncation: int
    matrix: np.ndarray
    word: tuple[int, ...]
    quadrature_error: float = 0.0

    def unitarity_defect(self, block: int | None = None) -> float:
        """``||(M*M − I)||`` on the leading ``block`` coordinates (default ``K/2``)."""
        b = self.truncation // 2 if block is None else block
        g = self.matrix.conj().T @ self.matrix - np.eye(self.truncation)
        return float(np.linalg.norm(g[:b, :b], 2))

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "word": [LETTERS[s] for s in self.word],
            "quadrature_error": self.quadrature_error,
            "unitarity_defect_half": self.unitarity_defect(),
            "unitarity_defect_quarter": self.unitarity_defect(self.truncation // 4),
        }


@lru_cache(maxsize=16)
def _generator(which: str, k: int) -> MetaplecticOp:
    if which == "S":
        quarter = np.array([1, -1j, -1, 1j])  # exact, unlike (-1j) ** k for large k
        return MetaplecticOp(k, np.diag(quarter[np.arange(k) % 4]), (1,), 0.0)
    t = _chirp_matrix(k, 4 * k)
    err = float(np.max(np.abs(t - _chirp_matrix(k, 5 * k))))
    return MetaplecticOp(k, t, (2,), err)


def metaplectic_generator(which: str, k: int, accuracy: float | None = None) -> MetaplecticOp:
    """``S`` exactly, or ``T`` by ``4K``-node quadrature with the ``4K`` vs ``5K`` gap as error estimate."""
    if which not in ("S", "T"):
        raise ValueError(f"generator must be 'S' or 'T', not {which!r}")
    if k < 4:
        raise ValueError("truncation K must be at least 4")
    op = _generator(which, k)
    if accuracy is not None and op.quadrature_error > accuracy:
        raise ValueError(f"K={k}: quadrature error {op.quadrature_error:.3g} exceeds requested {accuracy:.3g}")
    return MetaplecticOp(op.truncation, op.matrix.copy(), op.word, op.quadrature_error)


def _letter_matrix(s: int, k: int) -> np.ndarray:
    if s not in LETTERS:
        raise ValueError(f"letter {s}: the alphabet is ±1 (S) and ±2 (T)")
    m = _generator("S" if abs(s) == 1 else "T", k).matrix
    return m if s > 0 else m.conj().T  # both generators are symmetric, so the inverse is the conjugate


def word_operator(word: Sequence[int], k: int) -> MetaplecticOp:
    """Product of truncated generator matrices, left to right."""
    m = np.eye(k, dtype=complex)
    for s in word:
        m = m @ _letter_matrix(s, k)
    err = _generator("T", k).quadrature_error if any(abs(s) == 2 for s in word) else 0.0
    return MetaplecticOp(k, m, tuple(word), err * max(1, len(word)))


def sl2_matrix(word: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    def mul(a, b):
        return tuple(tuple(sum(a[i][l] * b[l][j] for l in range(2)) for j in range(2)) for i in range(2))

    def inv(a):
        return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))

    m = ((1, 0), (0, 1))
    for s in word:
        g = SL2_S if abs(s) == 1 else SL2_T
        m = mul(m, g if s > 0 else inv(g))
    return m


def measure_operator(mu: Measure, k: int) -> np.ndarray:
    if mu.max_letter() > 2:
        raise ValueError("metaplectic measures use the alphabet ±1 (S), ±2 (T)")
    total = np.zeros((k, k), dtype=complex)
    for w, p in mu.atoms:
        total += float(p) * word_operator(w, k).matrix
    return total


@dataclass
class TruncatedNorm:
    value: float
    truncation: int
    iterations: int
    residual: float
    converged: bool
    quadrature_error: float
    trend: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "truncation": self.truncation,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "quadrature_error": self.quadrature_error,
            "trend": self.trend,
        }


def component_norm_estimate(
    mu: Measure,
    truncations: Sequence[int] = (64, 128, 256),
    iterations: int = 2000,
    tol: float = 1e-12,
    seed: int = 0,
) -> list[TruncatedNorm]:
    """Power-iteration norm of ``ω_K(μ)`` at each truncation, trend attached."""
    out, values = [], []
    for k in truncations:
        a = measure_operator(mu, k)
        ah = a.conj().T
        value, steps, res, ok = power_norm(a.dot, ah.dot, k, iterations, tol, seed)
        values.append(value)
        qe = _generator("T", k).quadrature_error
        out.append(TruncatedNorm(value, k, steps, res, ok, qe, list(values)))
    return out


NEVO_DIM_BUDGET = 48 * 48


def nevo_check(mu: Measure, k: int = 32, power: int = 1, tol: float = 1e-6) -> dict:
    """``||π(μ)|| <= ||((π ⊗ π̄)^{⊗p})(μ)||^{1/2p}`` at truncation ``K``.

    Both sides are dense two-norms. For single-letter measures the truncated
    tensor operator is the compression of the true one, and Cauchy–Schwarz
    gives the inequality for the compressions themselves.
    """
    if power < 1:
        raise ValueError("tensor power must be at least 1")
    dim = k ** (2 * power)
    if dim > NEVO_DIM_BUDGET:
        raise ValueError(f"tensor dimension {dim} exceeds the budget {NEVO_DIM_BUDGET} (K <= 48 at power 1)")
    lhs = float(np.linalg.norm(measure_operator(mu, k), 2))
    big = np.zeros((dim, dim), dtype=complex)
    for w, p in mu.atoms:
        m = word_operator(w, k).matrix
        pair = np.kron(m, m.conj())
        t = pair
        for _ in range(power - 1):
            t = np.kron(t, pair)
        big += float(p) * t
    rhs = float(np.linalg.norm(big, 2)) ** (1.0 / (2 * power))
    defect = _generator("T", k).quadrature_error
    return {
        "truncation": k,
        "power": power,
        "lhs": lhs,
        "rhs": rhs,
        "truncation_defect": defect,
        "tolerance": tol + defect,
        "holds": bool(lhs <= rhs + tol + defect),
    }


class NonHyperbolicWord(ValueError):
    pass


def gaussian_overlap(g) -> float:
    """``|<ω(g) h0, h0>| = (4 / (||g||_F² + 2))^{1/4}`` for ``g ∈ SL_2(R)``."""
    f2 = sum(x * x for r in g for x in r)
    return (4.0 / (f2 + 2)) ** 0.25


def decay_profile(word: Sequence[int], k: int = 256, n_max: int = 20) -> dict:
    """``|<ω(g)^n h0, h0>|`` for ``n = 1..n_max`` with a power-law fit against ``||g^n||_F``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    g = sl2_matrix(word)
    tr = g[0][0] + g[1][1]
    if abs(tr) <= 2:
        raise NonHyperbolicWord(
            f"word {list(word)} has trace {tr}; only hyperbolic elements (|trace| > 2) have decaying coefficients"
        )
    step = word_operator(word, k).matrix
    v = np.zeros(k, dtype=complex)
    v[0] = 1.0
    coeffs, oracle, norms = [], [], []
    gn = ((1, 0), (0, 1))
    for _ in range(n_max):
        v = step @ v
        gn = tuple(tuple(sum(gn[i][l] * g[l][j] for l in range(2)) for j in range(2)) for i in range(2))
        coeffs.append(float(abs(v[0])))
        oracle.append(gaussian_overlap(gn))
        norms.append(math.sqrt(sum(x * x for r in gn for x in r)))
    usable = [(math.log(r), math.log(c)) for r, c in zip(norms, coeffs) if c > 1e-12]
    exponent = -float(np.polyfit(*zip(*usable), 1)[0]) if len(usable) >= 2 else None
    return {
        "word": [LETTERS[s] for s in word],
        "trace": tr,
        "truncation": k,
        "coefficients": coeffs,
        "closed_form": oracle,
        "frobenius_norms": norms,
        "power_law_exponent": exponent,
    }
