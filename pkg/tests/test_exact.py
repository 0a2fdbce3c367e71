from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilgap.constructions import example
from nilgap.exact import (
    IntPolynomial,
    Matrix,
    Subspace,
    adapted_basis,
    all_eigenvalues_roots_of_unity,
    charpoly,
    composition_factors,
    enveloping_algebra,
    hermite_normal_form,
    integer_kernel,
    largest_invariant_inside,
    minimal_invariant_subspaces,
    restriction,
    root_of_unity_exponent,
    spin,
    unit_root_kernel,
    verify_certificate,
)
from nilgap.exact.poly import unit_root_kernel_by_power
from nilgap.torus import dualize

S = Matrix([[0, -1], [1, 0]])
T = Matrix([[1, 1], [0, 1]])
CAT = Matrix([[2, 1], [1, 1]])


def small_int_matrices(n, lo=-3, hi=3):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)


# -- matrices and polynomials ----------------------------------------------------


def test_matrix_basics():
    m = Matrix([[1, 2], [3, 4]])
    assert m.det() == -2
    assert m @ m.inverse() == Matrix.identity(2)
    assert m.T == Matrix([[1, 3], [2, 4]])
    assert (CAT ** -1) == Matrix([[1, -1], [-1, 2]])
    with pytest.raises(TypeError):
        Matrix([[0.5]])


@pytest.mark.parametrize(
    "m, coeffs",
    [(Matrix.identity(2), (1, -2, 1)), (CAT, (1, -3, 1)), (S, (1, 0, 1))],
)
def test_charpoly_examples(m, coeffs):
    p = charpoly(m)
    assert p.is_monic and p.degree == 2
    assert p == IntPolynomial(coeffs)


def test_charpoly_rejects_non_square():
    with pytest.raises(ValueError):
        charpoly(Matrix([[1, 2, 3], [4, 5, 6]]))


def test_root_of_unity_exponent_table():
    assert [root_of_unity_exponent(d) for d in (1, 2, 3, 4, 5, 6, 7, 8)] == [2, 12, 12, 120, 120, 2520, 2520, 5040]


@pytest.mark.parametrize("m, expected", [(S, True), (CAT, False), (Matrix([[1, 5], [0, 1]]), True)])
def test_roots_of_unity_examples(m, expected):
    assert all_eigenvalues_roots_of_unity(m) is expected


def test_roots_of_unity_rejects_non_unimodular():
    with pytest.raises(ValueError):
        all_eigenvalues_roots_of_unity(Matrix([[2, 0], [0, 1]]))


def test_order_eight_element_needs_120():
    # companion matrix of x^4 + 1, a primitive 8th root of unity
    c = Matrix([[0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert all_eigenvalues_roots_of_unity(c)
    assert c**8 == Matrix.identity(4)


@settings(max_examples=60, deadline=None)
@given(small_int_matrices(3, -2, 2))
def test_unit_root_kernel_matches_power_test(m):
    if abs(m.det()) != 1:
        return
    assert Subspace(3, unit_root_kernel(m)) == Subspace(3, unit_root_kernel_by_power(m))


# -- lattices ------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_hnf_is_unimodular_transform(rows):
    h, u = hermite_normal_form(rows)
    um = Matrix(u)
    assert abs(um.det()) == 1
    assert um @ Matrix(rows) == Matrix(h)


def test_integer_kernel_and_saturation():
    k = integer_kernel([[2, 4, 6]])
    assert all(2 * a + 4 * b + 6 * c == 0 for a, b, c in k)
    w = Subspace(3, [[2, 4, 0]]).saturated()
    assert w.lattice_basis == ((1, 2, 0),)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=3))
def test_adapted_basis_is_unimodular(vectors):
    w = Subspace(4, vectors)
    if w.is_zero():
        return
    w = w.saturated()
    p, p_inv = adapted_basis(w)
    assert abs(p.det()) == 1 and p @ p_inv == Matrix.identity(4)
    for j, v in enumerate(w.lattice_basis):
        assert tuple(p.col(j)) == tuple(Fraction(x) for x in v)


# -- invariant subspaces ------------------------------------------------------------


def test_spin_examples():
    e1 = [[1, 0]]
    assert spin(e1, [Matrix.identity(2)]) == Subspace(2, e1)
    assert spin(e1, [S]).is_full()
    a = Matrix([[0, -1], [1, 0]])
    b = Matrix([[0, -1], [1, -1]])  # order 3, not similar to a
    g = Matrix.block_diag(a, b)
    assert spin([[1, 0, 1, 0]], [g]).is_full()


def test_largest_invariant_inside_examples():
    e1 = Subspace(2, [[1, 0]])
    assert largest_invariant_inside(Subspace.full(2), [CAT]).is_full()
    assert largest_invariant_inside(e1, [Matrix([[1, 0], [1, 1]])]).is_zero()
    assert largest_invariant_inside(e1, [T]) == e1


@settings(max_examples=40, deadline=None)
@given(small_int_matrices(3, -2, 2), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_spin_then_largest_invariant_is_idempotent(g, seed):
    if g.det() == 0 or not any(seed):
        return
    w = spin([seed], [g])
    assert largest_invariant_inside(w, [g]) == w


def test_restriction_examples():
    assert restriction(Matrix.identity(3), Subspace(3, [[1, 0, 0], [0, 1, 0]])) == Matrix.identity(2)
    assert restriction(Matrix.diag([2, 3]), Subspace(2, [[0, 1]])) == Matrix([[3]])
    a = Matrix([[2, 1], [1, 1]])
    block = Matrix([[2, 1, 0], [1, 1, 0], [5, 7, 1]]).T.T
    # column convention: the span of e3 is invariant for the transpose-style block
    low = Matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert restriction(low, Subspace(3, [[0, 0, 1]])) == Matrix([[1]])
    upper = Matrix([[2, 1, 4], [1, 1, 3], [0, 0, 1]])
    w = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    assert restriction(upper, w) == a
    with pytest.raises(ValueError):
        restriction(block.T, Subspace(3, [[0, 0, 1]]))


@settings(max_examples=30, deadline=None)
@given(small_int_matrices(2, -2, 2), small_int_matrices(2, -2, 2))
def test_restriction_respects_products(a, b):
    ga = Matrix.block_diag(a, Matrix([[1]]))
    gb = Matrix.block_diag(b, Matrix([[1]]))
    w = Subspace(3, [[0, 0, 1]])
    assert restriction(ga @ gb, w) == restriction(ga, w) @ restriction(gb, w)
    u = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    assert restriction(ga @ gb, u) == restriction(ga, u) @ restriction(gb, u)


def test_restriction_is_integral_on_saturated_subspace():
    g = Matrix([[1, 0, 0], [0, 2, 1], [0, 1, 1]])
    w = Subspace(3, [[0, 2, 0], [0, 0, 3]]).saturated()
    r = restriction(g, w)
    assert r.is_integer() and r == Matrix([[2, 1], [1, 1]])


def test_minimal_invariant_subspaces_triangular():
    g = Matrix([[2, 1, 0], [0, 1, 1], [0, 0, 1]])
    res = minimal_invariant_subspaces([g])
    assert Subspace(3, [[1, 0, 0]]) in res.subspaces


def test_sl2_is_exhausted_by_burnside():
    res = minimal_invariant_subspaces([S, T])
    assert res.subspaces == [] and res.flag == "exhausted"
    assert res.certificate.method == "burnside"
    assert verify_certificate([S, T], res.certificate)


def test_exa1_is_exhausted_by_norton():
    gens = dualize(example("exa1_6dim").spec)
    res = minimal_invariant_subspaces(gens)
    assert res.flag == "exhausted" and res.subspaces == []
    assert res.certificate.method == "norton"
    assert verify_certificate(gens, res.certificate)
    basis, _ = enveloping_algebra(gens)
    assert len(basis) == 18  # a copy of M_3(Q(sqrt 2)), so Burnside alone cannot certify


def test_effort_must_be_positive():
    with pytest.raises(ValueError):
        minimal_invariant_subspaces([S], effort=0)


def test_composition_factors_of_block_example():
    gens = dualize(example("block_reducible").spec)
    factors, complete = composition_factors(gens)
    assert complete
    assert sorted(f.dim for f in factors) == [1, 2]
    assert all(g.is_integer() for f in factors for g in f.matrices)
