from fractions import Fraction

import numpy as np
import pytest

from nilgap.constructions import example
from nilgap.exact import Matrix
from nilgap.torus import AffineGroupSpec, AffineMap
from nilgap.walk import (
    Measure,
    ball_array,
    build_operator,
    escape_profile,
    estimate_norm,
    herz_check,
    norm_trend,
    word_map,
)

S = Matrix([[0, -1], [1, 0]])
T = Matrix([[1, 1], [0, 1]])
SL2 = example("sl2z_ST").spec
CAT = example("cat_map").spec


def dense(op):
    return op.matrix.toarray()


# -- measures -----------------------------------------------------------------------


def test_measure_validation_and_merging():
    mu = Measure((((1,), "1/4"), ((1,), "1/4"), ((-1,), "1/2")))
    assert mu.atoms == (((-1,), Fraction(1, 2)), ((1,), Fraction(1, 2)))
    assert mu.symmetric
    with pytest.raises(ValueError):
        Measure((((1,), "1/2"),))
    with pytest.raises(ValueError):
        Measure((((0,), 1),))
    with pytest.raises(ValueError):
        Measure((((1,), 2), ((2,), -1)))
    assert not Measure.uniform([(1,), (2,)]).symmetric
    assert Measure.from_spec(SL2) == Measure.uniform([(1,), (-1,), (2,), (-2,)])


def test_from_spec_drops_zero_weights():
    spec = AffineGroupSpec(2, (AffineMap(S), AffineMap(T)), weights=("1/2", "1/2", "0", "0"))
    assert Measure.from_spec(spec).atoms == (((-1,), Fraction(1, 2)), ((1,), Fraction(1, 2)))


def test_word_map_composes_left_to_right():
    g = word_map(SL2, (1, 2))
    assert g.matrix == S @ T
    assert word_map(SL2, (1, -1)).matrix == Matrix.identity(2)
    with pytest.raises(ValueError):
        word_map(SL2, (3,))


# -- operators ------------------------------------------------------------------------


def test_ball_layout():
    pts = ball_array(2, 1)
    assert pts.shape == (8, 2) and not np.any(np.all(pts == 0, axis=1))
    op = build_operator(CAT, Measure.delta(), 2)
    for i, p in enumerate(op.points):
        assert op.index_of(p) == i
    with pytest.raises(KeyError):
        op.index_of((0, 0))
    with pytest.raises(ValueError):
        build_operator(CAT, Measure.delta(), 0)


def test_delta_of_identity_is_identity():
    a = dense(build_operator(SL2, Measure.delta(), 3))
    assert np.array_equal(a, np.eye(a.shape[0]))


def test_single_letter_is_partial_permutation():
    op = build_operator(SL2, Measure.delta((2,)), 3)
    a = dense(op)
    # U(T) sends delta_m to delta_{sigma m} with sigma the inverse transpose of T
    sigma = np.array([[1, 0], [-1, 1]])
    for j, m in enumerate(op.points):
        q = sigma @ m
        col = a[:, j]
        if np.max(np.abs(q)) <= 3:
            assert col[op.index_of(q)] == 1 and np.count_nonzero(col) == 1
        else:
            assert not np.any(col)


def test_half_translation_phase():
    spec = AffineGroupSpec(2, (AffineMap(Matrix.identity(2), ("1/2", "0")),))
    op = build_operator(spec, Measure.delta((1,)), 2)
    i = op.index_of((1, 0))
    assert op.matrix[i, i] == -1
    assert op.matrix[op.index_of((0, 1)), op.index_of((0, 1))] == 1
    assert op.translations_present


def test_quarter_translation_phase_is_exact():
    spec = AffineGroupSpec(1, (AffineMap(Matrix.identity(1), ("1/4",)),))
    op = build_operator(spec, Measure.delta((1,)), 1)
    assert op.matrix[op.index_of((1,)), op.index_of((1,))] == -1j


@pytest.mark.parametrize("name", ["sl2z_ST", "cat_map", "block_reducible", "rational_rotation"])
def test_column_sums_at_most_one(name):
    spec = example(name).spec
    a = np.abs(dense(build_operator(spec, Measure.from_spec(spec), 3)))
    assert np.all(a.sum(axis=0) <= 1 + 1e-12)
    assert np.all(a.sum(axis=1) <= 1 + 1e-12)


def test_symmetric_measure_gives_self_adjoint_operator():
    spec = AffineGroupSpec(2, (AffineMap(S, ("1/3", "1/6")), AffineMap(T, ("1/4", "0"))))
    a = dense(build_operator(spec, Measure.from_spec(spec), 4))
    assert np.allclose(a, a.conj().T, atol=1e-14)


def test_permutation_equivariance():
    swap = Matrix([[0, 1], [1, 0]])
    spec = AffineGroupSpec(2, (AffineMap(S, ("1/3", "0")), AffineMap(T)))
    conj = spec.conjugate(swap)
    mu = Measure.from_spec(spec)
    a, b = build_operator(spec, mu, 5), build_operator(conj, mu, 5)
    # the swap permutes ball points; with the matching start the iterates agree
    perm = np.array([b.index_of(p[::-1]) for p in a.points])
    rng = np.random.default_rng(3)
    v = rng.normal(size=a.size) + 1j * rng.normal(size=a.size)
    w = np.empty_like(v)
    w[perm] = v
    ea = estimate_norm(a, 200, start=v)
    eb = estimate_norm(b, 200, start=w)
    assert abs(ea.value - eb.value) < 1e-12
    assert np.allclose(dense(b)[np.ix_(perm, perm)], dense(a), atol=1e-14)


# -- norms ---------------------------------------------------------------------------


def test_norm_estimates_increase_with_radius():
    est = norm_trend(SL2, Measure.from_spec(SL2), [4, 8, 16], 500)
    vals = [e.value for e in est]
    assert vals == sorted(vals)
    assert all(v < 1 for v in vals)
    assert est[-1].trend == vals


def test_power_iteration_matches_dense_norm():
    op = build_operator(SL2, Measure.from_spec(SL2), 6)
    e = estimate_norm(op, 2000, tol=1e-13)
    assert abs(e.value - np.linalg.norm(dense(op), 2)) < 1e-6


def test_power_iteration_is_seeded():
    op = build_operator(SL2, Measure.from_spec(SL2), 8)
    assert estimate_norm(op, 50, seed=4).value == estimate_norm(op, 50, seed=4).value


def test_cyclic_measure_norm_approaches_one():
    # frozen estimates for the cat map: values creep up towards 1 very slowly
    est = norm_trend(CAT, Measure.from_spec(CAT), [16, 32], 500)
    assert 0.8 < est[0].value < est[1].value < 1


def test_herz_inequality_examples():
    spec = AffineGroupSpec(2, (AffineMap(S, ("1/2", "0")), AffineMap(T, ("1/3", "1/3"))))
    res = herz_check(spec, Measure.from_spec(spec), radius=6)
    assert res["holds"] and res["method"] == "dense"
    rot = example("rational_rotation").spec
    r = herz_check(rot, Measure.from_spec(rot), radius=4)
    assert abs(r["phased"] - 1) < 1e-12 and abs(r["phaseless"] - 1) < 1e-12


def test_herz_large_ball_uses_upper_bound():
    spec = AffineGroupSpec(2, (AffineMap(S, ("1/2", "0")), AffineMap(T, ("1/3", "1/3"))))
    res = herz_check(spec, Measure.from_spec(spec), radius=30, iterations=200)
    assert res["method"] != "dense"
    assert res["phaseless"] <= res["phaseless_upper"] + 1e-9
    assert res["holds"]


# -- escape ----------------------------------------------------------------------------


def test_escape_lyapunov_for_cat_map():
    res = escape_profile(CAT, Measure.delta((1,)), (1, 0), 30, 4)
    assert abs(res["lyapunov_estimate"] - np.log((3 + 5**0.5) / 2)) < 0.02


def test_escape_returns_become_rare():
    res = escape_profile(SL2, Measure.from_spec(SL2), (1, 1), 60, 200, seed=1)
    assert res["return_frequency"][0] == 1.0
    assert res["return_frequency"][-1] < 0.5
    assert res["lyapunov_estimate"] > 0


def test_escape_validation():
    with pytest.raises(ValueError):
        escape_profile(CAT, Measure.delta((1,)), (0, 0), 5, 5)
    with pytest.raises(ValueError):
        escape_profile(CAT, Measure.delta((1,)), (1, 0), 0, 5)
