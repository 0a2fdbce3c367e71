from fractions import Fraction

import pytest

from nilgap.constructions import example
from nilgap.exact import Matrix, Subspace
from nilgap.torus import (
    AffineGroupSpec,
    AffineMap,
    amenable_core,
    check_nogap_witness,
    dualize,
    find_ping_pong,
    spectral_gap_verdict,
    verify_ping_pong,
    virtually_abelian,
)
from nilgap.torus.ergodic import (
    dual_orbit,
    ergodicity_check,
    infinite_orbit_certificate,
    invariant_vector_on_orbit,
    mixing_evidence,
    verify_invariant_vector,
)

S = Matrix([[0, -1], [1, 0]])
T = Matrix([[1, 1], [0, 1]])
CAT = Matrix([[2, 1], [1, 1]])


def spec_of(*mats, translations=None):
    d = mats[0].nrows
    translations = translations or [()] * len(mats)
    return AffineGroupSpec(d, tuple(AffineMap(m, t) for m, t in zip(mats, translations)))


# -- affine maps ----------------------------------------------------------------------


def test_affine_map_validation():
    with pytest.raises(ValueError):
        AffineMap(Matrix([[2, 0], [0, 1]]))
    with pytest.raises(ValueError):
        AffineMap(Matrix([[1]]), (Fraction(1, 2), 0))
    g = AffineMap(CAT, ("1/2", "1/3"))
    x = (Fraction(1, 5), Fraction(2, 7))
    assert g.inverse()(g(x)) == x
    assert g.compose(g.inverse()) == AffineMap.identity(2)


def test_spec_validation():
    with pytest.raises(ValueError):
        AffineGroupSpec(2, ())
    with pytest.raises(ValueError):
        AffineGroupSpec(2, (AffineMap(CAT),), weights=("1/2", "1/3"))
    with pytest.raises(ValueError):
        AffineGroupSpec(3, (AffineMap(CAT),))


@pytest.mark.parametrize("m", [CAT, S, T, Matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])])
def test_dualize_is_inverse_transpose(m):
    (dm,) = dualize(spec_of(m))
    assert dm == m.inverse().T
    assert dm.T @ m == Matrix.identity(m.nrows)


# -- amenable core and virtual abelianness -------------------------------------------


def test_amenable_core_examples():
    assert amenable_core([S, T]).is_zero()
    block = dualize(example("block_reducible").spec)
    core = amenable_core(block)
    assert core == Subspace(3, [[0, 0, 1]])
    assert all(core.is_invariant(g) for g in block)


def test_virtually_abelian_examples():
    assert virtually_abelian([CAT]).answer == "yes"
    assert virtually_abelian([S, Matrix([[-1, 0], [0, -1]])]).answer == "yes"
    flip = Matrix([[-1, 0], [1, 1]])
    assert virtually_abelian([CAT, flip]).answer == "yes"
    res = virtually_abelian([S, T])
    assert res.answer == "no" and verify_ping_pong(res.certificate)


def test_ping_pong_certificate_is_checked_exactly():
    cert = find_ping_pong([S, T], radius=6)
    assert cert is not None and verify_ping_pong(cert)


def test_ball_must_be_positive():
    with pytest.raises(ValueError):
        virtually_abelian([CAT], ball=0)


# -- verdicts -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name",
    ["cat_map", "sl2z_ST", "shear", "rational_rotation", "exa1_6dim", "dihedral_hyperbolic", "block_reducible"],
)
def test_corpus_verdicts(name):
    ex = example(name)
    v = spectral_gap_verdict(ex.spec)
    assert v.kind == ex.expected
    if v.kind == "NoGap":
        assert check_nogap_witness(ex.spec, v)
        assert v.witness == Subspace(ex.spec.dim, [list(r) for r in ex.witness])
    else:
        assert v.witness is None


def test_translations_do_not_change_verdict():
    base = spectral_gap_verdict(spec_of(S, T)).kind
    shifted = spectral_gap_verdict(spec_of(S, T, translations=[("1/2", "0"), ("1/3", "1/5")])).kind
    assert base == shifted == "Gap"


def test_forged_witness_is_rejected():
    ex = example("block_reducible")
    v = spectral_gap_verdict(ex.spec)
    v.witness = Subspace(3, [[1, 0, 0]])
    assert not check_nogap_witness(ex.spec, v)
    assert not check_nogap_witness(example("sl2z_ST").spec, spectral_gap_verdict(example("sl2z_ST").spec))


@pytest.mark.parametrize("name", ["cat_map", "sl2z_ST", "block_reducible"])
def test_verdict_is_conjugation_invariant(name):
    spec = example(name).spec
    n = spec.dim
    c = Matrix([[int(j in (i, i + 1)) for j in range(n)] for i in range(n)])  # unipotent upper bidiagonal
    v = spectral_gap_verdict(spec)
    w = spectral_gap_verdict(spec.conjugate(c))
    assert v.kind == w.kind
    if v.kind == "NoGap" and v.witness.dim < spec.dim:
        # dual of c g c^-1 is c^-T (dual g) c^T, so witnesses move by c^-T
        assert w.witness == v.witness.image(c.inverse().T)


def test_verdict_json_shape():
    j = spectral_gap_verdict(example("block_reducible").spec).to_json()
    assert j["kind"] == "NoGap"
    assert j["factor_torus"]["factor_dim"] == 1
    assert j["evidence"][-1]["step"] == "conclusion"


# -- ergodicity and mixing ----------------------------------------------------------


def test_shear_has_invariant_character():
    spec = example("shear").spec
    rep = ergodicity_check(spec, norm_bound=5)
    assert rep.ergodic == "no" and rep.weakly_mixing == "no"
    assert all(verify_invariant_vector(spec, o) for o in rep.finite_orbits_found if o.invariant_phases is not None)


def test_rotation_orbit_phases():
    spec = example("rational_rotation").spec
    orb, complete = dual_orbit(spec, (1, 0), cap=64, norm_cap=64)
    assert complete and orb == [(1, 0)]
    fo = invariant_vector_on_orbit(spec, orb)
    assert fo.invariant_phases is None  # e^{-2 pi i/3} != 1
    fo0 = invariant_vector_on_orbit(spec, [(0, 1)])
    assert fo0.invariant_phases == ["0"] and verify_invariant_vector(spec, fo0)


def test_phases_cancel_around_a_free_orbit():
    # around the 4-cycle the phases add up to <sum of orbit, a> = 0
    spec = spec_of(S, translations=[("1/2", "0")])
    orb, complete = dual_orbit(spec, (1, 0), cap=16, norm_cap=16)
    assert complete and len(orb) == 4
    fo = invariant_vector_on_orbit(spec, orb)
    assert fo.invariant_phases == ["0", "0", "1/2", "1/2"] and verify_invariant_vector(spec, fo)


def test_translation_in_stabilizer_obstructs_invariance():
    spec = spec_of(S, Matrix.identity(2), translations=[(), ("1/2", "0")])
    orb, _ = dual_orbit(spec, (1, 0), cap=16, norm_cap=16)
    fo = invariant_vector_on_orbit(spec, orb)
    assert fo.invariant_phases is None and fo.inconsistent_edge["phase_defect"] == "1/2"


def test_cat_map_is_ergodic_with_certificate():
    rep = ergodicity_check(example("cat_map").spec)
    assert rep.ergodic == "yes" and rep.weakly_mixing == "yes"
    assert rep.certificate is not None
    assert infinite_orbit_certificate(example("sl2z_ST").spec) is not None
    assert infinite_orbit_certificate(example("shear").spec) is None


def test_mixing_evidence_fibers():
    assert mixing_evidence(example("cat_map").spec, ball=8)["max_fiber"] == 1
    assert mixing_evidence(example("shear").spec, ball=8)["max_fiber"] > 1


def test_ergodicity_rejects_irrational_translation():
    g = AffineMap(Matrix.identity(1), (Fraction(1, 3),))
    object.__setattr__(g, "translation", (0.25,))
    with pytest.raises(ValueError):
        ergodicity_check(AffineGroupSpec(1, (g,)))
