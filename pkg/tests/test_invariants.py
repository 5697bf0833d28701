import pytest

from cmfree.algebra import dual_numbers, nakayama_algebra
from cmfree.auslander import aus
from cmfree.gorenstein import gp_survey, regular
from cmfree.invariants import (
    CertifiedInfinite,
    Finite,
    Unknown,
    classify,
    defect_trivial,
    global_dimension,
    injective_dimension,
    is_gorenstein,
    projective_dimension,
    sg_trivial,
    verify_dif,
)
from cmfree.modules import dual, is_projective, simple, uniserial

K_X2 = dual_numbers()
A2 = nakayama_algebra(2, 1, shape="linear")
N444 = nakayama_algebra(4, 4, 4)
RINGEL = nakayama_algebra(6, 6, 5)


def test_injective_dimensions():
    assert injective_dimension(K_X2, "left") == Finite(0)
    assert injective_dimension(K_X2, "right") == Finite(0)
    assert injective_dimension(A2, "left") == Finite(1)
    assert injective_dimension(A2, "right") == Finite(1)
    sides = [injective_dimension(RINGEL, s) for s in ("left", "right")]
    assert not all(isinstance(x, Finite) for x in sides)


def test_gorenstein_verdicts():
    assert is_gorenstein(K_X2) is True
    assert is_gorenstein(N444) is True
    assert is_gorenstein(RINGEL) is False


def test_global_dimensions():
    assert global_dimension(A2) == Finite(1)
    gl = global_dimension(K_X2)
    assert isinstance(gl, CertifiedInfinite)
    assert gl.witness.period == 1 and gl.witness.validate()
    aus_gl = global_dimension(aus(K_X2).gamma)
    assert isinstance(aus_gl, Finite) and aus_gl.value <= 2


def test_cap_exhaustion_is_unknown():
    m = uniserial(nakayama_algebra(6, 6, 5), 0, 1)
    assert projective_dimension(m, cap=1) == Unknown(1)


def test_projective_dimension_of_projective():
    assert projective_dimension(regular(RINGEL)) == Finite(0)


@pytest.mark.parametrize(
    "alg,expected",
    [(A2, (True, True)), (K_X2, (False, True)), (RINGEL, (False, False))],
    ids=["a2", "kx2", "665"],
)
def test_vanishing_predicates(alg, expected):
    assert (sg_trivial(alg), defect_trivial(alg)) == expected


@pytest.mark.parametrize("alg", [K_X2, A2, N444, RINGEL], ids=["kx2", "a2", "444", "665"])
def test_dif(alg):
    report = verify_dif(alg)
    assert report.passed and report.details["decided"]


@pytest.mark.parametrize("alg", [K_X2, A2, N444, RINGEL], ids=["kx2", "a2", "444", "665"])
def test_duality_consistency(alg):
    left = injective_dimension(alg, "left")
    direct = projective_dimension(dual(regular(alg)))
    assert type(left) is type(direct)
    if isinstance(left, Finite):
        assert left == direct


def test_infinite_witnesses_validate():
    for side in ("left", "right"):
        st = injective_dimension(RINGEL, side)
        assert isinstance(st, CertifiedInfinite) and st.witness.validate()


@pytest.mark.parametrize("alg", [K_X2, A2, N444, RINGEL], ids=["kx2", "a2", "444", "665"])
def test_finite_gldim_implies_cm_free(alg):
    if isinstance(global_dimension(alg), Finite):
        assert all(is_projective(m) for m in gp_survey(alg).gp)


def test_classify_a2():
    r = classify(A2)
    assert r.cm_free is True and r.gl_dim == Finite(1)
    assert not r.contradiction


def test_classify_ringel():
    r = classify(RINGEL)
    assert (r.cm_finite, r.gorenstein, r.cm_free) == (True, False, False)
    assert isinstance(global_dimension(aus(RINGEL).gamma), CertifiedInfinite)
    assert not r.contradiction


def test_simple_pd_infinite_on_ringel():
    assert isinstance(projective_dimension(simple(RINGEL, 0)), CertifiedInfinite)
