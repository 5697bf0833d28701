import pytest

from cmfree.algebra import dual_numbers, nakayama_algebra, primitive_idempotents
from cmfree.auslander import (
    aus,
    cartan_proxy_equal,
    cm_free_refutation,
    default_samples,
    gp_generator,
    summand_correspondence,
    verify_equivalence_exp,
    verify_fully_faithful,
)
from cmfree.modules import hom, is_projective, projective, simple, uniserial

K_X2 = dual_numbers()
A2 = nakayama_algebra(2, 1, shape="linear")
RINGEL = nakayama_algebra(6, 6, 5)


def test_generator_of_dual_numbers():
    gen = gp_generator(K_X2)
    assert gen.n_projective == 1
    assert sorted(s.dim for s in gen.summands) == [1, 2]


def test_aus_dual_numbers():
    aa = aus(K_X2)
    assert aa.dim == 5
    assert aa.gamma.n_vertices == 2
    assert len(primitive_idempotents(aa.gamma)) == 2
    assert aa.yoneda(simple(K_X2, 0)).dim == 2


def test_aus_of_cm_free_algebra_is_itself():
    aa = aus(A2)
    assert aa.dim == A2.dim
    assert cartan_proxy_equal(aa.gamma, A2)


def test_aus_dimension_is_hom_total():
    aa = aus(RINGEL)
    es = aa.generator.summands
    assert aa.dim == sum(hom(x, y).dim for x in es for y in es)


def test_yoneda_functorial():
    aa = aus(RINGEL)
    x, y, z = uniserial(RINGEL, 0, 4), uniserial(RINGEL, 0, 3), uniserial(RINGEL, 0, 2)
    f, g = hom(x, y).map(0), hom(y, z).map(0)
    lhs = aa.yoneda_map(g.compose(f))
    rhs = aa.yoneda_map(g).compose(aa.yoneda_map(f))
    assert (lhs + rhs.scale(-1)).is_zero()
    for m in (f, g):
        assert aa.yoneda_map(m).is_homomorphism()


@pytest.mark.parametrize("alg", [K_X2, A2, RINGEL], ids=["kx2", "a2", "665"])
def test_summands_go_to_projectives(alg):
    aa = aus(alg)
    assert summand_correspondence(aa).passed
    for e in aa.generator.summands:
        assert is_projective(aa.yoneda(e))


@pytest.mark.parametrize("alg", [K_X2, A2, RINGEL], ids=["kx2", "a2", "665"])
def test_fully_faithful_on_samples(alg):
    aa = aus(alg)
    report = verify_fully_faithful(aa, default_samples(alg))
    assert report.passed, report.details


def test_refutation_empty_on_aus():
    ref = cm_free_refutation(aus(RINGEL).gamma, depth=8)
    assert ref.empty and ref.explored > 0


def test_refutation_finds_gp_over_dual_numbers():
    ref = cm_free_refutation(K_X2, depth=4)
    assert not ref.empty


def test_exp_report():
    assert verify_equivalence_exp(aus(K_X2), depth=8).passed


def test_projectives_of_gamma_match_summands():
    aa = aus(RINGEL)
    g = aa.gamma
    dims = sorted(projective(g, v).dim for v in range(g.n_vertices))
    assert sum(dims) == g.dim
