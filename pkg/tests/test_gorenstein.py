import pytest
from hypothesis import given, settings, strategies as st

from cmfree.algebra import dual_numbers, nakayama_algebra
from cmfree.complexes import is_exact
from cmfree.exactfield import PrimeField
from cmfree.gorenstein import (
    ExtNonvanishing,
    candidate_universe,
    complete_resolution,
    gp_oracle,
    gp_survey,
    is_gp,
    oracle_verdicts,
    spliced_complexes,
    stability_check,
)
from cmfree.modules import direct_sum, projective, projectives, simple, syzygy, uniserial, uniserials

NAKAYAMA = {
    "kx2": dual_numbers(),
    "a2": nakayama_algebra(2, 1, shape="linear"),
    "444": nakayama_algebra(4, 4, 4),
    "665": nakayama_algebra(6, 6, 5),
    "8887": nakayama_algebra(8, 8, 8, 7),
}

# (GP indecomposables, labels of the non-projective ones)
CENSUS = {
    "kx2": (2, ["M(1,1)"]),
    "a2": (2, []),
    "444": (12, ["M(1,1)", "M(1,2)", "M(1,3)", "M(2,1)", "M(2,2)", "M(2,3)", "M(3,1)", "M(3,2)", "M(3,3)"]),
    "665": (4, ["M(1,3)"]),
    "8887": (10, ["M(1,1)", "M(1,4)", "M(1,5)", "M(2,3)", "M(2,4)", "M(2,7)"]),
}


@pytest.mark.parametrize("name", sorted(CENSUS))
def test_gp_census(name):
    survey = gp_survey(NAKAYAMA[name])
    count, nonproj = CENSUS[name]
    assert not survey.unknown
    assert len(survey.gp) == count
    assert sorted(m.label for m in survey.nonprojective_gp) == nonproj


@pytest.mark.parametrize("name", sorted(NAKAYAMA))
def test_verdicts_agree_with_oracle(name):
    universe = candidate_universe(NAKAYAMA[name])
    ours = [is_gp(m).is_yes for m in universe]
    assert ours == oracle_verdicts(universe)


@pytest.mark.parametrize("name", sorted(NAKAYAMA))
def test_every_verdict_revalidates(name):
    for v in gp_survey(NAKAYAMA[name]).verdicts:
        if v.is_yes:
            assert v.certificate.validate(), v.certificate.audit()
        else:
            assert v.refutation.validate()


def test_simple_over_dual_numbers():
    a = NAKAYAMA["kx2"]
    k = simple(a, 0)
    v = is_gp(k)
    assert v.is_yes and v.certificate.period == 1
    c = complete_resolution(k, v.certificate)
    assert is_exact(c)


def test_simple_over_ringel_refuted_by_ext():
    a = NAKAYAMA["665"]
    v = is_gp(simple(a, 0))
    assert v.status == "no"
    assert isinstance(v.refutation.reason, ExtNonvanishing)
    assert v.refutation.reason.dim > 0


def test_projectives_are_gp():
    a = NAKAYAMA["665"]
    for p in projectives(a):
        assert is_gp(p).is_yes


def test_gp_of_direct_sum():
    a = NAKAYAMA["665"]
    m = direct_sum([uniserial(a, 0, 3), projective(a, 1)]).module
    assert is_gp(m).is_yes
    assert not is_gp(direct_sum([uniserial(a, 0, 3), simple(a, 2)]).module).is_yes


def test_oracle_single_module():
    a = NAKAYAMA["665"]
    universe = candidate_universe(a)
    assert gp_oracle(uniserial(a, 0, 3), universe)
    assert not gp_oracle(simple(a, 1), universe)


@pytest.mark.parametrize("name", ["665", "8887"])
def test_gp_closed_under_syzygy(name):
    for m in gp_survey(NAKAYAMA[name]).gp:
        om = syzygy(m)
        if not om.is_zero():
            assert is_gp(om).is_yes


@pytest.mark.parametrize("name", ["444", "665"])
def test_field_independence(name):
    a = NAKAYAMA[name]
    b = a.with_field(PrimeField(101))
    left = [m.label for m in gp_survey(a).gp]
    right = [m.label for m in gp_survey(b).gp]
    assert left == right


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_spliced_complexes_stable(seed):
    a = NAKAYAMA["665"]
    (c,) = spliced_complexes(a, 1, seed=seed)
    report = stability_check(c, projectives(a))
    assert report.invoked, report.reason
    assert report.passed


def test_stability_needs_biexactness():
    a = NAKAYAMA["kx2"]
    (c,) = spliced_complexes(a, 1, seed=0)
    report = stability_check(c, projectives(a) + [simple(a, 0)])
    assert not report.invoked
    assert "biexact" in report.reason
