import pytest

from cmfree.algebra import dual_numbers, nakayama_algebra
from cmfree.complexes import (
    Complex,
    ComplexError,
    biexact,
    brutal_truncate,
    cone,
    direct_sum_complex,
    hom_complex_exactness,
    identity_chain_map,
    is_exact,
    is_exact_at,
    two_term,
)
from cmfree.modules import ModuleMap, kernel, projective, projective_cover, simple, uniserial, zero_module

K_X2 = dual_numbers()


def short_exact_k():
    """0 -> k -> Lambda -> k -> 0 over k[x]/(x^2), degrees -1..3."""
    k = simple(K_X2, 0)
    cov = projective_cover(k)
    sub, inc = kernel(cov.map)
    z = zero_module(K_X2)
    return Complex(
        -1,
        [z, sub, cov.projective, k, z],
        [ModuleMap.zero(z, sub), inc, cov.map, ModuleMap.zero(k, z)],
    )


def test_identity_complex_exact():
    m = uniserial(nakayama_algebra(6, 6, 5), 0, 3)
    assert is_exact(two_term(m))


def test_single_term_not_exact():
    k = simple(K_X2, 0)
    z = zero_module(K_X2)
    c = Complex(-1, [z, k, z], [ModuleMap.zero(z, k), ModuleMap.zero(k, z)])
    assert not is_exact_at(c, 0)
    assert not is_exact(c)


def test_short_exact_sequence_dual_numbers():
    c = short_exact_k()
    assert is_exact(c)
    lam, k = projective(K_X2, 0), simple(K_X2, 0)
    # Hom(-, Lambda) keeps it exact, Hom(k, -) does not: the sequence is not
    # biexact for the generator Lambda + k.
    assert hom_complex_exactness(c, lam, "contravariant")
    assert hom_complex_exactness(c, lam, "covariant")
    assert not hom_complex_exactness(c, k, "covariant")
    assert biexact(c, [lam]) is True
    assert biexact(c, [lam, k]) is False


def test_cone_of_identity_exact():
    c = short_exact_k()
    cn = cone(identity_chain_map(c))
    assert cn.lo == c.lo - 1
    assert is_exact(cn)


def test_identity_is_chain_map():
    c = short_exact_k()
    assert identity_chain_map(c).is_chain_map()


def test_differentials_must_square_to_zero():
    lam = projective(K_X2, 0)
    ident = ModuleMap.identity(lam)
    with pytest.raises(ComplexError):
        Complex(0, [lam, lam, lam], [ident, ident])


def test_truncation_and_sum():
    c = short_exact_k()
    t = brutal_truncate(c, 1, "le")
    assert t.hi >= 1
    s = direct_sum_complex([c, c])
    assert is_exact(s)
    assert [x.dim for x in s.terms] == [2 * x.dim for x in c.terms]
