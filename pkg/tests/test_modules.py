import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmfree.algebra import dual_numbers, nakayama_algebra
from cmfree.exactfield import PrimeField
from cmfree.modules import (
    ModuleMap,
    biduality,
    cokernel,
    decompose,
    direct_sum,
    dual,
    ext,
    ext_via_injectives,
    find_isomorphism,
    hom,
    hom_dim,
    injective,
    is_indecomposable,
    is_isomorphic,
    is_projective,
    kernel,
    loewy_length,
    projective,
    projective_cover,
    regular_module,
    simple,
    star,
    syzygy,
    transpose,
    uniserial,
    uniserials,
)

RINGEL = nakayama_algebra(6, 6, 5)
A2 = nakayama_algebra(2, 1, shape="linear")
K_X2 = dual_numbers()
N444 = nakayama_algebra(4, 4, 4)


def naive_hom_dim(m, n):
    """Intertwiners as the kernel of the full Kronecker system over every basis element."""
    f = m.field
    a = m.algebra
    eqs = []
    for b in range(a.dim):
        am, an = m.action_matrix(b), n.action_matrix(b)
        # X am - an X = 0 with X of shape (n.dim, m.dim), vec row-major
        eqs.append(np.kron(np.eye(n.dim, dtype=np.int64), am.T) - np.kron(an, np.eye(m.dim, dtype=np.int64)))
    if not eqs or m.dim == 0 or n.dim == 0:
        return 0
    return m.dim * n.dim - f.rank(np.mod(np.vstack(eqs), f.p))


def test_projective_dimensions():
    assert [projective(RINGEL, v).dim for v in range(3)] == [6, 6, 5]
    assert [projective(A2, v).dim for v in range(2)] == [2, 1]


@pytest.mark.parametrize("alg", [K_X2, A2, N444, RINGEL], ids=["kx2", "a2", "444", "665"])
def test_hom_matches_naive_oracle(alg):
    mods = uniserials(alg)[:8]
    for x in mods:
        for y in mods:
            assert hom_dim(x, y) == naive_hom_dim(x, y)


def test_hom_basis_maps_are_homomorphisms():
    x, y = uniserial(RINGEL, 0, 4), uniserial(RINGEL, 1, 5)
    h = hom(x, y)
    assert h.dim > 0
    for g in h.maps():
        assert g.is_homomorphism()


def test_hom_from_regular_is_dimension():
    reg = regular_module(RINGEL)
    for m in uniserials(RINGEL)[::3]:
        assert hom_dim(reg, m) == m.dim


def test_injective_of_dual_numbers_is_projective():
    assert is_isomorphic(injective(K_X2, 0), projective(K_X2, 0))


def test_injectives_of_444_are_projective():
    for v in range(3):
        assert is_projective(injective(N444, v))
        assert is_isomorphic(injective(N444, v), projective(N444, v))


@pytest.mark.parametrize("alg", [K_X2, A2, RINGEL], ids=["kx2", "a2", "665"])
def test_double_dual(alg):
    for m in uniserials(alg):
        dd = dual(dual(m))
        assert dd.algebra is alg
        assert is_isomorphic(dd, m)


def test_decompose_projective_pair():
    p = projective(RINGEL, 0)
    d = decompose(direct_sum([p, p]).module)
    assert len(d.summands) == 1
    rep, mult = d.summands[0]
    assert mult == 2 and is_isomorphic(rep, p)


def test_regular_module_decomposition():
    d = decompose(regular_module(RINGEL))
    assert sorted(s.dim for s, k in d.summands for _ in range(k)) == [5, 6, 6]


def test_syzygies_of_simples_are_uniserial():
    c = (6, 6, 5)
    for v in range(3):
        om = syzygy(simple(RINGEL, v))
        assert om.dim == c[v] - 1
        assert is_indecomposable(om)
        assert loewy_length(om) == om.dim


def test_ext_dual_numbers():
    k = simple(K_X2, 0)
    for i in range(1, 6):
        assert ext(k, k, i) == 1


def test_a2_hereditary():
    mods = uniserials(A2)
    for x in mods:
        for y in mods:
            for i in (2, 3):
                assert ext(x, y, i) == 0


def test_transpose_of_simple():
    k = simple(K_X2, 0)
    t = transpose(k)
    assert t.algebra is K_X2.opposite()
    assert t.dim == 1


def test_star_of_projective():
    p = projective(RINGEL, 2)
    assert star(p).dim == hom_dim(p, regular_module(RINGEL))


def test_equal_dimension_projectives_differ():
    assert not is_isomorphic(projective(RINGEL, 0), projective(RINGEL, 1))


def test_kernel_cokernel_of_cover():
    m = uniserial(RINGEL, 1, 3)
    cov = projective_cover(m)
    assert cov.map.is_surjective()
    k, inc = kernel(cov.map)
    assert k.dim == cov.projective.dim - m.dim
    c, _ = cokernel(inc)
    assert is_isomorphic(c, m)


def test_find_isomorphism_conjugated():
    m = direct_sum([uniserial(RINGEL, 0, 2), uniserial(RINGEL, 2, 3)]).module
    g = find_isomorphism(m, m)
    assert g is not None and g.is_iso()


# -- properties ------------------------------------------------------------

indices = st.integers(0, len(uniserials(RINGEL)) - 1)


@settings(max_examples=25, deadline=None)
@given(st.lists(indices, min_size=1, max_size=3), indices)
def test_hom_additive(parts, j):
    us = uniserials(RINGEL)
    total = direct_sum([us[i] for i in parts]).module
    y = us[j]
    assert hom_dim(total, y) == sum(hom_dim(us[i], y) for i in parts)
    assert hom_dim(y, total) == sum(hom_dim(y, us[i]) for i in parts)


@settings(max_examples=20, deadline=None)
@given(indices, indices, st.integers(1, 4))
def test_ext_two_sided(i, j, deg):
    us = uniserials(RINGEL)
    assert ext(us[i], us[j], deg) == ext_via_injectives(us[i], us[j], deg)


@settings(max_examples=15, deadline=None)
@given(st.lists(indices, min_size=1, max_size=3))
def test_krull_schmidt_base_change(parts):
    small = RINGEL.with_field(PrimeField(101))
    us_big, us_small = uniserials(RINGEL), uniserials(small)
    big = decompose(direct_sum([us_big[i] for i in parts]).module)
    sm = decompose(direct_sum([us_small[i] for i in parts]).module)
    key = lambda d: sorted((s.dims, k) for s, k in d.summands)
    assert key(big) == key(sm)


@settings(max_examples=20, deadline=None)
@given(st.lists(indices, min_size=1, max_size=3))
def test_syzygy_additive(parts):
    us = uniserials(RINGEL)
    total = syzygy(direct_sum([us[i] for i in parts]).module)
    pieces = [syzygy(us[i]) for i in parts]
    nonzero = [p for p in pieces if not p.is_zero()]
    assert total.dim == sum(p.dim for p in pieces)
    if nonzero:
        assert is_isomorphic(total, direct_sum(nonzero).module)


@pytest.mark.parametrize("alg", [K_X2, A2, RINGEL], ids=["kx2", "a2", "665"])
def test_projectives_reflexive(alg):
    for v in range(alg.n_vertices):
        assert biduality(projective(alg, v)).is_iso


def test_identity_and_zero_maps():
    m = uniserial(RINGEL, 0, 3)
    assert ModuleMap.identity(m).is_iso()
    assert ModuleMap.zero(m, m).is_zero()
