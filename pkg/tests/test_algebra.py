import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmfree.algebra import (
    InvalidAdmissibleSequence,
    InvalidPresentation,
    dual_numbers,
    from_structure_constants,
    nakayama_algebra,
    path_algebra,
    primitive_idempotents,
    radical,
)
from cmfree.exactfield import PrimeField
from cmfree.modules import projective


def reversed_cyclic(c):
    """Opposite of a cyclic Nakayama algebra, built by hand from the reversed quiver."""
    n = len(c)
    arrows = [(f"b{i + 1}", (i + 1) % n, i) for i in range(n)]
    # a path a_i a_{i+1} ... of length c_i becomes ... b_{i+1} b_i
    relations = [[f"b{(i + k) % n + 1}" for k in reversed(range(c[i]))] for i in range(n)]
    return path_algebra(n, arrows, relations, name="oracle-op")


def test_invalid_kupisch_series():
    with pytest.raises(InvalidAdmissibleSequence):
        nakayama_algebra(6, 4, 5)


def test_nakayama_dimensions():
    assert nakayama_algebra(6, 6, 5).dim == 17
    assert nakayama_algebra(2, 1, shape="linear").dim == 3
    assert dual_numbers().dim == 2


def test_opposite_involution():
    a = nakayama_algebra(6, 6, 5)
    assert a.opposite().opposite() is a
    assert np.array_equal(a.opposite().opposite().table, a.table)


def test_opposite_matches_reversed_quiver():
    a = nakayama_algebra(6, 6, 5)
    op = a.opposite()
    oracle = reversed_cyclic((6, 6, 5))
    assert op.dim == oracle.dim
    assert np.array_equal(op.cartan_matrix(), a.cartan_matrix().T)
    assert np.array_equal(op.cartan_matrix(), oracle.cartan_matrix())
    assert sorted(projective(op, v).dim for v in range(3)) == sorted(projective(oracle, v).dim for v in range(3))


@pytest.mark.parametrize("make", [lambda: nakayama_algebra(4, 4, 4), lambda: nakayama_algebra(3, 2, 1, shape="linear")])
def test_opposite_anti_isomorphism(make):
    a = make()
    op = a.opposite()
    rng = np.random.default_rng(0)
    f = a.field
    for _ in range(20):
        x, y = f.random((a.dim,), rng), f.random((a.dim,), rng)
        assert np.array_equal(op.multiply(x, y), a.multiply(y, x))


def test_radical_examples():
    f = PrimeField(32003)
    kk = np.zeros((2, 2, 2), dtype=np.int64)
    kk[0, 0, 0] = kk[1, 1, 1] = 1
    assert radical(kk, f).shape[0] == 0
    r = radical(dual_numbers())
    assert r.shape[0] == 1 and r[0][0] == 0 and r[0][1] != 0
    assert radical(nakayama_algebra(6, 6, 5)).shape[0] == 14


@pytest.mark.parametrize("c", [(2,), (4, 4, 4), (6, 6, 5), (3, 3, 2, 1)])
def test_idempotents_sum_to_unit(c):
    shape = "linear" if c[-1] == 1 else "cyclic"
    a = nakayama_algebra(*c, shape=shape)
    assert np.array_equal(a.field.reduce(sum(a.idempotents)), a.unit)
    found = primitive_idempotents(a)
    assert len(found) == a.n_vertices
    assert np.array_equal(a.field.reduce(sum(found)), a.unit)
    for i, e in enumerate(found):
        for j, g in enumerate(found):
            prod = a.multiply(e, g)
            assert np.array_equal(prod, e if i == j else np.zeros_like(e))


@pytest.mark.parametrize("c", [(2,), (4, 4, 4), (6, 6, 5)])
def test_radical_is_nilpotent_ideal(c):
    a = nakayama_algebra(*c)
    rad = radical(a)
    f = a.field
    rng = np.random.default_rng(1)
    span = f.rank(rad)
    for _ in range(10):
        r = f.matmul(f.random((1, rad.shape[0]), rng), rad)[0]
        x = f.random((a.dim,), rng)
        for prod in (a.multiply(x, r), a.multiply(r, x)):
            assert f.rank(np.vstack([rad, prod])) == span
    power = r
    for _ in range(max(c)):
        power = a.multiply(power, r)
    assert not power.any()


def test_structure_constants_readback():
    a = nakayama_algebra(3, 3)
    b = from_structure_constants(a.table, a.field, labels=a.labels, name="copy")
    assert b.dim == a.dim and b.n_vertices == a.n_vertices
    assert np.array_equal(np.sort(b.cartan_matrix(), axis=None), np.sort(a.cartan_matrix(), axis=None))


def test_with_field_keeps_shape():
    a = nakayama_algebra(6, 6, 5)
    b = a.with_field(PrimeField(101))
    assert b.p == 101 and b.dim == 17
    assert np.array_equal(a.cartan_matrix(), b.cartan_matrix())


def test_bad_relation_rejected():
    with pytest.raises(InvalidPresentation):
        path_algebra(3, [("a", 0, 1), ("b", 2, 0)], [["a", "b"]])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(2, 5), min_size=1, max_size=3))
def test_kupisch_cartan_row_sums(c):
    c = tuple(c)
    n = len(c)
    if any(c[(i + 1) % n] < c[i] - 1 for i in range(n)):
        with pytest.raises(InvalidAdmissibleSequence):
            nakayama_algebra(*c)
        return
    a = nakayama_algebra(*c)
    assert a.dim == sum(c)
    assert [projective(a, v).dim for v in range(n)] == list(c)
