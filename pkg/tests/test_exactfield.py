import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmfree.exactfield import CharacteristicError, EchelonSpan, PrimeField, kernel_basis, rref


def minor_rank(m, p):
    """Rank as the size of the largest non-vanishing minor (tiny matrices only)."""
    import sympy

    rows, cols = m.shape
    for r in range(min(rows, cols), 0, -1):
        for ri in itertools.combinations(range(rows), r):
            for ci in itertools.combinations(range(cols), r):
                if int(sympy.Matrix(m[np.ix_(ri, ci)].tolist()).det()) % p:
                    return r
    return 0


small_mats = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: st.lists(st.integers(0, 6), min_size=s[0] * s[1], max_size=s[0] * s[1]).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(s)
    )
)


def test_rejects_composite():
    with pytest.raises(CharacteristicError):
        PrimeField(12)


def test_inverse_roundtrip():
    f = PrimeField(32003)
    for x in (1, 2, 17, 32002):
        assert x * f.inv(x) % 32003 == 1


def test_kernel_of_row_vector_gf5():
    f = PrimeField(5)
    k = kernel_basis(np.array([[1, 1]]), f)
    assert k.shape == (1, 2)
    v = k[0] * f.inv(int(k[0][0])) % 5
    assert list(v) == [1, 4]


def test_rank_against_minors_fixed():
    f = PrimeField(7)
    m = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert f.rank(m) == minor_rank(m, 7) == 2


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_rank_matches_minor_oracle(m):
    assert PrimeField(7).rank(m) == minor_rank(m, 7)


@settings(max_examples=80, deadline=None)
@given(small_mats)
def test_rank_transpose(m):
    f = PrimeField(7)
    assert f.rank(m) == f.rank(m.T)


@settings(max_examples=80, deadline=None)
@given(small_mats)
def test_rank_nullity(m):
    f = PrimeField(7)
    k = f.kernel(m)
    assert f.rank(m) + k.shape[0] == m.shape[1]
    if k.shape[0]:
        assert not f.matmul(m, k.T).any()


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_rref_idempotent_and_deterministic(m):
    f = PrimeField(7)
    r, piv, rank = rref(m, f)
    r2, piv2, rank2 = rref(r, f)
    assert np.array_equal(r, r2) and piv == piv2 and rank == rank2
    assert np.array_equal(rref(m.copy(), f)[0], r)


def test_matmul_large_entries_exact():
    f = PrimeField(32003)
    rng = np.random.default_rng(1)
    a = f.random((40, 300), rng)
    b = f.random((300, 30), rng)
    ref = (a.astype(object) @ b.astype(object)) % 32003
    assert np.array_equal(f.matmul(a, b), ref.astype(np.int64))


def test_solve_and_inverse():
    f = PrimeField(101)
    rng = np.random.default_rng(3)
    while True:
        m = f.random((5, 5), rng)
        if f.is_invertible(m):
            break
    assert np.array_equal(f.matmul(m, f.inverse(m)), f.eye(5))
    b = f.random((5,), rng)
    x = f.solve(m, b)
    assert np.array_equal(f.matmul(m, x.reshape(-1, 1)).ravel(), b)
    assert f.solve(np.array([[1, 0], [0, 0]]), np.array([0, 1])) is None


def test_echelon_span_incremental():
    f = PrimeField(5)
    s = EchelonSpan(f, 3)
    assert s.add([1, 2, 0])
    assert not s.add([2, 4, 0])
    assert s.add([0, 0, 1])
    assert s.contains([3, 1, 4])
    assert s.rank == 2


def test_roots():
    f = PrimeField(7)
    assert sorted(f.roots([6, 0, 1])) == [1, 6]  # x^2 - 1
