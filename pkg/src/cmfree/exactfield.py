"""Exact dense linear algebra over a prime field GF(p).

Matrices are plain ``numpy`` int64 arrays whose entries are kept reduced
into ``[0, p)``.  Products go through float64 BLAS in chunks small enough
that every partial sum stays below 2**53, so they are exact.
"""

from __future__ import annotations

from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from sympy import isprime

DEFAULT_CHARACTERISTIC = 32003

_EXACT_FLOAT = 2**53


class CharacteristicError(ValueError):
    """Raised for a non-prime or unsupported characteristic."""


class PrimeField:
    """The field GF(p) together with exact matrix kernels over it."""

    def __init__(self, p: int = DEFAULT_CHARACTERISTIC):
        p = int(p)
        if p < 2 or not isprime(p):
            raise CharacteristicError(f"characteristic {p} is not prime")
        if p >= 2**31:
            raise CharacteristicError(f"characteristic {p} exceeds 2**31")
        self.p = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    @cached_property
    def _chunk(self) -> int:
        return max(1, (_EXACT_FLOAT - 1) // ((self.p - 1) ** 2 + 1))

    # -- scalars -------------------------------------------------------

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(x, -1, self.p)

    def reduce(self, m) -> np.ndarray:
        return np.mod(np.asarray(m, dtype=np.int64), self.p)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    # -- products ------------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape[-1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.size == 0 or b.size == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return np.zeros(shape, dtype=np.int64)
        k = a.shape[-1]
        chunk = self._chunk
        af = a.astype(np.float64)
        bf = b.astype(np.float64)
        if k <= chunk:
            return np.mod(af @ bf, self.p).astype(np.int64)
        out = None
        for lo in range(0, k, chunk):
            part = np.mod(af[..., lo : lo + chunk] @ bf[lo : lo + chunk], self.p)
            out = part if out is None else np.mod(out + part, self.p)
        return out.astype(np.int64)

    def chain(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def power(self, m: np.ndarray, k: int) -> np.ndarray:
        result = self.eye(m.shape[0])
        base = m
        while k:
            if k & 1:
                result = self.matmul(result, base)
            k >>= 1
            if k:
                base = self.matmul(base, base)
        return result

    # -- elimination ---------------------------------------------------

    def rref(self, m) -> tuple[np.ndarray, list[int], int]:
        """Reduced row echelon form, pivot columns and rank.

        Pivots are chosen as the first nonzero entry in each column, so the
        result is deterministic.  The input is not modified.
        """
        a = self.reduce(m).copy()
        if a.ndim != 2:
            raise ValueError("rref expects a 2-d matrix")
        rows, cols = a.shape
        p = self.p
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            a[r, c:] = (a[r, c:] * self.inv(a[r, c])) % p
            col = a[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
            pivots.append(c)
            r += 1
        return a, pivots, r

    def rank(self, m) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        if m.shape[0] > m.shape[1]:
            m = m.T
        return self.rref(m)[2]

    def row_basis(self, m) -> np.ndarray:
        """Rows of the reduced echelon form spanning the row space of ``m``."""
        m = np.asarray(m, dtype=np.int64)
        if m.size == 0:
            return np.zeros((0, m.shape[1] if m.ndim == 2 else 0), dtype=np.int64)
        r, _, rk = self.rref(m)
        return r[:rk]

    def kernel(self, m) -> np.ndarray:
        """Rows forming a basis of the right null space ``{x : m x = 0}``."""
        m = np.asarray(m, dtype=np.int64)
        cols = m.shape[1]
        if m.shape[0] == 0:
            return self.eye(cols)
        r, pivots, rk = self.rref(m)
        pivot_set = set(pivots)
        free = [c for c in range(cols) if c not in pivot_set]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for idx, f in enumerate(free):
            basis[idx, f] = 1
            for row, pc in enumerate(pivots):
                basis[idx, pc] = (-r[row, f]) % self.p
        return basis

    def solve(self, m, b) -> Optional[np.ndarray]:
        """Some ``X`` with ``m @ X = b``, or ``None`` when inconsistent."""
        m = np.asarray(m, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vector = b.ndim == 1
        if vector:
            b = b[:, None]
        if m.shape[0] != b.shape[0]:
            raise ValueError(f"row mismatch: {m.shape} vs {b.shape}")
        n = m.shape[1]
        aug = np.concatenate([m, b], axis=1)
        r, pivots, rk = self.rref(aug)
        if any(pc >= n for pc in pivots):
            return None
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        for row, pc in enumerate(pivots):
            x[pc] = r[row, n:]
        return x[:, 0] if vector else x

    def inverse(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        r, pivots, rk = self.rref(np.concatenate([m, self.eye(n)], axis=1))
        if rk < n or pivots[n - 1] >= n:
            raise ZeroDivisionError("matrix is singular")
        return r[:, n:].copy()

    def is_invertible(self, m) -> bool:
        m = np.asarray(m)
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    # -- polynomials (coefficient lists, lowest degree first) -----------

    def minimal_relation(self, vectors: Sequence[np.ndarray]) -> Optional[list[int]]:
        """Monic relation sum c_i v_i = 0 with c_last = 1, if the last vector
        depends on the others."""
        mat = np.stack(vectors[:-1], axis=1) if len(vectors) > 1 else np.zeros((len(vectors[-1]), 0), np.int64)
        sol = self.solve(mat, (-np.asarray(vectors[-1])) % self.p)
        if sol is None:
            return None
        return [int(c) for c in sol] + [1]

    def roots(self, coeffs: Sequence[int]) -> list[int]:
        """Roots in GF(p) of the polynomial with the given coefficients."""
        coeffs = [int(c) % self.p for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) <= 1:
            return []
        if self.p <= 1 << 22:
            xs = np.arange(self.p, dtype=np.int64)
            acc = np.zeros(self.p, dtype=np.int64)
            for c in reversed(coeffs):
                acc = (acc * xs + c) % self.p
            return [int(x) for x in np.flatnonzero(acc == 0)]
        from sympy import GF, Poly, symbols

        x = symbols("x")
        poly = Poly(list(reversed(coeffs)), x, domain=GF(self.p))
        found = []
        for factor, _ in poly.factor_list()[1]:
            if factor.degree() == 1:
                a, b = (int(c) % self.p for c in factor.all_coeffs())
                found.append((-b * self.inv(a)) % self.p)
        return sorted(set(found))


class EchelonSpan:
    """Row space maintained in reduced echelon form; vectors are added one
    at a time."""

    def __init__(self, field: PrimeField, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec) -> np.ndarray:
        v = np.mod(np.asarray(vec, dtype=np.int64), self.field.p)
        if self.pivots:
            v = np.mod(v - self.field.matmul(v[self.pivots], self.rows), self.field.p)
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def add(self, vec) -> bool:
        p = self.field.p
        v = self.reduce(vec)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * self.field.inv(v[c])) % p
        if self.pivots:
            col = self.rows[:, c].copy()
            hit = np.flatnonzero(col)
            if hit.size:
                self.rows[hit] = (self.rows[hit] - np.outer(col[hit], v)) % p
        pos = int(np.searchsorted(self.pivots, c))
        self.rows = np.insert(self.rows, pos, v, axis=0)
        self.pivots.insert(pos, c)
        return True


def rref(m, field: PrimeField) -> tuple[np.ndarray, list[int], int]:
    return field.rref(m)


def kernel_basis(m, field: PrimeField) -> np.ndarray:
    return field.kernel(m)


def solve(m, b, field: PrimeField) -> Optional[np.ndarray]:
    return field.solve(m, b)


__all__ = [
    "DEFAULT_CHARACTERISTIC",
    "CharacteristicError",
    "EchelonSpan",
    "PrimeField",
    "rref",
    "kernel_basis",
    "solve",
]
