"""Complexes of modules on a finite window of degrees.

Cohomological indexing: ``d[i] : X[i] -> X[i + 1]``.  Exactness is checked
by rank bookkeeping, and Hom-exactness by applying ``Hom(e, -)`` or
``Hom(-, e)`` degreewise and comparing ranks of the induced linear maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .modules import (
    AlgebraMismatch,
    Module,
    ModuleMap,
    direct_sum,
    hom,
    image,
    zero_module,
)


class ComplexError(ValueError):
    pass


class IndexOutOfWindow(ComplexError):
    pass


class WindowMismatch(ComplexError):
    pass


class Complex:
    """Terms ``X[lo..hi]`` and differentials ``d[lo..hi-1]``."""

    def __init__(self, lo: int, terms: Sequence[Module], diffs: Sequence[ModuleMap], check: bool = True):
        if not terms:
            raise ComplexError("a complex needs at least one term")
        if len(diffs) != len(terms) - 1:
            raise ComplexError("need exactly one differential between adjacent terms")
        self.lo = int(lo)
        self.hi = self.lo + len(terms) - 1
        self.terms = tuple(terms)
        self.diffs = tuple(diffs)
        for k, d in enumerate(self.diffs):
            if d.source is not self.terms[k] or d.target is not self.terms[k + 1]:
                raise ComplexError(f"differential {self.lo + k} does not match its terms")
        if check:
            self.validate()

    def __repr__(self) -> str:
        dims = ", ".join(str(t.dim) for t in self.terms)
        return f"Complex[{self.lo}..{self.hi}]({dims})"

    @property
    def algebra(self):
        return self.terms[0].algebra

    def __len__(self) -> int:
        return len(self.terms)

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def interior(self) -> range:
        return range(self.lo + 1, self.hi)

    def term(self, i: int) -> Module:
        if not self.lo <= i <= self.hi:
            raise IndexOutOfWindow(f"degree {i} outside [{self.lo}, {self.hi}]")
        return self.terms[i - self.lo]

    def d(self, i: int) -> ModuleMap:
        if not self.lo <= i < self.hi:
            raise IndexOutOfWindow(f"no differential leaves degree {i}")
        return self.diffs[i - self.lo]

    def validate(self) -> None:
        for k in range(len(self.diffs) - 1):
            if not self.diffs[k + 1].compose(self.diffs[k]).is_zero():
                raise ComplexError(f"d o d is nonzero at degree {self.lo + k}")

    def ranks(self) -> list[int]:
        return [d.rank() for d in self.diffs]

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "dims": [list(t.dims) for t in self.terms],
            "differentials": [[b.tolist() for b in d.blocks] for d in self.diffs],
        }


def is_exact_at(c: Complex, i: int) -> bool:
    """``dim ker d[i] = rank d[i-1]``; ``i`` must be interior."""
    if not c.lo < i < c.hi:
        raise IndexOutOfWindow(f"degree {i} is not interior to [{c.lo}, {c.hi}]")
    return c.term(i).dim - c.d(i).rank() == c.d(i - 1).rank()


def is_exact(c: Complex) -> bool:
    ranks = c.ranks()
    for k in range(1, len(c.terms) - 1):
        if c.terms[k].dim - ranks[k] != ranks[k - 1]:
            return False
    return True


def _rank(field, mat: np.ndarray) -> int:
    return field.rank(mat) if mat.size else 0


def hom_ranks(c: Complex, e: Module, direction: str) -> tuple[list[int], list[int]]:
    """Dimensions of the Hom spaces and ranks of the induced maps.

    Covariant: ``Hom(e, X[i]) -> Hom(e, X[i+1])``.  Contravariant:
    ``Hom(X[i+1], e) -> Hom(X[i], e)``.  Both lists are indexed from ``lo``.
    """
    if e.algebra is not c.algebra:
        raise AlgebraMismatch("the test module lives over a different algebra")
    f = e.field
    if direction == "covariant":
        spaces = [hom(e, x) for x in c.terms]
        ranks = []
        for k, d in enumerate(c.diffs):
            h, h2 = spaces[k], spaces[k + 1]
            if h.dim == 0 or h2.dim == 0:
                ranks.append(0)
                continue
            ranks.append(_rank(f, h.post_compose(d)[:, h2.pivots]))
    elif direction == "contravariant":
        spaces = [hom(x, e) for x in c.terms]
        ranks = []
        for k, d in enumerate(c.diffs):
            h, h2 = spaces[k + 1], spaces[k]
            if h.dim == 0 or h2.dim == 0:
                ranks.append(0)
                continue
            ranks.append(_rank(f, h.pre_compose(d)[:, h2.pivots]))
    else:
        raise ValueError(f"direction must be covariant or contravariant, not {direction!r}")
    return [s.dim for s in spaces], ranks


def hom_complex_exactness(c: Complex, e: Module, direction: str) -> bool:
    dims, ranks = hom_ranks(c, e, direction)
    for k in range(1, len(dims) - 1):
        if dims[k] - ranks[k] != ranks[k - 1]:
            return False
    return True


def biexact(c: Complex, e_summands: Iterable[Module]) -> bool:
    """Exact under ``Hom(e, -)`` and ``Hom(-, e)`` for every given summand."""
    for e in e_summands:
        if not hom_complex_exactness(c, e, "covariant"):
            return False
        if not hom_complex_exactness(c, e, "contravariant"):
            return False
    return True


# ---------------------------------------------------------------------------
# chain maps, cones, truncations


@dataclass
class ChainMap:
    source: Complex
    target: Complex
    components: tuple[ModuleMap, ...]  # indexed from source.lo

    def __post_init__(self):
        if (self.source.lo, self.source.hi) != (self.target.lo, self.target.hi):
            raise WindowMismatch("chain maps need equal windows")
        if len(self.components) != len(self.source.terms):
            raise WindowMismatch("one component per degree is required")

    def component(self, i: int) -> ModuleMap:
        return self.components[i - self.source.lo]

    def is_chain_map(self) -> bool:
        for i in range(self.source.lo, self.source.hi):
            lhs = self.component(i + 1).compose(self.source.d(i))
            rhs = self.target.d(i).compose(self.component(i))
            if not (lhs + rhs.scale(-1)).is_zero():
                return False
        return True


def identity_chain_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, tuple(ModuleMap.identity(t) for t in c.terms))


def zero_chain_map(c: Complex, d: Complex) -> ChainMap:
    return ChainMap(c, d, tuple(ModuleMap.zero(x, y) for x, y in zip(c.terms, d.terms)))


def cone(f: ChainMap) -> Complex:
    """``Cone(f)[i] = X[i+1] + Y[i]`` with ``d = [[-dX, 0], [f, dY]]``.

    Terms outside the windows are zero, so the cone lives on
    ``[lo - 1, hi]``."""
    x, y = f.source, f.target
    a = x.algebra
    zero = zero_module(a)

    def xt(i):
        return x.term(i) if x.lo <= i <= x.hi else zero

    def yt(i):
        return y.term(i) if y.lo <= i <= y.hi else zero

    lo, hi = x.lo - 1, x.hi
    sums = [direct_sum([xt(i + 1), yt(i)]) for i in range(lo, hi + 1)]
    diffs = []
    for k, i in enumerate(range(lo, hi)):
        src, tgt = sums[k], sums[k + 1]
        total = ModuleMap.zero(src.module, tgt.module)
        if x.lo <= i + 1 < x.hi:
            total = total + tgt.inclusions[0].compose(x.d(i + 1).scale(-1)).compose(src.projections[0])
        if x.lo <= i + 1 <= x.hi:
            total = total + tgt.inclusions[1].compose(f.component(i + 1)).compose(src.projections[0])
        if y.lo <= i < y.hi:
            total = total + tgt.inclusions[1].compose(y.d(i)).compose(src.projections[1])
        diffs.append(total)
    return Complex(lo, [s.module for s in sums], diffs)


def brutal_truncate(c: Complex, at: int, side: str) -> Complex:
    """Keep degrees ``<= at`` (``side="le"``) or ``>= at`` (``side="ge"``) and
    pad with a zero term beyond the cut."""
    if not c.lo <= at <= c.hi:
        raise IndexOutOfWindow(f"cut {at} outside [{c.lo}, {c.hi}]")
    zero = zero_module(c.algebra)
    if side in ("le", "<="):
        terms = list(c.terms[: at - c.lo + 1]) + [zero]
        diffs = list(c.diffs[: at - c.lo]) + [ModuleMap.zero(terms[-2], zero)]
        return Complex(c.lo, terms, diffs)
    if side in ("ge", ">="):
        terms = [zero] + list(c.terms[at - c.lo :])
        diffs = [ModuleMap.zero(zero, terms[1])] + list(c.diffs[at - c.lo :])
        return Complex(at - 1, terms, diffs)
    raise ValueError(f"side must be 'le' or 'ge', not {side!r}")


def direct_sum_complex(cs: Sequence[Complex]) -> Complex:
    lo, hi = cs[0].lo, cs[0].hi
    for c in cs:
        if (c.lo, c.hi) != (lo, hi):
            raise WindowMismatch("direct sums need equal windows")
    sums = [direct_sum([c.term(i) for c in cs]) for i in range(lo, hi + 1)]
    diffs = []
    for k, i in enumerate(range(lo, hi)):
        src, tgt = sums[k], sums[k + 1]
        total = ModuleMap.zero(src.module, tgt.module)
        for j, c in enumerate(cs):
            total = total + tgt.inclusions[j].compose(c.d(i)).compose(src.projections[j])
        diffs.append(total)
    return Complex(lo, [s.module for s in sums], diffs)


def shift_window(c: Complex, lo: int, hi: int) -> Complex:
    """Restrict to the sub-window ``[lo, hi]``."""
    if not c.lo <= lo <= hi <= c.hi:
        raise WindowMismatch(f"[{lo}, {hi}] is not inside [{c.lo}, {c.hi}]")
    return Complex(lo, c.terms[lo - c.lo : hi - c.lo + 1], c.diffs[lo - c.lo : hi - c.lo])


def reindex(c: Complex, lo: int) -> Complex:
    return Complex(lo, c.terms, c.diffs, check=False)


def conjugate(c: Complex, autos: Sequence[ModuleMap]) -> Complex:
    """Transport the differentials along automorphisms ``autos[i]`` of the
    terms: ``d'[i] = a[i+1] d[i] a[i]^-1``."""
    diffs = []
    for k, d in enumerate(c.diffs):
        diffs.append(autos[k + 1].compose(d).compose(autos[k].inverse()))
    return Complex(c.lo, c.terms, diffs)


def two_term(m: Module) -> Complex:
    """``0 -> m -> m -> 0`` with the identity in the middle, degrees -1..2."""
    zero = zero_module(m.algebra)
    return Complex(
        -1,
        [zero, m, m, zero],
        [ModuleMap.zero(zero, m), ModuleMap.identity(m), ModuleMap.zero(m, zero)],
    )


def image_at(c: Complex, i: int) -> Module:
    """``Im d[i]`` as a submodule of ``X[i+1]``."""
    return image(c.d(i))[0]


__all__ = [
    "ChainMap",
    "Complex",
    "ComplexError",
    "IndexOutOfWindow",
    "WindowMismatch",
    "biexact",
    "brutal_truncate",
    "cone",
    "conjugate",
    "direct_sum_complex",
    "hom_complex_exactness",
    "hom_ranks",
    "identity_chain_map",
    "image_at",
    "is_exact",
    "is_exact_at",
    "reindex",
    "shift_window",
    "two_term",
    "zero_chain_map",
]
