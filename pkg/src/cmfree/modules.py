"""Finite-dimensional left modules and their homological calculus.

A module over a basic algebra is stored as a representation of its Gabriel
quiver: one vector space per vertex (``dims``) and one block per generator
mapping the source-vertex space to the target-vertex space.  Module maps
are block diagonal, one block per vertex.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import Algebra, CharacteristicTooSmall, NonSplitAlgebra
from .exactfield import EchelonSpan, PrimeField


class AlgebraMismatch(ValueError):
    pass


class ModuleError(ValueError):
    pass


def _rows(x, ncols: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.size == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return x.reshape(-1, ncols)


def _as_block(m, rows: int, cols: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    return m.reshape(rows, cols)


class Module:
    """Left module given by generator actions on vertex spaces."""

    def __init__(
        self,
        algebra: Algebra,
        dims: Sequence[int],
        acts: Sequence[np.ndarray],
        label: str = "",
        check: bool = False,
    ):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n_vertices:
            raise ModuleError("one dimension per vertex is required")
        p = algebra.p
        blocks = []
        for k, g in enumerate(algebra.generators):
            s, t = algebra.gen_source[k], algebra.gen_target[k]
            blocks.append(np.mod(_as_block(acts[k], self.dims[t], self.dims[s]), p))
        self.acts = tuple(blocks)
        self.label = label
        if check:
            self.validate()

    def __repr__(self) -> str:
        name = self.label or "Module"
        return f"{name}{list(self.dims)}"

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @cached_property
    def dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for d in self.dims:
            out.append(out[-1] + d)
        return tuple(out)

    def is_zero(self) -> bool:
        return self.dim == 0

    # -- actions ---------------------------------------------------------

    @cached_property
    def word_actions(self) -> tuple[np.ndarray, ...]:
        a = self.algebra
        f = self.field
        out: list[np.ndarray] = []
        for w, (k, parent) in enumerate(a.word_parent):
            if k < 0:
                out.append(np.eye(self.dims[parent], dtype=np.int64))
            else:
                out.append(f.matmul(self.acts[k], out[parent]))
        return tuple(out)

    def basis_action(self, b: int) -> np.ndarray:
        """Block of basis element ``b`` from vertex ``source[b]`` to ``target[b]``."""
        return self._basis_actions[b]

    @cached_property
    def _basis_actions(self) -> tuple[np.ndarray, ...]:
        a = self.algebra
        words = self.word_actions
        if a.to_words is None:
            return words
        f = self.field
        out = []
        for b in range(a.dim):
            s, t = int(a.source[b]), int(a.target[b])
            acc = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
            for w in np.flatnonzero(a.to_words[b]):
                acc = acc + int(a.to_words[b, w]) * words[w]
            out.append(np.mod(acc, f.p))
        return tuple(out)

    def action_matrix(self, b: int) -> np.ndarray:
        """Full ``dim x dim`` matrix of basis element ``b``."""
        a = self.algebra
        full = np.zeros((self.dim, self.dim), dtype=np.int64)
        s, t = int(a.source[b]), int(a.target[b])
        full[self.offsets[t] : self.offsets[t + 1], self.offsets[s] : self.offsets[s + 1]] = self.basis_action(b)
        return full

    def validate(self) -> None:
        """The generator actions extend to an algebra morphism."""
        a = self.algebra
        f = self.field
        for k, g in enumerate(a.generators):
            for b in range(a.dim):
                if a.source[g] != a.target[b]:
                    continue
                lhs = f.matmul(self.acts[k], self.basis_action(b))
                coeffs = a.table[g, b]
                s, t = int(a.source[b]), int(a.target[g])
                rhs = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
                for c in np.flatnonzero(coeffs):
                    rhs = rhs + int(coeffs[c]) * self.basis_action(int(c))
                if not np.array_equal(lhs, np.mod(rhs, f.p)):
                    raise ModuleError(f"action violates the relation g{k} * b{b}")

    def act(self, b: int, vec: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.basis_action(b), vec)

    # -- elementary invariants ------------------------------------------

    @cached_property
    def radical_spaces(self) -> tuple[np.ndarray, ...]:
        """Row-reduced bases of ``(rad M)_v``."""
        a = self.algebra
        f = self.field
        out = []
        for v in range(a.n_vertices):
            cols = [self.acts[k].T for k in range(len(a.generators)) if a.gen_target[k] == v and self.acts[k].size]
            if cols and self.dims[v]:
                out.append(f.row_basis(np.vstack(cols)))
            else:
                out.append(np.zeros((0, self.dims[v]), dtype=np.int64))
        return tuple(out)

    @cached_property
    def top_dims(self) -> tuple[int, ...]:
        return tuple(self.dims[v] - self.radical_spaces[v].shape[0] for v in range(len(self.dims)))

    @cached_property
    def socle_dims(self) -> tuple[int, ...]:
        a = self.algebra
        f = self.field
        out = []
        for v in range(a.n_vertices):
            rows = [self.acts[k] for k in range(len(a.generators)) if a.gen_source[k] == v and self.acts[k].size]
            if not self.dims[v]:
                out.append(0)
            elif rows:
                out.append(self.dims[v] - f.rank(np.vstack(rows)))
            else:
                out.append(self.dims[v])
        return tuple(out)

    @cached_property
    def signature(self) -> tuple:
        return (self.dims, self.top_dims, self.socle_dims)


# ---------------------------------------------------------------------------
# maps


class ModuleMap:
    """Module homomorphism; ``blocks[v]`` maps ``source_v`` to ``target_v``."""

    def __init__(self, source: Module, target: Module, blocks: Sequence[np.ndarray]):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("maps must stay over one algebra")
        self.source = source
        self.target = target
        p = source.algebra.p
        self.blocks = tuple(
            np.mod(_as_block(b, target.dims[v], source.dims[v]), p) for v, b in enumerate(blocks)
        )

    def __repr__(self) -> str:
        return f"ModuleMap({self.source!r} -> {self.target!r})"

    @property
    def field(self) -> PrimeField:
        return self.source.field

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModuleMap":
        return cls(source, target, [np.zeros((target.dims[v], source.dims[v]), np.int64) for v in range(len(source.dims))])

    @classmethod
    def identity(cls, m: Module) -> "ModuleMap":
        return cls(m, m, [np.eye(d, dtype=np.int64) for d in m.dims])

    @property
    def matrix(self) -> np.ndarray:
        """Full ``target.dim x source.dim`` block-diagonal matrix."""
        out = np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        for v, b in enumerate(self.blocks):
            out[self.target.offsets[v] : self.target.offsets[v + 1], self.source.offsets[v] : self.source.offsets[v + 1]] = b
        return out

    def vector(self) -> np.ndarray:
        return np.concatenate([b.reshape(-1) for b in self.blocks]) if self.blocks else np.zeros(0, np.int64)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        if other.target is not self.source:
            raise ModuleError("maps are not composable")
        f = self.field
        return ModuleMap(other.source, self.target, [f.matmul(a, b) for a, b in zip(self.blocks, other.blocks)])

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)])

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [b * int(c) for b in self.blocks])

    def rank(self) -> int:
        f = self.field
        return sum(f.rank(b) for b in self.blocks if b.size)

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.rank() == self.source.dim

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_homomorphism(self) -> bool:
        a = self.source.algebra
        f = self.field
        for k in range(len(a.generators)):
            s, t = a.gen_source[k], a.gen_target[k]
            lhs = f.matmul(self.blocks[t], self.source.acts[k])
            rhs = f.matmul(self.target.acts[k], self.blocks[s])
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def inverse(self) -> "ModuleMap":
        f = self.field
        return ModuleMap(self.target, self.source, [f.inverse(b) if b.size else b.T for b in self.blocks])


# ---------------------------------------------------------------------------
# hom spaces


class HomSpace:
    """Basis (rows, reduced echelon form) of ``Hom(source, target)`` in the
    flattened block coordinates."""

    def __init__(self, source: Module, target: Module, basis: np.ndarray):
        self.source = source
        self.target = target
        self.basis = basis
        self.pivots = [int(np.flatnonzero(row)[0]) for row in basis]
        offs = [0]
        for v in range(len(source.dims)):
            offs.append(offs[-1] + target.dims[v] * source.dims[v])
        self.var_offsets = tuple(offs)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self) -> int:
        return self.dim

    def block(self, vec: np.ndarray, v: int) -> np.ndarray:
        return vec[self.var_offsets[v] : self.var_offsets[v + 1]].reshape(self.target.dims[v], self.source.dims[v])

    def to_map(self, vec: np.ndarray) -> ModuleMap:
        return ModuleMap(self.source, self.target, [self.block(vec, v) for v in range(len(self.source.dims))])

    def map(self, i: int) -> ModuleMap:
        return self.to_map(self.basis[i])

    def maps(self) -> list[ModuleMap]:
        return [self.map(i) for i in range(self.dim)]

    def coords(self, vec: np.ndarray) -> np.ndarray:
        """Coordinates of a vector known to lie in the span."""
        return np.asarray(vec, dtype=np.int64)[self.pivots]

    def random(self, rng: np.random.Generator) -> ModuleMap:
        f = self.source.field
        if not self.dim:
            return ModuleMap.zero(self.source, self.target)
        return self.to_map(f.matmul(f.random(self.dim, rng), self.basis))

    def post_compose(self, g: ModuleMap) -> np.ndarray:
        """Rows ``g o f_i`` flattened in ``Hom(source, g.target)`` coordinates."""
        f = self.source.field
        n = len(self.source.dims)
        parts = []
        for v in range(n):
            blocks = self.basis[:, self.var_offsets[v] : self.var_offsets[v + 1]].reshape(
                self.dim, self.target.dims[v], self.source.dims[v]
            )
            comp = np.einsum("ij,kjl->kil", g.blocks[v], blocks) % f.p if blocks.size and g.blocks[v].size else np.zeros(
                (self.dim, g.target.dims[v], self.source.dims[v]), dtype=np.int64
            )
            parts.append(comp.reshape(self.dim, -1))
        return np.concatenate(parts, axis=1) if parts else np.zeros((self.dim, 0), np.int64)

    def pre_compose(self, g: ModuleMap) -> np.ndarray:
        """Rows ``f_i o g`` flattened in ``Hom(g.source, target)`` coordinates."""
        f = self.source.field
        n = len(self.source.dims)
        parts = []
        for v in range(n):
            blocks = self.basis[:, self.var_offsets[v] : self.var_offsets[v + 1]].reshape(
                self.dim, self.target.dims[v], self.source.dims[v]
            )
            comp = np.einsum("kij,jl->kil", blocks, g.blocks[v]) % f.p if blocks.size and g.blocks[v].size else np.zeros(
                (self.dim, self.target.dims[v], g.source.dims[v]), dtype=np.int64
            )
            parts.append(comp.reshape(self.dim, -1))
        return np.concatenate(parts, axis=1) if parts else np.zeros((self.dim, 0), np.int64)


def _check_same(m: Module, n: Module) -> None:
    if m.algebra is not n.algebra:
        raise AlgebraMismatch(f"{m!r} and {n!r} live over different algebras")


def hom(m: Module, n: Module) -> HomSpace:
    """Basis of ``Hom_A(m, n)`` from the intertwining equations."""
    _check_same(m, n)
    a = m.algebra
    f = m.field
    nv = a.n_vertices
    offs = [0]
    for v in range(nv):
        offs.append(offs[-1] + n.dims[v] * m.dims[v])
    nvars = offs[-1]
    rows = []
    for k in range(len(a.generators)):
        s, t = a.gen_source[k], a.gen_target[k]
        neq = n.dims[t] * m.dims[s]
        if neq == 0:
            continue
        eq = np.zeros((neq, nvars), dtype=np.int64)
        # f_t A_M - A_N f_s = 0, row-major vec(X B) = (I kron B^T) vec X
        if n.dims[t] * m.dims[t]:
            eq[:, offs[t] : offs[t + 1]] += np.kron(np.eye(n.dims[t], dtype=np.int64), m.acts[k].T)
        if n.dims[s] * m.dims[s]:
            eq[:, offs[s] : offs[s + 1]] -= np.kron(n.acts[k], np.eye(m.dims[s], dtype=np.int64))
        rows.append(eq)
    if nvars == 0:
        return HomSpace(m, n, np.zeros((0, 0), dtype=np.int64))
    if rows:
        system = np.mod(np.vstack(rows), f.p)
        basis = f.kernel(system)
    else:
        basis = np.eye(nvars, dtype=np.int64)
    basis = f.row_basis(basis) if basis.shape[0] else basis
    return HomSpace(m, n, basis)


def hom_dim(m: Module, n: Module) -> int:
    if m.is_zero() or n.is_zero():
        return 0
    return hom(m, n).dim


# ---------------------------------------------------------------------------
# constructions


def zero_module(a: Algebra) -> Module:
    return Module(a, [0] * a.n_vertices, [np.zeros((0, 0))] * len(a.generators), label="0")


def projective(a: Algebra, v: int) -> Module:
    """The indecomposable projective ``A e_v``."""
    ordered = projective_basis(a, v)
    dims = [len(ordered[u]) for u in range(a.n_vertices)]
    acts = []
    for k, g in enumerate(a.generators):
        s, t = a.gen_source[k], a.gen_target[k]
        acts.append(a.table[g][np.ix_(ordered[s], ordered[t])].T if ordered[s] and ordered[t] else np.zeros((dims[t], dims[s])))
    return Module(a, dims, acts, label=f"P{v + 1}")


def projective_basis(a: Algebra, v: int) -> list[list[int]]:
    """Basis indices of ``A e_v`` grouped by target vertex."""
    out: list[list[int]] = [[] for _ in range(a.n_vertices)]
    for b in a.basis_from(v):
        out[int(a.target[b])].append(b)
    return out


def regular_module(a: Algebra) -> Module:
    return direct_sum([projective(a, v) for v in range(a.n_vertices)], label="A").module


def simple(a: Algebra, v: int) -> Module:
    dims = [1 if u == v else 0 for u in range(a.n_vertices)]
    acts = [np.zeros((dims[a.gen_target[k]], dims[a.gen_source[k]])) for k in range(len(a.generators))]
    return Module(a, dims, acts, label=f"S{v + 1}")


def dual(m: Module) -> Module:
    """``D m = Hom_k(m, k)`` as a left module over the opposite algebra."""
    op = m.algebra.opposite()
    return Module(op, m.dims, [b.T for b in m.acts], label=f"D({m.label})" if m.label else "")


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), [b.T for b in f.blocks])


def injective(a: Algebra, v: int) -> Module:
    """``D(e_v A)``: dual of the projective of the opposite algebra at ``v``."""
    m = dual(projective(a.opposite(), v))
    m.label = f"I{v + 1}"
    return m


@dataclass
class DirectSum:
    module: Module
    inclusions: list[ModuleMap]
    projections: list[ModuleMap]


def direct_sum(mods: Sequence[Module], label: str = "") -> DirectSum:
    if not mods:
        raise ModuleError("empty direct sum")
    a = mods[0].algebra
    for m in mods:
        _check_same(mods[0], m)
    nv = a.n_vertices
    dims = [sum(m.dims[v] for m in mods) for v in range(nv)]
    acts = []
    for k in range(len(a.generators)):
        s, t = a.gen_source[k], a.gen_target[k]
        block = np.zeros((dims[t], dims[s]), dtype=np.int64)
        r = c = 0
        for m in mods:
            block[r : r + m.dims[t], c : c + m.dims[s]] = m.acts[k]
            r += m.dims[t]
            c += m.dims[s]
        acts.append(block)
    total = Module(a, dims, acts, label=label or " + ".join(m.label or "?" for m in mods))
    incs, projs = [], []
    starts = [0] * nv
    for m in mods:
        inc_blocks, proj_blocks = [], []
        for v in range(nv):
            inc = np.zeros((dims[v], m.dims[v]), dtype=np.int64)
            inc[starts[v] : starts[v] + m.dims[v]] = np.eye(m.dims[v], dtype=np.int64)
            inc_blocks.append(inc)
            proj_blocks.append(inc.T.copy())
            starts[v] += m.dims[v]
        incs.append(ModuleMap(m, total, inc_blocks))
        projs.append(ModuleMap(total, m, proj_blocks))
    return DirectSum(total, incs, projs)


def direct_sum_maps(maps: Sequence[ModuleMap], source: DirectSum, target: DirectSum) -> ModuleMap:
    """Diagonal map between direct sums."""
    total = ModuleMap.zero(source.module, target.module)
    for k, g in enumerate(maps):
        total = total + target.inclusions[k].compose(g).compose(source.projections[k])
    return total


def submodule(m: Module, spaces: Sequence[np.ndarray], label: str = "", check: bool = True) -> tuple[Module, ModuleMap]:
    """Submodule spanned per vertex by the given rows, with its inclusion."""
    a = m.algebra
    f = m.field
    bases = []
    for v in range(a.n_vertices):
        rows = _rows(spaces[v], m.dims[v])
        bases.append(f.row_basis(rows) if rows.shape[0] else rows)
    pivots = [[int(np.flatnonzero(r)[0]) for r in b] for b in bases]
    dims = [b.shape[0] for b in bases]
    acts = []
    for k in range(len(a.generators)):
        s, t = a.gen_source[k], a.gen_target[k]
        if dims[s] == 0 or dims[t] == 0:
            acts.append(np.zeros((dims[t], dims[s])))
            if check and dims[s] and m.dims[t] and f.matmul(m.acts[k], bases[s].T).any():
                raise ModuleError("subspace is not closed under the action")
            continue
        img = f.matmul(m.acts[k], bases[s].T)  # columns in m_t
        coords = img[pivots[t], :]
        if check and not np.array_equal(f.matmul(bases[t].T, coords), img):
            raise ModuleError("subspace is not closed under the action")
        acts.append(coords)
    sub = Module(a, dims, acts, label=label)
    inc = ModuleMap(sub, m, [b.T for b in bases])
    return sub, inc


def quotient(m: Module, spaces: Sequence[np.ndarray], label: str = "") -> tuple[Module, ModuleMap]:
    """Quotient by the submodule spanned per vertex by the given rows, with
    the projection.  The quotient basis is the standard basis on non-pivot
    coordinates."""
    a = m.algebra
    f = m.field
    projs = []
    lifts = []
    for v in range(a.n_vertices):
        rows = _rows(spaces[v], m.dims[v])
        basis = f.row_basis(rows) if rows.shape[0] else rows
        piv = [int(np.flatnonzero(r)[0]) for r in basis]
        free = [c for c in range(m.dims[v]) if c not in set(piv)]
        # x -> (x - B^T x[piv])[free]
        red = np.eye(m.dims[v], dtype=np.int64)
        if piv:
            sel = np.zeros((len(piv), m.dims[v]), dtype=np.int64)
            sel[np.arange(len(piv)), piv] = 1
            red = np.mod(red - f.matmul(basis.T, sel), f.p)
        projs.append(red[free, :])
        lift = np.zeros((m.dims[v], len(free)), dtype=np.int64)
        lift[free, np.arange(len(free))] = 1
        lifts.append(lift)
    dims = [pr.shape[0] for pr in projs]
    acts = []
    for k in range(len(a.generators)):
        s, t = a.gen_source[k], a.gen_target[k]
        acts.append(f.chain(projs[t], m.acts[k], lifts[s]) if dims[s] and dims[t] else np.zeros((dims[t], dims[s])))
    q = Module(a, dims, acts, label=label)
    return q, ModuleMap(m, q, projs)


def generated_submodule(m: Module, vectors: Sequence[tuple[int, np.ndarray]], label: str = "") -> tuple[Module, ModuleMap]:
    """Submodule generated by ``(vertex, vector)`` pairs."""
    a = m.algebra
    f = m.field
    spans = [EchelonSpan(f, m.dims[v]) for v in range(a.n_vertices)]
    queue = []
    for v, vec in vectors:
        if spans[v].add(vec):
            queue.append((v, np.mod(np.asarray(vec, dtype=np.int64), f.p)))
    while queue:
        v, vec = queue.pop()
        for k in range(len(a.generators)):
            if a.gen_source[k] != v:
                continue
            t = a.gen_target[k]
            img = f.matmul(m.acts[k], vec)
            if img.any() and spans[t].add(img):
                queue.append((t, img))
    return submodule(m, [s.rows for s in spans], label=label, check=False)


def kernel(g: ModuleMap, label: str = "") -> tuple[Module, ModuleMap]:
    f = g.field
    spaces = []
    for v, b in enumerate(g.blocks):
        n = g.source.dims[v]
        spaces.append(f.kernel(b) if n and b.shape[0] else np.eye(n, dtype=np.int64))
    return submodule(g.source, spaces, label=label, check=False)


def image(g: ModuleMap, label: str = "") -> tuple[Module, ModuleMap]:
    f = g.field
    spaces = []
    for v, b in enumerate(g.blocks):
        spaces.append(f.row_basis(b.T) if b.size else np.zeros((0, g.target.dims[v]), dtype=np.int64))
    return submodule(g.target, spaces, label=label, check=False)


def cokernel(g: ModuleMap, label: str = "") -> tuple[Module, ModuleMap]:
    f = g.field
    spaces = [f.row_basis(b.T) if b.size else np.zeros((0, g.target.dims[v]), np.int64) for v, b in enumerate(g.blocks)]
    return quotient(g.target, spaces, label=label)


def radical_submodule(m: Module) -> tuple[Module, ModuleMap]:
    return submodule(m, m.radical_spaces, check=False)


# ---------------------------------------------------------------------------
# projective covers and syzygies


@dataclass
class ProjectiveCover:
    projective: Module
    map: ModuleMap
    tops: list[int]  # vertex of each indecomposable summand, in order


def _top_vectors(m: Module) -> list[tuple[int, np.ndarray]]:
    out = []
    for v in range(len(m.dims)):
        rad = m.radical_spaces[v]
        piv = {int(np.flatnonzero(r)[0]) for r in rad}
        for c in range(m.dims[v]):
            if c not in piv:
                vec = np.zeros(m.dims[v], dtype=np.int64)
                vec[c] = 1
                out.append((v, vec))
    return out


def _orbit_images(m: Module, v: int, vec: np.ndarray) -> dict[int, np.ndarray]:
    """``b . vec`` for every basis element ``b`` of ``A e_v``."""
    a = m.algebra
    f = m.field
    word_vecs: dict[int, np.ndarray] = {}
    for w, (k, parent) in enumerate(a.word_parent):
        if a.word_source[w] != v:
            continue
        if k < 0:
            word_vecs[w] = vec
        else:
            word_vecs[w] = f.matmul(m.acts[k], word_vecs[parent])
    if a.to_words is None:
        return {b: word_vecs[b] for b in a.basis_from(v)}
    out = {}
    for b in a.basis_from(v):
        t = int(a.target[b])
        acc = np.zeros(m.dims[t], dtype=np.int64)
        for w in np.flatnonzero(a.to_words[b]):
            acc = acc + int(a.to_words[b, w]) * word_vecs[int(w)]
        out[b] = np.mod(acc, f.p)
    return out


def projective_cover(m: Module) -> ProjectiveCover:
    """Minimal projective cover built from a basis of the top of ``m``."""
    a = m.algebra
    tops = _top_vectors(m)
    if not tops:
        z = zero_module(a)
        return ProjectiveCover(z, ModuleMap.zero(z, m), [])
    summands = [projective(a, v) for v, _ in tops]
    ds = direct_sum(summands, label=" + ".join(s.label for s in summands))
    blocks = [np.zeros((m.dims[u], ds.module.dims[u]), dtype=np.int64) for u in range(a.n_vertices)]
    cols = [0] * a.n_vertices
    for (v, vec), summ in zip(tops, summands):
        imgs = _orbit_images(m, v, vec)
        order = projective_basis(a, v)
        for u in range(a.n_vertices):
            for b in order[u]:
                blocks[u][:, cols[u]] = imgs[b]
                cols[u] += 1
    return ProjectiveCover(ds.module, ModuleMap(ds.module, m, blocks), [v for v, _ in tops])


@dataclass
class SyzygyStep:
    cover: ProjectiveCover
    syzygy: Module
    inclusion: ModuleMap  # syzygy -> cover.projective


def syzygy_step(m: Module) -> SyzygyStep:
    cov = projective_cover(m)
    om, inc = kernel(cov.map, label=f"Omega({m.label})" if m.label else "")
    return SyzygyStep(cov, om, inc)


def syzygy(m: Module) -> Module:
    return syzygy_step(m).syzygy


def is_projective(m: Module) -> bool:
    if m.is_zero():
        return True
    a = m.algebra
    cover_dim = 0
    for v, t in enumerate(m.top_dims):
        cover_dim += t * len(a.basis_from(v))
    return cover_dim == m.dim


def projective_dim_vector(a: Algebra, v: int) -> tuple[int, ...]:
    return tuple(len(x) for x in projective_basis(a, v))


# ---------------------------------------------------------------------------
# Ext


def _hom_proj_dim(tops: Iterable[int], n: Module) -> int:
    return sum(n.dims[v] for v in tops)


def ext(m: Module, n: Module, i: int) -> int:
    """``dim Ext^i(m, n)`` from a minimal projective resolution of ``m``.

    Uses ``0 -> Hom(K, N) -> Hom(P, N) -> Hom(Omega K, N) -> Ext^1(K, N) -> 0``
    along the resolution, so only Hom dimensions are needed.
    """
    _check_same(m, n)
    if i < 0:
        raise ValueError("degree must be non-negative")
    if i == 0:
        return hom_dim(m, n)
    cur = m
    for _ in range(i - 1):
        cur = syzygy(cur)
        if cur.is_zero():
            return 0
    step = syzygy_step(cur)
    return hom_dim(step.syzygy, n) - _hom_proj_dim(step.cover.tops, n) + hom_dim(cur, n)


def ext_via_injectives(m: Module, n: Module, i: int) -> int:
    """``dim Ext^i(m, n)`` computed as ``Ext^i_{A^op}(D n, D m)``, i.e. from
    an injective coresolution of ``n``."""
    return ext(dual(n), dual(m), i)


# ---------------------------------------------------------------------------
# star, transpose, biduality


def _right_multiplication(a: Algebra, g: int) -> ModuleMap:
    """``x -> x g`` from ``P_t`` to ``P_s`` for ``g`` in ``e_t A e_s``."""
    s, t = int(a.source[g]), int(a.target[g])
    pt, ps = _cached_projective(a, t), _cached_projective(a, s)
    bt, bs = projective_basis(a, t), projective_basis(a, s)
    blocks = []
    for u in range(a.n_vertices):
        if bt[u] and bs[u]:
            blocks.append(a.table[np.ix_(bt[u], [g], bs[u])][:, 0, :].T)
        else:
            blocks.append(np.zeros((len(bs[u]), len(bt[u]))))
    return ModuleMap(pt, ps, blocks)


def _cached_projective(a: Algebra, v: int) -> Module:
    cache = a.__dict__.setdefault("_projectives", {})
    if v not in cache:
        cache[v] = projective(a, v)
    return cache[v]


def projectives(a: Algebra) -> list[Module]:
    return [_cached_projective(a, v) for v in range(a.n_vertices)]


@dataclass
class Star:
    module: Module  # over the opposite algebra
    homs: list[HomSpace]  # homs[v] = Hom(m, P_v)


def star_data(m: Module) -> Star:
    a = m.algebra
    f = m.field
    op = a.opposite()
    homs = [hom(m, _cached_projective(a, v)) for v in range(a.n_vertices)]
    dims = [h.dim for h in homs]
    acts = []
    for k, g in enumerate(a.generators):
        s, t = a.gen_source[k], a.gen_target[k]
        # op generator k goes from t to s: phi -> R_g o phi
        if dims[t] == 0 or dims[s] == 0:
            acts.append(np.zeros((dims[s], dims[t])))
            continue
        rg = _right_multiplication(a, g)
        comp = homs[t].post_compose(rg)
        acts.append(comp[:, homs[s].pivots].T)
    mod = Module(op, dims, acts, label=f"{m.label}*" if m.label else "")
    return Star(mod, homs)


def star(m: Module) -> Module:
    """``Hom_A(m, A)`` as a left module over the opposite algebra."""
    return star_data(m).module


def star_map(g: ModuleMap, src: Optional[Star] = None, tgt: Optional[Star] = None) -> ModuleMap:
    """``g* : target* -> source*``, ``phi -> phi o g``."""
    src = src or star_data(g.source)
    tgt = tgt or star_data(g.target)
    blocks = []
    for v in range(len(g.source.dims)):
        h_t = tgt.homs[v]
        if h_t.dim == 0 or src.homs[v].dim == 0:
            blocks.append(np.zeros((src.homs[v].dim, h_t.dim)))
            continue
        comp = h_t.pre_compose(g)
        blocks.append(comp[:, src.homs[v].pivots].T)
    return ModuleMap(tgt.module, src.module, blocks)


def minimal_presentation(m: Module) -> tuple[ProjectiveCover, ProjectiveCover, ModuleMap]:
    """``P1 -> P0 -> m -> 0`` with the composite differential."""
    step = syzygy_step(m)
    cov1 = projective_cover(step.syzygy)
    d1 = step.inclusion.compose(cov1.map)
    return cov1, step.cover, d1


def transpose(m: Module) -> Module:
    """Auslander-Bridger transpose over the opposite algebra."""
    _, _, d1 = minimal_presentation(m)
    tr, _ = cokernel(star_map(d1), label=f"Tr({m.label})" if m.label else "")
    return tr


@dataclass
class Biduality:
    double_star: Module
    evaluation: ModuleMap

    @property
    def rank_deficit(self) -> int:
        return max(self.evaluation.source.dim, self.evaluation.target.dim) - self.evaluation.rank()

    @property
    def is_iso(self) -> bool:
        return self.evaluation.is_iso()


def biduality(m: Module) -> Biduality:
    """The evaluation map ``m -> m**``, ``x -> (phi -> phi(x))``."""
    a = m.algebra
    f = m.field
    st = star_data(m)
    n = st.module
    op = a.opposite()
    homs2 = [hom(n, _cached_projective(op, u)) for u in range(a.n_vertices)]
    dims2 = [h.dim for h in homs2]
    acts = []
    for k, g in enumerate(op.generators):
        s, t = op.gen_source[k], op.gen_target[k]
        if dims2[t] == 0 or dims2[s] == 0:
            acts.append(np.zeros((dims2[s], dims2[t])))
            continue
        rg = _right_multiplication(op, g)
        comp = homs2[t].post_compose(rg)
        acts.append(comp[:, homs2[s].pivots].T)
    mm = Module(a, dims2, acts, label=f"{m.label}**" if m.label else "")
    blocks = []
    for u in range(a.n_vertices):
        h2 = homs2[u]
        if m.dims[u] == 0 or h2.dim == 0:
            blocks.append(np.zeros((h2.dim, m.dims[u])))
            continue
        cols = []
        for x in range(m.dims[u]):
            parts = []
            for v in range(a.n_vertices):
                h = st.homs[v]
                if h.dim == 0:
                    parts.append(np.zeros(h2.var_offsets[v + 1] - h2.var_offsets[v], dtype=np.int64))
                    continue
                # phi_j(x) in (P_v)_u for each j: column x of block u
                vals = np.stack([h.block(h.basis[j], u)[:, x] for j in range(h.dim)], axis=1)
                parts.append(vals.reshape(-1))
            vec = np.concatenate(parts)
            cols.append(h2.coords(vec))
        blocks.append(np.stack(cols, axis=1))
    return Biduality(mm, ModuleMap(m, mm, blocks))


# ---------------------------------------------------------------------------
# decomposition and isomorphism


def is_indecomposable(m: Module) -> bool:
    if m.is_zero():
        return False
    return _semisimple_rank(hom(m, m)) == 1


def _semisimple_rank(h: HomSpace) -> int:
    """``dim End/rad End`` from the trace form of End acting on the module."""
    m = h.source
    f = m.field
    if f.p <= m.dim:
        raise CharacteristicTooSmall(f"characteristic {f.p} must exceed the module dimension {m.dim}")
    k = h.dim
    if k == 0:
        return 0
    direct, transp = [], []
    for v in range(len(m.dims)):
        blocks = h.basis[:, h.var_offsets[v] : h.var_offsets[v + 1]].reshape(k, m.dims[v], m.dims[v])
        direct.append(blocks.reshape(k, -1))
        transp.append(np.transpose(blocks, (0, 2, 1)).reshape(k, -1))
    gram = f.matmul(np.concatenate(direct, axis=1), np.concatenate(transp, axis=1).T)
    return f.rank(gram)


def _eigenvalue(f: PrimeField, mat: np.ndarray, rng: np.random.Generator) -> Optional[int]:
    n = mat.shape[0]
    v = f.random(n, rng)
    seq = [v]
    span = EchelonSpan(f, n)
    span.add(v)
    while True:
        nxt = f.matmul(mat, seq[-1])
        seq.append(nxt)
        if not span.add(nxt):
            break
    rel = f.minimal_relation(seq)
    roots = f.roots(rel)
    return roots[0] if roots else None


@dataclass
class Piece:
    module: Module
    inclusion: ModuleMap
    projection: ModuleMap


def _split(m: Module, rng: np.random.Generator, attempts: int = 64) -> list[Piece]:
    f = m.field
    if m.is_zero():
        return []
    h = hom(m, m)
    if _semisimple_rank(h) == 1:
        ident = ModuleMap.identity(m)
        return [Piece(m, ident, ident)]
    for _ in range(attempts):
        g = h.random(rng)
        full = g.matrix
        lam = _eigenvalue(f, full, rng)
        if lam is None:
            continue
        y = ModuleMap(m, m, [np.mod(b - lam * np.eye(b.shape[0], dtype=np.int64), f.p) for b in g.blocks])
        yn = ModuleMap(m, m, [f.power(b, m.dim) if b.size else b for b in y.blocks])
        r = yn.rank()
        if r == 0 or r == m.dim:
            continue
        ker_mod, ker_inc = kernel(yn)
        img_mod, img_inc = image(yn)
        # projections from the basis change [ker | img]
        blocks_k, blocks_i = [], []
        for v in range(len(m.dims)):
            kb, ib = ker_inc.blocks[v], img_inc.blocks[v]
            if m.dims[v] == 0:
                blocks_k.append(np.zeros((kb.shape[1], 0)))
                blocks_i.append(np.zeros((ib.shape[1], 0)))
                continue
            inv = f.inverse(np.concatenate([kb, ib], axis=1))
            blocks_k.append(inv[: kb.shape[1]])
            blocks_i.append(inv[kb.shape[1] :])
        proj_k = ModuleMap(m, ker_mod, blocks_k)
        proj_i = ModuleMap(m, img_mod, blocks_i)
        out = []
        for sub, inc, proj in ((ker_mod, ker_inc, proj_k), (img_mod, img_inc, proj_i)):
            for piece in _split(sub, rng, attempts):
                out.append(Piece(piece.module, inc.compose(piece.inclusion), piece.projection.compose(proj)))
        return out
    raise NonSplitAlgebra(f"could not split {m!r}: its endomorphism ring does not split over GF({f.p})")


def indecomposable_summands(m: Module, seed: int = 0) -> list[Piece]:
    """Fitting-decomposition of ``m`` into indecomposables."""
    pieces = _split(m, np.random.default_rng(seed))
    for k, piece in enumerate(pieces):
        if not piece.module.label:
            piece.module.label = f"{m.label}[{k}]" if m.label else ""
    return pieces


def iso_indecomposable(x: Module, y: Module, seed: int = 0) -> Optional[ModuleMap]:
    """An isomorphism between indecomposables ``x`` and ``y`` or ``None``.

    A random map is tried first; a negative answer is certified by checking
    that every composite ``g o f`` of basis maps is non-invertible, which for a
    local endomorphism ring means no isomorphism exists."""
    _check_same(x, y)
    if x.dims != y.dims:
        return None
    if x.is_zero():
        return ModuleMap.identity(x)
    hxy = hom(x, y)
    if hxy.dim == 0:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(3):
        g = hxy.random(rng)
        if g.is_iso():
            return g
    hyx = hom(y, x)
    fs = hxy.maps()
    for gmap in hyx.maps():
        for fmap in fs:
            if gmap.compose(fmap).is_iso():
                return fmap
    return None


@dataclass
class Decomposition:
    module: Module
    summands: list[tuple[Module, int]]
    classes: list[int]
    parts: list[Piece]

    @property
    def multiset(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(self.classes).items()))


def decompose(m: Module) -> Decomposition:
    """Krull-Schmidt decomposition with classes from the algebra registry."""
    reg = registry(m.algebra)
    parts = indecomposable_summands(m)
    classes = [reg.identify(p.module) for p in parts]
    order = sorted(range(len(parts)), key=lambda i: (reg.sort_key(classes[i]), i))
    parts = [parts[i] for i in order]
    classes = [classes[i] for i in order]
    counts = Counter(classes)
    seen = []
    for c in classes:
        if c not in seen:
            seen.append(c)
    summands = [(reg.rep(c), counts[c]) for c in seen]
    return Decomposition(m, summands, classes, parts)


def is_isomorphic(m: Module, n: Module) -> bool:
    _check_same(m, n)
    if m.dims != n.dims:
        return False
    if m.is_zero():
        return True
    return decompose(m).multiset == decompose(n).multiset


def find_isomorphism(m: Module, n: Module, seed: int = 0) -> Optional[ModuleMap]:
    """An explicit isomorphism ``m -> n`` assembled summand by summand, or
    ``None`` when the Krull-Schmidt multisets differ."""
    _check_same(m, n)
    if m.dims != n.dims:
        return None
    if m.is_zero():
        return ModuleMap.zero(m, n)
    rng = np.random.default_rng(seed)
    h = hom(m, n)
    for _ in range(2):
        g = h.random(rng)
        if g.is_iso():
            return g
    dm, dn = decompose(m), decompose(n)
    if dm.multiset != dn.multiset:
        return None
    total = ModuleMap.zero(m, n)
    used: set[int] = set()
    for pm, cm in zip(dm.parts, dm.classes):
        j = next(j for j, c in enumerate(dn.classes) if c == cm and j not in used)
        used.add(j)
        iso = iso_indecomposable(pm.module, dn.parts[j].module)
        total = total + dn.parts[j].inclusion.compose(iso).compose(pm.projection)
    if not total.is_iso():
        raise ModuleError("summand isomorphisms failed to assemble")
    return total


# ---------------------------------------------------------------------------
# the per-algebra registry of indecomposable isomorphism classes


class ClassRegistry:
    """Isomorphism classes of indecomposables met so far, with memoised
    syzygies.  Inserts are serialised by a lock; class ids are assigned in
    insertion order."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self._reps: list[Module] = []
        self._by_sig: dict[tuple, list[int]] = {}
        self._syz: dict[int, tuple[tuple[int, int], ...]] = {}
        self._proj: dict[int, bool] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._reps)

    def rep(self, cid: int) -> Module:
        return self._reps[cid]

    def sort_key(self, cid: int) -> tuple:
        m = self._reps[cid]
        return (m.dims, cid)

    def find(self, x: Module) -> Optional[int]:
        for cid in self._by_sig.get(x.signature, []):
            if iso_indecomposable(self._reps[cid], x) is not None:
                return cid
        return None

    def identify(self, x: Module) -> int:
        """Class id of an indecomposable module (inserted if new)."""
        with self._lock:
            cid = self.find(x)
            if cid is not None:
                return cid
            cid = len(self._reps)
            self._reps.append(x)
            self._by_sig.setdefault(x.signature, []).append(cid)
            return cid

    def is_projective(self, cid: int) -> bool:
        if cid not in self._proj:
            self._proj[cid] = is_projective(self._reps[cid])
        return self._proj[cid]

    def classes_of(self, m: Module) -> tuple[tuple[int, int], ...]:
        if m.is_zero():
            return ()
        return decompose(m).multiset

    def syzygy_classes(self, cid: int) -> tuple[tuple[int, int], ...]:
        """Classes (with multiplicity) of the summands of the syzygy."""
        with self._lock:
            if cid not in self._syz:
                rep = self._reps[cid]
                self._syz[cid] = () if self.is_projective(cid) else self.classes_of(syzygy(rep))
            return self._syz[cid]

    def label(self, cid: int) -> str:
        return self._reps[cid].label or f"X{cid}"


def registry(a: Algebra) -> ClassRegistry:
    reg = a.__dict__.get("_registry")
    if reg is None:
        reg = a.__dict__.setdefault("_registry", ClassRegistry(a))
    return reg


# ---------------------------------------------------------------------------
# module families


def radical_power(m: Module, k: int) -> tuple[Module, ModuleMap]:
    cur, inc = m, ModuleMap.identity(m)
    for _ in range(k):
        sub, sub_inc = radical_submodule(cur)
        inc = inc.compose(sub_inc)
        cur = sub
    return cur, inc


def uniserial(a: Algebra, v: int, length: int) -> Module:
    """``P_v / rad^length P_v``."""
    pv = _cached_projective(a, v)
    rad, inc = radical_power(pv, length)
    spaces = [inc.blocks[u].T for u in range(a.n_vertices)]
    q, _ = quotient(pv, spaces, label=f"M({v + 1},{length})")
    return q


def loewy_length(m: Module) -> int:
    k = 0
    cur = m
    while not cur.is_zero():
        cur, _ = radical_submodule(cur)
        k += 1
    return k


def uniserials(a: Algebra) -> list[Module]:
    """All indecomposables of a Nakayama algebra, ordered by (top vertex, length)."""
    if not a.is_nakayama:
        raise ModuleError(f"{a!r} is not a Nakayama algebra")
    out = []
    for v in range(a.n_vertices):
        for length in range(1, loewy_length(_cached_projective(a, v)) + 1):
            out.append(uniserial(a, v, length))
    return out


def path_ideal_modules(a: Algebra) -> list[Module]:
    """``A b`` for every radical basis path ``b`` of a monomial algebra,
    deduplicated up to isomorphism (projectives excluded)."""
    out: list[Module] = []
    seen: list[Module] = []
    for b in a.radical_indices:
        v = int(a.source[b])
        pv = _cached_projective(a, v)
        order = projective_basis(a, v)
        u = int(a.target[b])
        vec = np.zeros(pv.dims[u], dtype=np.int64)
        vec[order[u].index(b)] = 1
        mod, _ = generated_submodule(pv, [(u, vec)], label=f"A.{a.labels[b]}")
        if is_projective(mod):
            continue
        if any(iso_indecomposable(s, mod) is not None for s in seen if s.signature == mod.signature):
            continue
        seen.append(mod)
        out.append(mod)
    return out


__all__ = [
    "AlgebraMismatch",
    "Biduality",
    "ClassRegistry",
    "Decomposition",
    "DirectSum",
    "HomSpace",
    "Module",
    "ModuleError",
    "ModuleMap",
    "Piece",
    "ProjectiveCover",
    "Star",
    "SyzygyStep",
    "biduality",
    "cokernel",
    "decompose",
    "direct_sum",
    "direct_sum_maps",
    "dual",
    "dual_map",
    "ext",
    "ext_via_injectives",
    "generated_submodule",
    "hom",
    "hom_dim",
    "image",
    "indecomposable_summands",
    "injective",
    "is_indecomposable",
    "find_isomorphism",
    "is_isomorphic",
    "is_projective",
    "iso_indecomposable",
    "kernel",
    "loewy_length",
    "minimal_presentation",
    "path_ideal_modules",
    "projective",
    "projective_basis",
    "projective_cover",
    "projectives",
    "quotient",
    "radical_power",
    "radical_submodule",
    "regular_module",
    "registry",
    "simple",
    "star",
    "star_data",
    "star_map",
    "submodule",
    "syzygy",
    "syzygy_step",
    "transpose",
    "uniserial",
    "uniserials",
    "zero_module",
]
