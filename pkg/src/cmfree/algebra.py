"""Finite-dimensional basic algebras over GF(p).

Every :class:`Algebra` carries a *Peirce-adapted* basis: each basis element
``b`` lies in ``e_t A e_s`` for a pair of vertices ``(s, t)``, the primitive
idempotents are themselves basis elements and the remaining basis elements
span the Jacobson radical.  Bound quiver algebras with monomial relations
have such a basis for free (paths); structure-constant input is brought into
this form by :func:`from_structure_constants`.

Conventions: a path is written in traversal order ``(a_1, ..., a_k)`` and,
as an algebra element, equals the composite ``a_k ... a_1``.  A basis element
of type ``(s, t)`` acts on a left module from the vertex-``s`` part to the
vertex-``t`` part.  For Nakayama algebras the arrows run ``i -> i+1`` and the
projective at ``i`` has length ``c_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exactfield import DEFAULT_CHARACTERISTIC, EchelonSpan, PrimeField


class AlgebraError(ValueError):
    """Base class for invalid algebra input."""


class InvalidAdmissibleSequence(AlgebraError):
    pass


class InvalidPresentation(AlgebraError):
    pass


class CharacteristicTooSmall(AlgebraError):
    pass


class NonSplitAlgebra(AlgebraError):
    pass


class NonBasicAlgebra(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# quivers and presentations


@dataclass(frozen=True)
class Arrow:
    id: int
    source: int
    target: int
    name: str


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidPresentation("a quiver needs at least one vertex")
        names = set()
        for k, arr in enumerate(self.arrows):
            if arr.id != k:
                raise InvalidPresentation(f"arrow ids must be 0..{len(self.arrows) - 1} in order")
            if not (0 <= arr.source < self.n and 0 <= arr.target < self.n):
                raise InvalidPresentation(f"arrow {arr.name!r} has an endpoint outside [0, {self.n})")
            if arr.name in names:
                raise InvalidPresentation(f"duplicate arrow name {arr.name!r}")
            names.add(arr.name)

    @classmethod
    def from_triples(cls, n: int, triples: Sequence[tuple[str, int, int]]) -> "Quiver":
        return cls(n, tuple(Arrow(k, int(s), int(t), str(name)) for k, (name, s, t) in enumerate(triples)))

    def arrow_named(self, name: str) -> Arrow:
        for arr in self.arrows:
            if arr.name == name:
                return arr
        raise InvalidPresentation(f"unknown arrow {name!r}")

    def opposite(self) -> "Quiver":
        return Quiver(self.n, tuple(Arrow(a.id, a.target, a.source, a.name) for a in self.arrows))


Path = tuple[int, tuple[int, ...]]  # (start vertex, arrow ids in traversal order)


def _ends_with_relation(arrows: tuple[int, ...], relations: set[tuple[int, ...]], lengths: set[int]) -> bool:
    return any(len(arrows) >= l and arrows[-l:] in relations for l in lengths)


@dataclass(frozen=True)
class MonomialPresentation:
    quiver: Quiver
    relations: tuple[tuple[int, ...], ...]
    path_basis: tuple[Path, ...]
    field: PrimeField = dc_field(default_factory=PrimeField)
    name: str = ""
    nakayama: Optional["AdmissibleSequence"] = None

    @classmethod
    def build(
        cls,
        quiver: Quiver,
        relations: Sequence[Sequence[int]],
        field: Optional[PrimeField] = None,
        name: str = "",
        nakayama: Optional["AdmissibleSequence"] = None,
    ) -> "MonomialPresentation":
        rels = tuple(tuple(int(x) for x in r) for r in relations)
        for r in rels:
            if len(r) < 2:
                raise InvalidPresentation(f"relation {r} has length < 2")
            for a, b in zip(r, r[1:]):
                if quiver.arrows[a].target != quiver.arrows[b].source:
                    raise InvalidPresentation(f"relation {r} is not a composable path")
        basis = _enumerate_paths(quiver, rels)
        return cls(quiver, rels, basis, field or PrimeField(), name, nakayama)

    def opposite(self) -> "MonomialPresentation":
        q = self.quiver.opposite()
        rels = tuple(tuple(reversed(r)) for r in self.relations)
        return MonomialPresentation.build(q, rels, self.field, self.name + "^op")


def _enumerate_paths(quiver: Quiver, relations: tuple[tuple[int, ...], ...],
                     limit: int = 20000) -> tuple[Path, ...]:
    rel_set = set(relations)
    lengths = {len(r) for r in relations}
    max_len = max(lengths, default=1)
    out_arrows: dict[int, list[int]] = {v: [] for v in range(quiver.n)}
    for arr in quiver.arrows:
        out_arrows[arr.source].append(arr.id)

    basis: list[Path] = [(v, ()) for v in range(quiver.n)]
    layer: list[Path] = list(basis)
    # whether a path may be extended depends only on its last max_len - 1
    # arrows; a path longer than the number of such states can be pumped
    states = quiver.n if max_len == 1 else None
    length = 0
    while layer:
        length += 1
        nxt: list[Path] = []
        for start, arrows in layer:
            end = quiver.arrows[arrows[-1]].target if arrows else start
            for a in out_arrows[end]:
                cand = arrows + (a,)
                if not _ends_with_relation(cand, rel_set, lengths):
                    nxt.append((start, cand))
        if states is None and length == max_len - 1:
            states = len(nxt)
        if nxt and ((states is not None and length > states + max_len) or len(basis) + len(nxt) > limit):
            raise InvalidPresentation("the presentation is not admissible: relation-free paths are unbounded")
        basis.extend(nxt)
        layer = nxt
    return tuple(basis)


@dataclass(frozen=True)
class AdmissibleSequence:
    values: tuple[int, ...]
    shape: str = "cyclic"

    def __post_init__(self):
        c = self.values
        n = len(c)
        if n == 0:
            raise InvalidAdmissibleSequence("empty sequence")
        if self.shape == "cyclic":
            for i in range(n):
                if c[i] < 2:
                    raise InvalidAdmissibleSequence(f"c_{i + 1} = {c[i]} < 2")
                j = (i + 1) % n
                if c[j] < c[i] - 1:
                    raise InvalidAdmissibleSequence(f"c_{j + 1} = {c[j]} < c_{i + 1} - 1 = {c[i] - 1}")
        elif self.shape == "linear":
            if c[-1] != 1:
                raise InvalidAdmissibleSequence(f"c_{n} = {c[-1]} != 1")
            for i in range(n):
                if c[i] < 1:
                    raise InvalidAdmissibleSequence(f"c_{i + 1} = {c[i]} < 1")
                if c[i] > n - i:
                    raise InvalidAdmissibleSequence(f"c_{i + 1} = {c[i]} > {n - i} (longest path from vertex {i + 1})")
                if i + 1 < n and c[i] > c[i + 1] + 1:
                    raise InvalidAdmissibleSequence(f"c_{i + 1} = {c[i]} > c_{i + 2} + 1 = {c[i + 1] + 1}")
        else:
            raise InvalidAdmissibleSequence(f"unknown shape {self.shape!r}")

    @classmethod
    def cyclic(cls, *values: int) -> "AdmissibleSequence":
        return cls(tuple(int(v) for v in values), "cyclic")

    @classmethod
    def linear(cls, *values: int) -> "AdmissibleSequence":
        return cls(tuple(int(v) for v in values), "linear")

    def label(self) -> str:
        return f"nakayama-{self.shape}({','.join(map(str, self.values))})"


def nakayama(seq: AdmissibleSequence, field: Optional[PrimeField] = None) -> MonomialPresentation:
    """Presentation of the Nakayama algebra with Kupisch series ``seq``."""
    c = seq.values
    n = len(c)
    if seq.shape == "cyclic":
        triples = [(f"a{i + 1}", i, (i + 1) % n) for i in range(n)]
        relations = [tuple((i + k) % n for k in range(c[i])) for i in range(n)]
    else:
        triples = [(f"a{i + 1}", i, i + 1) for i in range(n - 1)]
        relations = [tuple(range(i, i + c[i])) for i in range(n - 1) if i + c[i] <= n - 1]
    quiver = Quiver.from_triples(n, triples)
    return MonomialPresentation.build(quiver, relations, field, seq.label(), seq)


# ---------------------------------------------------------------------------
# algebras


class Algebra:
    """A basic split algebra with a Peirce-adapted basis.

    ``table[i, j]`` holds the coordinates of ``b_i * b_j``.  ``source`` and
    ``target`` give the Peirce type of every basis element, ``idempotent[v]``
    the basis index of the primitive idempotent at vertex ``v`` and
    ``generators`` the basis indices of radical elements spanning
    rad/rad^2.
    """

    def __init__(
        self,
        field: PrimeField,
        table: np.ndarray,
        labels: Sequence[str],
        idempotent: Sequence[int],
        source: Sequence[int],
        target: Sequence[int],
        generators: Sequence[int],
        name: str = "",
        presentation: Optional[MonomialPresentation] = None,
        check: bool = True,
    ):
        self.field = field
        self.table = np.asarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        self.dim = self.table.shape[0]
        self.labels = tuple(labels)
        self.idempotent = tuple(int(i) for i in idempotent)
        self.n_vertices = len(self.idempotent)
        self.source = np.asarray(source, dtype=np.int64)
        self.target = np.asarray(target, dtype=np.int64)
        self.generators = tuple(int(g) for g in generators)
        self.name = name
        self.presentation = presentation
        self._opposite: Optional[Algebra] = None
        self._build_words()
        if check:
            self.validate()

    def __repr__(self) -> str:
        return f"Algebra({self.name or '?'}, dim={self.dim}, vertices={self.n_vertices})"

    # -- basic data ----------------------------------------------------

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def structure_constants(self) -> np.ndarray:
        return self.table

    @cached_property
    def unit(self) -> np.ndarray:
        u = np.zeros(self.dim, dtype=np.int64)
        u[list(self.idempotent)] = 1
        return u

    @cached_property
    def idempotents(self) -> list[np.ndarray]:
        out = []
        for i in self.idempotent:
            e = np.zeros(self.dim, dtype=np.int64)
            e[i] = 1
            out.append(e)
        return out

    @cached_property
    def radical_indices(self) -> tuple[int, ...]:
        idem = set(self.idempotent)
        return tuple(i for i in range(self.dim) if i not in idem)

    @cached_property
    def gen_source(self) -> tuple[int, ...]:
        return tuple(int(self.source[g]) for g in self.generators)

    @cached_property
    def gen_target(self) -> tuple[int, ...]:
        return tuple(int(self.target[g]) for g in self.generators)

    def basis_from(self, v: int) -> list[int]:
        """Basis indices of ``A e_v`` (elements with Peirce source ``v``)."""
        return [int(i) for i in np.flatnonzero(self.source == v)]

    def basis_into(self, v: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.target == v)]

    @cached_property
    def is_monomial(self) -> bool:
        return self.presentation is not None

    @cached_property
    def is_nakayama(self) -> bool:
        """Gabriel quiver has at most one arrow in and out of every vertex."""
        outs = np.bincount(np.asarray(self.gen_source, dtype=np.int64), minlength=self.n_vertices)
        ins = np.bincount(np.asarray(self.gen_target, dtype=np.int64), minlength=self.n_vertices)
        return bool((outs <= 1).all() and (ins <= 1).all())

    # -- arithmetic ----------------------------------------------------

    def multiply(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        f = self.field
        xy = f.matmul(x, self.table.reshape(self.dim, -1)).reshape(self.dim, self.dim)
        return f.matmul(y, xy)

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``z -> x z`` acting on coordinate columns."""
        x = np.asarray(x, dtype=np.int64)
        return self.field.matmul(x, self.table.reshape(self.dim, -1)).reshape(self.dim, self.dim).T.copy()

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of ``z -> z y`` acting on coordinate columns."""
        y = np.asarray(y, dtype=np.int64)
        t = np.transpose(self.table, (1, 0, 2)).reshape(self.dim, -1)
        return self.field.matmul(y, t).reshape(self.dim, self.dim).T.copy()

    # -- words in the generators -----------------------------------------

    def _build_words(self) -> None:
        """Breadth-first basis of words ``g_k ... g_1 e_v``.

        ``word_parent[w]`` is ``(-1, v)`` for the idempotent word at ``v`` and
        ``(gen_pos, parent)`` for ``g * parent``.  ``to_words`` expresses each
        basis element in the word basis (``None`` when it is the identity).
        """
        f = self.field
        d = self.dim
        span = EchelonSpan(f, d)
        parents: list[tuple[int, int]] = []
        vectors: list[np.ndarray] = []
        src: list[int] = []
        tgt: list[int] = []

        def try_add(vec, parent, s, t) -> bool:
            if span.add(vec):
                parents.append(parent)
                vectors.append(vec)
                src.append(s)
                tgt.append(t)
                return True
            return False

        layer = []
        for v, i in enumerate(self.idempotent):
            vec = np.zeros(d, dtype=np.int64)
            vec[i] = 1
            if try_add(vec, (-1, v), v, v):
                layer.append(len(parents) - 1)
        while layer and span.rank < d:
            nxt = []
            for w in layer:
                for k, g in enumerate(self.generators):
                    if self.source[g] != tgt[w]:
                        continue
                    # g * w = sum_j w_j (g b_j)
                    vec = f.matmul(vectors[w], self.table[g])
                    if vec.any() and try_add(vec, (k, w), src[w], int(self.target[g])):
                        nxt.append(len(parents) - 1)
            layer = nxt
        if span.rank < d:
            raise AlgebraError(f"generators and idempotents span only {span.rank} of {d} dimensions")
        self.word_parent = tuple(parents)
        self.word_source = tuple(src)
        self.word_target = tuple(tgt)
        w_mat = np.stack(vectors)
        if np.array_equal(w_mat, np.eye(d, dtype=np.int64)):
            self.to_words = None
        else:
            self.to_words = f.inverse(w_mat)

    # -- validation ----------------------------------------------------

    def validate(self) -> None:
        """Unit, idempotent, Peirce and associativity checks (exact)."""
        f = self.field
        d = self.dim
        t = self.table
        for v, i in enumerate(self.idempotent):
            if self.source[i] != v or self.target[i] != v:
                raise AlgebraError(f"idempotent {v} has the wrong Peirce type")
        idem = np.asarray(self.idempotent)
        for j in range(d):
            s, tg = int(self.source[j]), int(self.target[j])
            left = t[idem, j]  # e_v * b_j
            right = t[j, idem]
            for v in range(self.n_vertices):
                want = np.zeros(d, dtype=np.int64)
                if v == tg:
                    want[j] = 1
                if not np.array_equal(left[v], want):
                    raise AlgebraError(f"e_{v} * b_{j} is inconsistent with its Peirce type")
                want = np.zeros(d, dtype=np.int64)
                if v == s:
                    want[j] = 1
                if not np.array_equal(right[v], want):
                    raise AlgebraError(f"b_{j} * e_{v} is inconsistent with its Peirce type")
        for g in self.generators:
            if g in self.idempotent:
                raise AlgebraError("an idempotent cannot be a generator")
        self.check_associative()

    def check_associative(self, samples: int = 2000, exhaustive_limit: int = 300) -> None:
        """``(a x) y = a (x y)`` for ``a`` running over idempotents and
        generators and all basis ``x, y``; since these ``a`` generate the
        algebra this is equivalent to associativity on all basis triples.
        Above ``exhaustive_limit`` random triples are used instead."""
        f = self.field
        d = self.dim
        t = self.table
        flat = t.reshape(d, d * d)
        if d <= exhaustive_limit:
            for a in itertools.chain(self.idempotent, self.generators):
                ax = t[a]  # (x, m)
                lhs = f.matmul(ax, flat)  # (x, y*k)
                rhs = f.matmul(t.reshape(d * d, d), t[a]).reshape(d, d * d)
                if not np.array_equal(lhs, rhs):
                    raise AlgebraError(f"multiplication is not associative (basis element {a})")
            return
        rng = np.random.default_rng(0)
        for _ in range(samples):
            i, j, k = (int(x) for x in rng.integers(0, d, 3))
            lhs = f.matmul(t[i, j], t[:, k, :])
            rhs = f.matmul(t[j, k], t[i])
            if not np.array_equal(lhs, rhs):
                raise AlgebraError(f"multiplication is not associative on ({i}, {j}, {k})")

    # -- derived algebras ------------------------------------------------

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            op = Algebra(
                self.field,
                np.transpose(self.table, (1, 0, 2)).copy(),
                self.labels,
                self.idempotent,
                self.target,
                self.source,
                self.generators,
                name=_op_name(self.name),
                presentation=self.presentation.opposite() if self.presentation is not None else None,
                check=False,
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    def with_field(self, field: PrimeField) -> "Algebra":
        """Same structure constants read in another characteristic (integral
        tables only; used for field-independence checks)."""
        if self.presentation is not None:
            pres = MonomialPresentation.build(
                self.presentation.quiver, self.presentation.relations, field, self.presentation.name,
                self.presentation.nakayama,
            )
            return assemble(pres)
        return from_structure_constants(self.table, field, labels=self.labels, name=self.name)

    def cartan_matrix(self) -> np.ndarray:
        """``C[t, s] = dim e_t A e_s``."""
        n = self.n_vertices
        c = np.zeros((n, n), dtype=np.int64)
        for s, t in zip(self.source, self.target):
            c[t, s] += 1
        return c


def _op_name(name: str) -> str:
    if name.endswith("^op"):
        return name[:-3]
    return name + "^op" if name else "^op"


def assemble(pres: MonomialPresentation) -> Algebra:
    """Path-basis algebra of a monomial presentation."""
    q = pres.quiver
    basis = pres.path_basis
    index = {p: k for k, p in enumerate(basis)}
    d = len(basis)

    def endpoints(path: Path) -> tuple[int, int]:
        start, arrows = path
        end = q.arrows[arrows[-1]].target if arrows else start
        return start, end

    ends = [endpoints(b) for b in basis]
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, (si, ti) in enumerate(ends):
        for j, (sj, tj) in enumerate(ends):
            if tj != si:
                continue
            prod = (sj, basis[j][1] + basis[i][1])
            k = index.get(prod)
            if k is not None:
                table[i, j, k] = 1

    def label(path: Path) -> str:
        start, arrows = path
        if not arrows:
            return f"e{start + 1}"
        return ".".join(q.arrows[a].name for a in arrows)

    idempotent = [index[(v, ())] for v in range(q.n)]
    generators = [index[(a.source, (a.id,))] for a in q.arrows]
    return Algebra(
        pres.field,
        table,
        [label(b) for b in basis],
        idempotent,
        [s for s, _ in ends],
        [t for _, t in ends],
        generators,
        name=pres.name,
        presentation=pres,
    )


def nakayama_algebra(*values: int, shape: str = "cyclic", field: Optional[PrimeField] = None) -> Algebra:
    return assemble(nakayama(AdmissibleSequence(tuple(values), shape), field))


def path_algebra(n: int, arrows: Sequence[tuple[str, int, int]], relations: Sequence[Sequence[str]] = (),
                 field: Optional[PrimeField] = None, name: str = "") -> Algebra:
    """Convenience constructor from named arrows and relations given by arrow names."""
    q = Quiver.from_triples(n, arrows)
    rels = [[q.arrow_named(a).id for a in r] for r in relations]
    return assemble(MonomialPresentation.build(q, rels, field, name))


def dual_numbers(field: Optional[PrimeField] = None) -> Algebra:
    """k[x]/(x^2) as the loop quiver with relation x^2."""
    return path_algebra(1, [("x", 0, 0)], [["x", "x"]], field, name="k[x]/(x^2)")


# ---------------------------------------------------------------------------
# radical and idempotents of arbitrary structure-constant tables


def _trace_radical(field: PrimeField, table: np.ndarray) -> np.ndarray:
    d = table.shape[0]
    if field.p <= d:
        raise CharacteristicTooSmall(f"characteristic {field.p} must exceed the dimension {d}")
    traces = np.einsum("kii->k", table) % field.p
    gram = field.matmul(table.reshape(d * d, d), traces[:, None]).reshape(d, d)
    return field.row_basis(field.kernel(gram))


def radical(a: Algebra | np.ndarray, field: Optional[PrimeField] = None) -> np.ndarray:
    """Basis (rows) of the Jacobson radical via the trace form.

    Valid because the characteristic exceeds the dimension.
    """
    if isinstance(a, Algebra):
        return _trace_radical(a.field, a.table)
    return _trace_radical(field or PrimeField(), np.asarray(a, dtype=np.int64))


def _mul(field: PrimeField, table: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = table.shape[0]
    xy = field.matmul(x, table.reshape(d, -1)).reshape(d, d)
    return field.matmul(y, xy)


def _find_unit(field: PrimeField, table: np.ndarray) -> np.ndarray:
    d = table.shape[0]
    # left unit: sum_i u_i c[i, j, k] = delta_jk
    sys = table.reshape(d, d * d).T
    target = np.eye(d, dtype=np.int64).reshape(-1)
    u = field.solve(sys, target)
    if u is None:
        raise AlgebraError("the table has no left unit")
    right = np.transpose(table, (1, 0, 2)).reshape(d, d * d).T
    if not np.array_equal(field.matmul(right, u), target):
        raise AlgebraError("the left unit is not a right unit")
    return u


def _span_dim(field: PrimeField, vecs: list[np.ndarray]) -> int:
    if not vecs:
        return 0
    return field.rank(np.stack(vecs))


def _corner_basis(field, table, e, vectors) -> list[np.ndarray]:
    return [_mul(field, table, _mul(field, table, e, v), e) for v in vectors]


def split_idempotents(
    field: PrimeField,
    table: np.ndarray,
    unit: Optional[np.ndarray] = None,
    rad: Optional[np.ndarray] = None,
    seed: int = 0,
    attempts: int = 48,
) -> list[np.ndarray]:
    """A complete set of primitive orthogonal idempotents.

    Repeatedly splits an idempotent ``e`` whose corner ``eAe`` is not local:
    a random ``x`` in the corner, shifted by an eigenvalue, gives a
    non-invertible non-nilpotent ``y`` whose Fitting decomposition of the
    left ideal ``Ae`` yields ``e = e' + e''``.
    """
    table = np.asarray(table, dtype=np.int64)
    d = table.shape[0]
    if unit is None:
        unit = _find_unit(field, table)
    if rad is None:
        rad = _trace_radical(field, table)
    rng = np.random.default_rng(seed)
    eye = np.eye(d, dtype=np.int64)
    rad_rows = list(rad)
    work = [unit % field.p]
    done: list[np.ndarray] = []
    while work:
        e = work.pop()
        corner = field.row_basis(np.stack(_corner_basis(field, table, e, list(eye))))
        rad_dim = _span_dim(field, _corner_basis(field, table, e, rad_rows)) if rad_rows else 0
        if corner.shape[0] - rad_dim == 1:
            done.append(e)
            continue
        left_ideal = field.row_basis(np.stack([_mul(field, table, b, e) for b in eye]))
        split = None
        for _ in range(attempts):
            x = field.matmul(field.random(corner.shape[0], rng), corner)
            powers = [e, x]
            rel = field.minimal_relation(powers)
            while rel is None:
                powers.append(_mul(field, table, powers[-1], x))
                rel = field.minimal_relation(powers)
            roots = field.roots(rel)
            if not roots:
                continue
            y = (x - roots[0] * e) % field.p
            n = left_ideal.shape[0]
            z = e
            for _ in range(n):
                z = _mul(field, table, z, y)
            # right multiplication by z on Ae
            rz = np.stack([_mul(field, table, b, z) for b in left_ideal])
            image = field.row_basis(rz)
            if image.shape[0] in (0, n):
                continue
            coeffs = field.kernel(rz.T)  # combos of left_ideal rows killed by z
            kernel = field.row_basis(field.matmul(coeffs, left_ideal)) if coeffs.shape[0] else coeffs
            both = np.vstack([kernel, image])
            sol = field.solve(both.T, e)
            if sol is None:
                raise AlgebraError("Fitting decomposition failed to contain e")
            k = kernel.shape[0]
            e1 = field.matmul(sol[:k], kernel)
            e2 = field.matmul(sol[k:], image)
            split = (e1, e2)
            break
        if split is None:
            raise NonSplitAlgebra("a residue division ring larger than the base field was detected")
        work.extend(split)
    done.sort(key=lambda v: (int(np.flatnonzero(v)[0]), tuple(int(c) for c in v)))
    return done


def primitive_idempotents(a: Algebra) -> list[np.ndarray]:
    """Primitive orthogonal idempotents recomputed from the structure
    constants (ignores the stored vertex idempotents)."""
    return split_idempotents(a.field, a.table, a.unit)


def from_structure_constants(
    table,
    field: Optional[PrimeField] = None,
    labels: Optional[Sequence[str]] = None,
    name: str = "",
    check: bool = True,
) -> Algebra:
    """Bring an arbitrary basic split algebra into Peirce-adapted form."""
    field = field or PrimeField()
    table = field.reduce(table)
    d = table.shape[0]
    if table.shape != (d, d, d):
        raise AlgebraError(f"structure constants must have shape (d, d, d), got {table.shape}")
    unit = _find_unit(field, table)
    rad = _trace_radical(field, table)
    idems = split_idempotents(field, table, unit, rad)
    n = len(idems)
    if d - rad.shape[0] != n:
        # every corner is local, so a larger semisimple quotient means
        # isomorphic projectives (matrix blocks)
        raise NonBasicAlgebra(f"A/rad has dimension {d - rad.shape[0]} but only {n} primitive idempotents")
    pieces = []
    src: list[int] = []
    tgt: list[int] = []
    for t, et in enumerate(idems):
        for s, es in enumerate(idems):
            vecs = [_mul(field, table, _mul(field, table, et, r), es) for r in rad]
            if not vecs:
                continue
            block = field.row_basis(np.stack(vecs))
            for row in block:
                pieces.append(row)
                src.append(s)
                tgt.append(t)
    new_basis = np.vstack([np.stack(idems)] + ([np.stack(pieces)] if pieces else []))
    if new_basis.shape[0] != d or not field.is_invertible(new_basis):
        raise NonBasicAlgebra("idempotents and Peirce pieces of the radical do not form a basis")
    inv = field.inverse(new_basis)
    # table'[a, b] = (B_a B_b) B^{-1}
    t1 = field.matmul(new_basis, table.reshape(d, d * d)).reshape(d, d, d)  # (a, j, k)
    t2 = field.matmul(new_basis, np.transpose(t1, (1, 0, 2)).reshape(d, d * d)).reshape(d, d, d)  # (b, a, k)
    t3 = field.matmul(np.transpose(t2, (1, 0, 2)).reshape(d * d, d), inv).reshape(d, d, d)
    sources = list(range(n)) + src
    targets = list(range(n)) + tgt
    generators = _radical_generators(field, t3, list(range(n, d)))
    new_labels = [f"e{v + 1}" for v in range(n)] + [f"r{k + 1}" for k in range(d - n)]
    return Algebra(field, t3, new_labels, list(range(n)), sources, targets, generators, name=name, check=check)


def _radical_generators(field: PrimeField, table: np.ndarray, rad_idx: list[int]) -> list[int]:
    """Radical basis indices whose classes span rad/rad^2."""
    d = table.shape[0]
    if not rad_idx:
        return []
    r = np.asarray(rad_idx)
    span = EchelonSpan(field, d)
    for row in field.row_basis(table[np.ix_(r, r)].reshape(-1, d)):
        span.add(row)
    gens = []
    for i in rad_idx:
        vec = np.zeros(d, dtype=np.int64)
        vec[i] = 1
        if span.add(vec):
            gens.append(i)
    return gens


def radical_generators(field: PrimeField, table: np.ndarray, rad_idx: list[int]) -> list[int]:
    return _radical_generators(field, table, rad_idx)


__all__ = [
    "AdmissibleSequence",
    "Algebra",
    "AlgebraError",
    "Arrow",
    "CharacteristicTooSmall",
    "DEFAULT_CHARACTERISTIC",
    "InvalidAdmissibleSequence",
    "InvalidPresentation",
    "MonomialPresentation",
    "NonBasicAlgebra",
    "NonSplitAlgebra",
    "Quiver",
    "assemble",
    "dual_numbers",
    "from_structure_constants",
    "nakayama",
    "nakayama_algebra",
    "path_algebra",
    "primitive_idempotents",
    "radical",
    "radical_generators",
    "split_idempotents",
]
