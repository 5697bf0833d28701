"""The relative Auslander algebra of a CM-finite algebra.

``E`` is the direct sum of the indecomposable projectives and the
non-projective Gorenstein-projective indecomposables, ``Gamma`` is
``End(E)^op`` and ``F = Hom(E, -)`` turns ``A``-modules into
``Gamma``-modules.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .algebra import Algebra, radical_generators
from .gorenstein import (
    DEFAULT_MAX_DEPTH,
    gp_survey,
    is_gp,
)
from .modules import (
    AlgebraMismatch,
    HomSpace,
    Module,
    ModuleMap,
    direct_sum,
    hom,
    hom_dim,
    is_projective,
    iso_indecomposable,
    projective,
    registry,
    simple,
    syzygy,
    uniserials,
)


@dataclass
class GPGenerator:
    algebra: Algebra
    summands: list[Module]
    n_projective: int

    @property
    def total(self) -> Module:
        return direct_sum(self.summands, label="E").module

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.summands)


def gp_generator(a: Algebra, universe: Optional[Sequence[Module]] = None, max_depth: int = DEFAULT_MAX_DEPTH) -> GPGenerator:
    """Projectives first (by vertex), then the non-projective GP
    indecomposables in candidate order."""
    survey = gp_survey(a, universe, max_depth)
    projs = [projective(a, v) for v in range(a.n_vertices)]
    extra = survey.nonprojective_gp
    return GPGenerator(a, projs + extra, len(projs))


@dataclass
class _Image:
    module: Module
    homs: list[HomSpace]


@dataclass
class AuslanderAlgebra:
    generator: GPGenerator
    gamma: Algebra
    basis_maps: list[tuple[int, int, np.ndarray]]  # (i, j, vector in Hom(E_i, E_j))
    homs: list[list[HomSpace]]
    _images: dict = dc_field(default_factory=dict, repr=False)

    @property
    def summand_idempotents(self) -> list[int]:
        return list(self.gamma.idempotent)

    @property
    def dim(self) -> int:
        return self.gamma.dim

    def basis_map(self, b: int) -> ModuleMap:
        i, j, vec = self.basis_maps[b]
        return self.homs[i][j].to_map(vec)

    # -- the functor Hom(E, -) ------------------------------------------

    def _image(self, m: Module) -> _Image:
        key = id(m)
        hit = self._images.get(key)
        if hit is not None and hit[0] is m:
            return hit[1]
        if m.algebra is not self.generator.algebra:
            raise AlgebraMismatch(f"{m!r} is not a module over {self.generator.algebra!r}")
        g = self.gamma
        f = g.field
        es = self.generator.summands
        homs = [hom(e, m) for e in es]
        dims = [h.dim for h in homs]
        acts = []
        for gen in g.generators:
            i, j = int(g.target[gen]), int(g.source[gen])
            if dims[i] == 0 or dims[j] == 0:
                acts.append(np.zeros((dims[i], dims[j])))
                continue
            x = self.basis_map(gen)  # E_i -> E_j
            acts.append(homs[j].pre_compose(x)[:, homs[i].pivots].T)
        mod = Module(g, dims, acts, label=f"F({m.label})" if m.label else "")
        img = _Image(mod, homs)
        self._images[key] = (m, img)
        return img

    def yoneda(self, m: Module) -> Module:
        return self._image(m).module

    def yoneda_map(self, f: ModuleMap) -> ModuleMap:
        src, tgt = self._image(f.source), self._image(f.target)
        blocks = []
        for j in range(len(self.generator.summands)):
            hs, ht = src.homs[j], tgt.homs[j]
            if hs.dim == 0 or ht.dim == 0:
                blocks.append(np.zeros((ht.dim, hs.dim)))
                continue
            blocks.append(hs.post_compose(f)[:, ht.pivots].T)
        return ModuleMap(src.module, tgt.module, blocks)

    def to_json(self) -> dict:
        g = self.gamma
        return {
            "dim": g.dim,
            "idempotents": g.n_vertices,
            "summandDims": [list(s.dims) for s in self.generator.summands],
            "summandLabels": [s.label for s in self.generator.summands],
            "cartan": g.cartan_matrix().tolist(),
        }


def _trace_row(h: HomSpace) -> np.ndarray:
    m = h.source
    out = np.zeros(h.dim, dtype=np.int64)
    for v in range(len(m.dims)):
        d = m.dims[v]
        if not d:
            continue
        blocks = h.basis[:, h.var_offsets[v] : h.var_offsets[v + 1]].reshape(h.dim, d, d)
        out = out + np.trace(blocks, axis1=1, axis2=2)
    return np.mod(out, m.field.p)


def aus(a: Algebra, generator: Optional[GPGenerator] = None, max_depth: int = DEFAULT_MAX_DEPTH) -> AuslanderAlgebra:
    """``End(E)^op`` as a structure-constant algebra in Peirce form.

    Vertex ``i`` of ``Gamma`` is summand ``E_i``.  A map ``x: E_i -> E_j``
    lies in ``e_i Gamma e_j`` and ``x . y = y o x``.
    """
    gen = generator or gp_generator(a, max_depth=max_depth)
    es = gen.summands
    n = len(es)
    f = a.field
    homs = [[hom(es[i], es[j]) for j in range(n)] for i in range(n)]
    # per pair: basis vectors (rows in hom coordinates) and the inverse
    # change of basis from hom coordinates to Gamma coordinates
    idem: list[tuple[int, int, np.ndarray]] = []
    rest: list[tuple[int, int, np.ndarray]] = []
    coord_change: dict[tuple[int, int], np.ndarray] = {}
    pair_rows: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        h = homs[i][i]
        ident = ModuleMap.identity(es[i]).vector()
        idc = h.coords(ident)
        tr = _trace_row(h)
        if f.p <= es[i].dim:
            raise ValueError(f"characteristic {f.p} must exceed dim {es[i].dim}")
        nil = f.kernel(tr[None, :])  # traceless part = radical of a local ring
        rows = np.vstack([idc[None, :], nil]) if nil.shape[0] else idc[None, :]
        coord_change[(i, i)] = f.inverse(rows)
        idem.append((i, i, f.matmul(idc, h.basis)))
        for r in nil:
            rest.append((i, i, f.matmul(r, h.basis)))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            h = homs[i][j]
            coord_change[(i, j)] = np.eye(h.dim, dtype=np.int64)
            for r in range(h.dim):
                rest.append((i, j, h.basis[r]))
    basis = idem + rest
    d = len(basis)
    for b, (i, j, _) in enumerate(basis):
        pair_rows.setdefault((i, j), []).append(b)
    # rows of pair_rows[(i, j)] are ordered consistently with coord_change
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, j, k in itertools.product(range(n), repeat=3):
        xs, ys = pair_rows.get((i, j), []), pair_rows.get((j, k), [])
        if not xs or not ys:
            continue
        target_rows = pair_rows.get((i, k), [])
        hx, hz = homs[i][j], homs[i][k]
        if hz.dim == 0:
            continue
        for x in xs:
            xmap = hx.to_map(basis[x][2])
            comp = HomSpace(es[j], es[k], np.stack([basis[y][2] for y in ys])).pre_compose(xmap)
            coords = f.matmul(comp[:, hz.pivots], coord_change[(i, k)])
            table[x][np.ix_(ys, target_rows)] = coords
    src = [j for (_, j, _) in basis]
    tgt = [i for (i, _, _) in basis]
    rad_idx = list(range(n, d))
    gens = radical_generators(f, table, rad_idx)
    labels = [f"e{i + 1}" for i in range(n)] + [f"h{i + 1}{j + 1}.{k}" for k, (i, j, _) in enumerate(rest)]
    gamma = Algebra(f, table, labels, list(range(n)), src, tgt, gens, name=f"Aus({a.name})")
    return AuslanderAlgebra(gen, gamma, basis, homs)


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.details}


def verify_fully_faithful(aa: AuslanderAlgebra, samples: Sequence[Module]) -> CheckReport:
    """``dim Hom(X, Y) = dim Hom(FX, FY)`` for all sample pairs."""
    images = [aa.yoneda(x) for x in samples]
    failures = []
    pairs = 0
    for (i, x), (j, y) in itertools.product(enumerate(samples), repeat=2):
        pairs += 1
        left = hom_dim(x, y)
        right = hom_dim(images[i], images[j])
        if left != right:
            failures.append({"pair": [i, j], "lambda": left, "gamma": right})
    return CheckReport("yoneda", not failures, {"pairs": pairs, "failures": failures})


def default_samples(a: Algebra) -> list[Module]:
    if a.is_nakayama:
        return uniserials(a)
    out = [projective(a, v) for v in range(a.n_vertices)]
    for v in range(a.n_vertices):
        s = simple(a, v)
        out.append(s)
        cur = s
        for _ in range(3):
            cur = syzygy(cur)
            if cur.is_zero():
                break
            out.append(cur)
    return out


def summand_correspondence(aa: AuslanderAlgebra) -> CheckReport:
    """``F(E_i)`` is isomorphic to the ``i``-th indecomposable projective of
    ``Gamma`` and to no other one."""
    g = aa.gamma
    gp = [projective(g, v) for v in range(g.n_vertices)]
    matrix = []
    for e in aa.generator.summands:
        fe = aa.yoneda(e)
        matrix.append([iso_indecomposable(fe, p) is not None if fe.dims == p.dims else False for p in gp])
    ok = all(matrix[i][j] == (i == j) for i in range(len(gp)) for j in range(len(gp)))
    ok = ok and len(matrix) == len(gp)
    return CheckReport("summands_to_projectives", ok, {"summands": len(matrix)})


@dataclass
class RefutationResult:
    counterexamples: list[Module]
    explored: int
    depth: int
    unknown: int

    @property
    def empty(self) -> bool:
        return not self.counterexamples


def cm_free_refutation(g: Algebra, depth: int = 32, max_depth: int = DEFAULT_MAX_DEPTH) -> RefutationResult:
    """Search the summands of ``Omega^i(S)``, ``1 <= i <= depth``, ``S``
    simple, for non-projective Gorenstein-projective modules.

    A falsification sampler: an empty result is evidence, not a proof."""
    reg = registry(g)
    start = set()
    for v in range(g.n_vertices):
        for c, _ in reg.syzygy_classes(reg.identify(simple(g, v))):
            if not reg.is_projective(c):
                start.add(c)
    seen = set(start)
    level = sorted(start)
    for _ in range(depth - 1):
        nxt = set()
        for cid in level:
            for c2, _ in reg.syzygy_classes(cid):
                if not reg.is_projective(c2) and c2 not in seen:
                    nxt.add(c2)
        if not nxt:
            break
        seen |= nxt
        level = sorted(nxt)
    found = []
    unknown = 0
    for cid in sorted(seen):
        v = is_gp(reg.rep(cid), max_depth)
        if v.is_yes:
            found.append(reg.rep(cid))
        elif v.status == "unknown":
            unknown += 1
    return RefutationResult(found, len(seen), depth, unknown)


def verify_equivalence_exp(aa: AuslanderAlgebra, depth: int = 32) -> CheckReport:
    corr = summand_correspondence(aa)
    proj = all(is_projective(aa.yoneda(e)) for e in aa.generator.summands)
    ref = cm_free_refutation(aa.gamma, depth)
    ok = corr.passed and proj and ref.empty
    return CheckReport(
        "exp",
        ok,
        {
            "summandsProjective": proj,
            "bijective": corr.passed,
            "refutationEmpty": ref.empty,
            "explored": ref.explored,
        },
    )


# ---------------------------------------------------------------------------
# comparison proxy


def projective_hom_matrix(a: Algebra) -> np.ndarray:
    ps = [projective(a, v) for v in range(a.n_vertices)]
    return np.array([[hom_dim(x, y) for y in ps] for x in ps], dtype=np.int64)


def cartan_proxy_equal(a: Algebra, b: Algebra) -> bool:
    """Same dimension, and some vertex permutation matches both the Cartan
    matrices and the Hom-dimension matrices between projectives.  A proxy
    for algebra isomorphism."""
    if a.dim != b.dim or a.n_vertices != b.n_vertices:
        return False
    ca, cb = a.cartan_matrix(), b.cartan_matrix()
    ha, hb = projective_hom_matrix(a), projective_hom_matrix(b)
    n = a.n_vertices
    if n > 8:
        key = lambda c: sorted(map(tuple, np.sort(c, axis=1)))  # noqa: E731
        return key(ca) == key(cb) and key(ha) == key(hb)
    for perm in itertools.permutations(range(n)):
        pr = list(perm)
        if np.array_equal(ca[np.ix_(pr, pr)], cb) and np.array_equal(ha[np.ix_(pr, pr)], hb):
            return True
    return False


__all__ = [
    "AuslanderAlgebra",
    "CheckReport",
    "GPGenerator",
    "RefutationResult",
    "aus",
    "cartan_proxy_equal",
    "cm_free_refutation",
    "default_samples",
    "gp_generator",
    "projective_hom_matrix",
    "summand_correspondence",
    "verify_equivalence_exp",
    "verify_fully_faithful",
]
