"""Homological invariants and the per-algebra classification report.

Potentially unbounded dimensions are three-valued: ``Finite``,
``CertifiedInfinite`` (with a re-checkable witness) or ``Unknown`` when the
cap is reached first.  The singularity and defect categories appear only
through their vanishing predicates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Optional, Union

import networkx as nx

from .algebra import Algebra
from .auslander import (
    AuslanderAlgebra,
    CheckReport,
    aus,
    cm_free_refutation,
    default_samples,
    gp_generator,
    summand_correspondence,
    verify_fully_faithful,
)
from .gorenstein import DEFAULT_MAX_DEPTH, NotEnumerable, gp_survey, regular
from .modules import (
    Module,
    ModuleMap,
    decompose,
    dual,
    is_projective,
    iso_indecomposable,
    registry,
    simple,
    syzygy,
)

DEFAULT_CAP = 64
UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# three-valued dimensions


@dataclass(frozen=True)
class Finite:
    value: int

    def to_json(self) -> dict:
        return {"status": "finite", "value": self.value}


@dataclass
class InfinityWitness:
    """``summand`` is a non-projective summand of ``Omega^start(module)`` and
    of ``Omega^period(summand)``, so it recurs in every
    ``Omega^(start + n * period)(module)``."""

    module: Module
    start: int
    period: int
    summand: Module

    @property
    def indices(self) -> tuple[int, int]:
        return self.start, self.start + self.period

    def validate(self) -> bool:
        if self.summand.is_zero() or is_projective(self.summand):
            return False
        cur = self.module
        for _ in range(self.start):
            cur = syzygy(cur)
        if _split_embedding(self.summand, cur) is None:
            return False
        cur = self.summand
        for _ in range(self.period):
            cur = syzygy(cur)
        return _split_embedding(self.summand, cur) is not None

    def to_json(self) -> dict:
        i, j = self.indices
        return {"i": i, "j": j, "summandDims": list(self.summand.dims)}


def _split_embedding(x: Module, y: Module) -> Optional[tuple[ModuleMap, ModuleMap]]:
    """Maps ``x -> y -> x`` composing to the identity, found through the
    decomposition of ``y``."""
    for part in decompose(y).parts:
        if part.module.dims != x.dims:
            continue
        iso = iso_indecomposable(x, part.module)
        if iso is None:
            continue
        inc = part.inclusion.compose(iso)
        proj = iso.inverse().compose(part.projection)
        if proj.compose(inc).is_iso() and inc.is_homomorphism() and proj.is_homomorphism():
            return inc, proj
    return None


@dataclass
class CertifiedInfinite:
    witness: InfinityWitness

    def to_json(self) -> dict:
        return {"status": "infinite", "witness": self.witness.to_json()}


@dataclass(frozen=True)
class Unknown:
    cap: int

    def to_json(self) -> dict:
        return {"status": "unknown", "cap": self.cap}


DimStatus = Union[Finite, CertifiedInfinite, Unknown]


def projective_dimension(m: Module, cap: int = DEFAULT_CAP) -> DimStatus:
    """Follow the sets of non-projective summand classes of ``Omega^j m``.

    An empty set at step ``d`` gives ``pd = d``.  A repeated set means the
    class graph has a cycle reachable from ``m``; the witness is a class on
    such a cycle at its shortest distance from ``m``.
    """
    a = m.algebra
    reg = registry(a)
    if m.is_zero() or is_projective(m):
        return Finite(0)
    level = frozenset(c for c, _ in reg.classes_of(m) if not reg.is_projective(c))
    history = [level]
    for d in range(1, cap + 1):
        nxt = set()
        for cid in level:
            for c2, _ in reg.syzygy_classes(cid):
                if not reg.is_projective(c2):
                    nxt.add(c2)
        level = frozenset(nxt)
        if not level:
            return Finite(d)
        if level in history:
            return CertifiedInfinite(_infinity_witness(m, history[0]))
        history.append(level)
    return Unknown(cap)


def _infinity_witness(m: Module, start: frozenset) -> InfinityWitness:
    reg = registry(m.algebra)
    g = nx.DiGraph()
    dist = {c: 0 for c in start}
    queue = deque(sorted(start))
    while queue:
        c = queue.popleft()
        g.add_node(c)
        for c2, _ in reg.syzygy_classes(c):
            if reg.is_projective(c2):
                continue
            g.add_edge(c, c2)
            if c2 not in dist:
                dist[c2] = dist[c] + 1
                queue.append(c2)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(v, v) for v in comp):
            on_cycle |= comp
    x = min(on_cycle, key=lambda c: (dist[c], c))
    period = min(
        nx.shortest_path_length(g, succ, x) + 1 for succ in g.successors(x) if nx.has_path(g, succ, x)
    )
    return InfinityWitness(m, dist[x], period, reg.rep(x))


def global_dimension(a: Algebra, cap: int = DEFAULT_CAP) -> DimStatus:
    best = 0
    unknown = None
    for v in range(a.n_vertices):
        st = projective_dimension(simple(a, v), cap)
        if isinstance(st, CertifiedInfinite):
            return st
        if isinstance(st, Unknown):
            unknown = st
        else:
            best = max(best, st.value)
    return unknown if unknown is not None else Finite(best)


def injective_dimension(a: Algebra, side: str = "left", cap: int = DEFAULT_CAP) -> DimStatus:
    """Injective dimension of the regular module on the given side, as the
    projective dimension of its dual over the other algebra."""
    if side == "left":
        return projective_dimension(dual(regular(a)), cap)
    if side == "right":
        return projective_dimension(dual(regular(a.opposite())), cap)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


@dataclass
class GorensteinVerdict:
    value: Union[bool, str]
    left: DimStatus
    right: DimStatus

    @property
    def consistent(self) -> bool:
        if isinstance(self.left, Finite) and isinstance(self.right, Finite):
            return self.left.value == self.right.value
        return True


def gorenstein_verdict(a: Algebra, cap: int = DEFAULT_CAP) -> GorensteinVerdict:
    left = injective_dimension(a, "left", cap)
    right = injective_dimension(a, "right", cap)
    if isinstance(left, Finite) and isinstance(right, Finite):
        value: Union[bool, str] = True
    elif isinstance(left, CertifiedInfinite) or isinstance(right, CertifiedInfinite):
        value = False
    else:
        value = UNKNOWN
    return GorensteinVerdict(value, left, right)


def is_gorenstein(a: Algebra, cap: int = DEFAULT_CAP) -> Union[bool, str]:
    return gorenstein_verdict(a, cap).value


def _decided(status: DimStatus) -> Union[bool, str]:
    if isinstance(status, Finite):
        return True
    if isinstance(status, CertifiedInfinite):
        return False
    return UNKNOWN


def sg_trivial(a: Algebra, cap: int = DEFAULT_CAP) -> Union[bool, str]:
    """Vanishing of the singularity category: finite global dimension."""
    return _decided(global_dimension(a, cap))


def defect_trivial(a: Algebra, cap: int = DEFAULT_CAP) -> Union[bool, str]:
    """Vanishing of the Gorenstein defect category: Gorensteinness."""
    return is_gorenstein(a, cap)


def verify_dif(a: Algebra, cap: int = DEFAULT_CAP, aa: Optional[AuslanderAlgebra] = None) -> CheckReport:
    """``defect_trivial(A) = sg_trivial(Aus(A))`` whenever both are decided."""
    aa = aa or aus(a)
    lhs = defect_trivial(a, cap)
    rhs = sg_trivial(aa.gamma, cap)
    decided = lhs != UNKNOWN and rhs != UNKNOWN
    return CheckReport("dif", (not decided) or lhs == rhs, {"defectTrivial": lhs, "ausSgTrivial": rhs, "decided": decided})


# ---------------------------------------------------------------------------
# the report


def _status_json(st: DimStatus) -> dict:
    return st.to_json()


@dataclass
class Caps:
    max_depth: int = DEFAULT_MAX_DEPTH
    gl_dim_cap: int = DEFAULT_CAP
    refutation_depth: int = 32


@dataclass
class ClassificationReport:
    algebra: str
    dim: int
    vertices: int
    characteristic: int
    cm_finite: Union[bool, str]
    gp_count: Optional[int]
    gp_modules: list[str]
    cm_free: Union[bool, str]
    gorenstein: Union[bool, str]
    inj_dim_left: DimStatus
    inj_dim_right: DimStatus
    gl_dim: DimStatus
    sg_trivial: Union[bool, str]
    defect_trivial: Union[bool, str]
    aus_summary: Optional[dict]
    checks: list[CheckReport] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)
    certificates: list[dict] = dc_field(default_factory=list)

    @property
    def checks_passed(self) -> list[str]:
        return [c.name for c in self.checks if c.passed]

    @property
    def contradiction(self) -> bool:
        return any(not c.passed for c in self.checks)

    def to_json(self, certificates: bool = False) -> dict:
        out = {
            "algebra": self.algebra,
            "dim": self.dim,
            "vertices": self.vertices,
            "characteristic": self.characteristic,
            "cmFinite": self.cm_finite,
            "gpCount": self.gp_count,
            "gpModules": self.gp_modules,
            "cmFree": self.cm_free,
            "gorenstein": self.gorenstein,
            "injDimLeft": _status_json(self.inj_dim_left),
            "injDimRight": _status_json(self.inj_dim_right),
            "glDim": _status_json(self.gl_dim),
            "sgTrivial": self.sg_trivial,
            "defectTrivial": self.defect_trivial,
            "aus": self.aus_summary,
            "checks": [c.to_json() for c in self.checks],
            "checksPassed": self.checks_passed,
            "notes": self.notes,
        }
        if certificates:
            out["certificates"] = self.certificates
        return out


def _check(name: str, ok: bool, **details) -> CheckReport:
    return CheckReport(name, bool(ok), details)


def classify(a: Algebra, caps: Optional[Caps] = None) -> ClassificationReport:
    caps = caps or Caps()
    notes = [
        "singularity and defect categories are reported only through their vanishing predicates",
    ]
    checks: list[CheckReport] = []
    gor = gorenstein_verdict(a, caps.gl_dim_cap)
    if not gor.consistent:
        checks.append(_check("gorenstein_sides_agree", False, left=gor.left.to_json(), right=gor.right.to_json()))
    elif gor.value is True:
        checks.append(_check("gorenstein_sides_agree", True))
    gl = global_dimension(a, caps.gl_dim_cap)
    try:
        survey = gp_survey(a, max_depth=caps.max_depth)
    except NotEnumerable:
        survey = None
    certs: list[dict] = []
    aus_summary = None
    if survey is None:
        notes.append(
            "no candidate list of indecomposables for this algebra, so the GP census and the Auslander "
            "algebra are skipped; CM-freeness is only decided when the global dimension is finite"
        )
        cm_finite: Union[bool, str] = UNKNOWN
        gp_count = None
        gp_labels: list[str] = []
        cm_free: Union[bool, str] = True if isinstance(gl, Finite) else UNKNOWN
        ref = cm_free_refutation(a, caps.refutation_depth, caps.max_depth)
        checks.append(_check("cm_free_refutation", True, empty=ref.empty, explored=ref.explored))
        if isinstance(gl, Finite):
            checks.append(_check("finite_gldim_cm_free", ref.empty))
        aus_summary = {"cmFreeRefutationEmpty": ref.empty}
    else:
        cm_finite = UNKNOWN if survey.unknown else True
        gp = survey.gp
        gp_count = len(gp)
        gp_labels = [m.label for m in gp]
        cm_free = not survey.nonprojective_gp
        if survey.unknown:
            notes.append(f"{len(survey.unknown)} candidate modules reached the depth cap undecided")
        audits = []
        for v in survey.verdicts:
            if v.certificate is not None:
                audits.append(v.certificate.validate())
                certs.append({"module": v.module.label, **v.certificate.to_json()})
            elif v.refutation is not None:
                audits.append(v.refutation.validate())
                certs.append({"module": v.module.label, "refutation": v.refutation.to_json()})
        checks.append(_check("certificates", all(audits), audited=len(audits)))
        if isinstance(gl, Finite):
            checks.append(_check("finite_gldim_cm_free", cm_free is True))
        gen = gp_generator(a, max_depth=caps.max_depth)
        aa = aus(a, gen)
        checks.append(verify_fully_faithful(aa, default_samples(a)))
        corr = summand_correspondence(aa)
        checks.append(corr)
        ref = cm_free_refutation(aa.gamma, caps.refutation_depth, caps.max_depth)
        checks.append(_check("free", ref.empty, explored=ref.explored, undecided=ref.unknown))
        aus_gl = global_dimension(aa.gamma, caps.gl_dim_cap)
        aus_sg = _decided(aus_gl)
        decided = gor.value != UNKNOWN and aus_sg != UNKNOWN
        checks.append(
            _check("dif", (not decided) or gor.value == aus_sg, decided=decided, defectTrivial=gor.value, ausSgTrivial=aus_sg)
        )
        if gor.value is True:
            checks.append(_check("free_gorenstein_to_finite", isinstance(aus_gl, Finite)))
        elif gor.value is False:
            checks.append(_check("free_nongorenstein_to_infinite", not isinstance(aus_gl, Finite)))
        aus_summary = {
            "dim": aa.dim,
            "idempotents": aa.gamma.n_vertices,
            "cmFreeRefutationEmpty": ref.empty,
            "refutationExplored": ref.explored,
            "glDim": aus_gl.to_json(),
        }
    return ClassificationReport(
        algebra=a.name,
        dim=a.dim,
        vertices=a.n_vertices,
        characteristic=a.p,
        cm_finite=cm_finite,
        gp_count=gp_count,
        gp_modules=gp_labels,
        cm_free=cm_free,
        gorenstein=gor.value,
        inj_dim_left=gor.left,
        inj_dim_right=gor.right,
        gl_dim=gl,
        sg_trivial=_decided(gl),
        defect_trivial=gor.value,
        aus_summary=aus_summary,
        checks=checks,
        notes=notes,
        certificates=certs,
    )


__all__ = [
    "Caps",
    "CertifiedInfinite",
    "ClassificationReport",
    "DEFAULT_CAP",
    "DimStatus",
    "Finite",
    "GorensteinVerdict",
    "InfinityWitness",
    "UNKNOWN",
    "Unknown",
    "classify",
    "defect_trivial",
    "global_dimension",
    "gorenstein_verdict",
    "injective_dimension",
    "is_gorenstein",
    "projective_dimension",
    "sg_trivial",
    "verify_dif",
]
