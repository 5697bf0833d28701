"""Gorenstein-projective modules: decision, certificates, oracle, stability.

A module is tested for total reflexivity: ``Ext^{>0}(M, A) = 0``,
``Ext^{>0}(M*, A^op) = 0`` and ``M -> M**`` bijective.  The "for all
degrees" conditions are made finite by following the syzygy orbit through
the isomorphism classes of indecomposables until it closes up.  Positive
answers carry a periodic window of a complete projective resolution that
can be re-checked by :mod:`cmfree.complexes`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence, Union

import networkx as nx
import numpy as np

from .algebra import Algebra
from .complexes import (
    Complex,
    biexact,
    conjugate,
    direct_sum_complex,
    image_at,
    is_exact,
    two_term,
)
from .modules import (
    Module,
    ModuleError,
    ModuleMap,
    biduality,
    direct_sum,
    ext,
    find_isomorphism,
    hom,
    hom_dim,
    indecomposable_summands,
    is_isomorphic,
    is_projective,
    iso_indecomposable,
    path_ideal_modules,
    projective,
    projectives,
    regular_module,
    registry,
    star,
    syzygy_step,
    uniserials,
    zero_module,
)

DEFAULT_MAX_DEPTH = 64


class NotEnumerable(ValueError):
    pass


class UniverseNotClosed(ValueError):
    pass


class InvalidCertificate(ValueError):
    pass


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class ExtNonvanishing:
    degree: int
    dim: int
    kind: str = "ExtNonvanishing"


@dataclass(frozen=True)
class StarSideExtNonvanishing:
    degree: int
    dim: int
    kind: str = "StarSideExtNonvanishing"


@dataclass(frozen=True)
class BidualityFails:
    rank_deficit: int
    kind: str = "BidualityFails"


Reason = Union[ExtNonvanishing, StarSideExtNonvanishing, BidualityFails]


@dataclass
class GPRefutation:
    module: Module
    reason: Reason

    def validate(self) -> bool:
        """Re-derive the reason with a single recomputation."""
        m = self.module
        r = self.reason
        if isinstance(r, ExtNonvanishing):
            return ext(m, regular(m.algebra), r.degree) == r.dim and r.dim > 0
        if isinstance(r, StarSideExtNonvanishing):
            op = m.algebra.opposite()
            return ext(star(m), regular(op), r.degree) == r.dim and r.dim > 0
        if isinstance(r, BidualityFails):
            return biduality(m).rank_deficit == r.rank_deficit and r.rank_deficit > 0
        return False

    def to_json(self) -> dict:
        out = {"kind": self.reason.kind}
        if isinstance(self.reason, BidualityFails):
            out["rankDeficit"] = self.reason.rank_deficit
        else:
            out["degree"] = self.reason.degree
            out["dim"] = self.reason.dim
        return out


@dataclass
class PeriodicResolution:
    """``P[k] -> P[k-1 mod p]`` for ``k < period``; the complete resolution
    puts ``P[(-i) mod p]`` in degree ``i`` so that ``Im d[0]`` is the core."""

    core: Module
    period: int
    terms: list[Module]
    maps: list[ModuleMap]
    seam: ModuleMap  # Omega^period(core) -> core

    def window(self, lo: int, hi: int, shift: int = 0) -> Complex:
        p = self.period
        idx = [(-(i + shift)) % p for i in range(lo, hi + 1)]
        return Complex(lo, [self.terms[k] for k in idx], [self.maps[k] for k in idx[:-1]])


@dataclass
class GPCertificate:
    module: Module
    period: int
    window: Complex
    seam: Optional[ModuleMap]
    dual_period: int = 0
    dual_seam: Optional[ModuleMap] = None
    ext_depth: int = 0
    resolution: Optional[PeriodicResolution] = None

    def audit(self) -> dict[str, bool]:
        """Independent re-checks of every claim in the certificate."""
        a = self.module.algebra
        w = self.window
        checks = {}
        try:
            w.validate()
            checks["complex"] = True
        except Exception:
            checks["complex"] = False
        checks["projective_terms"] = all(is_projective(t) for t in w.terms)
        checks["exact"] = is_exact(w)
        checks["biexact"] = biexact(w, projectives(a))
        checks["image"] = is_isomorphic(image_at(w, 0), self.module)
        if self.seam is not None:
            checks["seam"] = self.seam.is_homomorphism() and self.seam.is_iso()
            p = self.period
            checks["periodic"] = all(
                w.term(i).dims == w.term(i + p).dims for i in range(w.lo, w.hi - p + 1)
            ) and w.hi - w.lo + 1 >= 2 * p + 1
        if self.dual_seam is not None:
            checks["dual_seam"] = self.dual_seam.is_homomorphism() and self.dual_seam.is_iso()
        return checks

    def validate(self) -> bool:
        return all(self.audit().values())

    def to_json(self) -> dict:
        out = {
            "period": self.period,
            "window": self.window.to_json(),
            "extDepth": self.ext_depth,
        }
        if self.seam is not None:
            out["seam"] = [b.tolist() for b in self.seam.blocks]
        if self.dual_seam is not None:
            out["dualPeriod"] = self.dual_period
            out["dualSeam"] = [b.tolist() for b in self.dual_seam.blocks]
        return out


@dataclass
class GPVerdict:
    status: str  # "yes" | "no" | "unknown"
    module: Module
    certificate: Optional[GPCertificate] = None
    refutation: Optional[GPRefutation] = None
    depth: int = 0

    @property
    def is_yes(self) -> bool:
        return self.status == "yes"

    def __bool__(self) -> bool:
        return self.is_yes


# ---------------------------------------------------------------------------
# helpers


def regular(a: Algebra) -> Module:
    cache = a.__dict__.setdefault("_regular", [])
    if not cache:
        cache.append(regular_module(a))
    return cache[0]


def _ext1_regular(a: Algebra, cid: int) -> int:
    reg = registry(a)
    memo = a.__dict__.setdefault("_ext1_regular", {})
    if cid not in memo:
        memo[cid] = ext(reg.rep(cid), regular(a), 1)
    return memo[cid]


def _nonprojective_classes(m: Module) -> list[int]:
    reg = registry(m.algebra)
    return sorted({c for c, _ in reg.classes_of(m) if not reg.is_projective(c)})


@dataclass
class OrbitResult:
    status: str  # "ok" | "fail" | "unknown"
    degree: int = 0
    closure: tuple[int, ...] = ()


def ext_orbit(m: Module, max_depth: int = DEFAULT_MAX_DEPTH) -> OrbitResult:
    """Decide ``Ext^i(m, A) = 0`` for all ``i > 0``.

    Breadth-first search over the classes of non-projective summands of
    ``Omega^j m``; the level at which a class first appears is its distance,
    so the first failing level is the first nonvanishing degree.  A closed
    set of classes with vanishing ``Ext^1`` certifies all degrees.
    """
    a = m.algebra
    reg = registry(a)
    level = _nonprojective_classes(m)
    seen = set(level)
    degree = 1
    while level:
        for cid in level:
            if _ext1_regular(a, cid):
                return OrbitResult("fail", degree)
        if degree >= max_depth:
            return OrbitResult("unknown", degree)
        nxt = set()
        for cid in level:
            for c2, _ in reg.syzygy_classes(cid):
                if not reg.is_projective(c2) and c2 not in seen:
                    nxt.add(c2)
        seen |= nxt
        level = sorted(nxt)
        degree += 1
    return OrbitResult("ok", degree - 1, tuple(sorted(seen)))


def nonprojective_part(m: Module) -> tuple[Module, Module, ModuleMap]:
    """``m = core + Q`` with ``Q`` projective; returns core, Q and an
    isomorphism ``core + Q -> m``."""
    a = m.algebra
    pieces = indecomposable_summands(m)
    core_p = [p for p in pieces if not is_projective(p.module)]
    proj_p = [p for p in pieces if is_projective(p.module)]
    z = zero_module(a)
    core = direct_sum([p.module for p in core_p]) if core_p else None
    q = direct_sum([p.module for p in proj_p]) if proj_p else None
    core_m = core.module if core else z
    q_m = q.module if q else z
    both = direct_sum([core_m, q_m])
    total = ModuleMap.zero(both.module, m)
    if core:
        for k, p in enumerate(core_p):
            total = total + p.inclusion.compose(core.projections[k]).compose(both.projections[0])
    if q:
        for k, p in enumerate(proj_p):
            total = total + p.inclusion.compose(q.projections[k]).compose(both.projections[1])
    if core_p and len(core_p) == len(pieces):
        # no projective part: keep the original module as the core
        return m, z, ModuleMap.identity(m)
    return core_m, q_m, total


def periodic_resolution(core: Module, max_depth: int = DEFAULT_MAX_DEPTH) -> Optional[PeriodicResolution]:
    """Resolve ``core`` until ``Omega^p core`` is isomorphic to it."""
    steps = []
    cur = core
    for p in range(1, max_depth + 1):
        step = syzygy_step(cur)
        steps.append(step)
        cur = step.syzygy
        if cur.dims == core.dims:
            seam = find_isomorphism(cur, core)
            if seam is not None:
                break
    else:
        return None
    terms = [s.cover.projective for s in steps]
    maps = []
    for k in range(p):
        pi = steps[k].cover.map
        if k == 0:
            iota = steps[p - 1].inclusion.compose(seam.inverse())
        else:
            iota = steps[k - 1].inclusion
        maps.append(iota.compose(pi))
    return PeriodicResolution(core, p, terms, maps, seam)


# ---------------------------------------------------------------------------
# the decision procedure


def is_gp(m: Module, max_depth: int = DEFAULT_MAX_DEPTH) -> GPVerdict:
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    a = m.algebra
    if is_projective(m):
        return GPVerdict("yes", m, GPCertificate(m, 1, two_term(m), None), depth=0)
    left = ext_orbit(m, max_depth)
    if left.status == "fail":
        dim = ext(m, regular(a), left.degree)
        return GPVerdict("no", m, refutation=GPRefutation(m, ExtNonvanishing(left.degree, dim)), depth=left.degree)
    st = star(m)
    right = ext_orbit(st, max_depth)
    if right.status == "fail":
        dim = ext(st, regular(a.opposite()), right.degree)
        reason = StarSideExtNonvanishing(right.degree, dim)
        return GPVerdict("no", m, refutation=GPRefutation(m, reason), depth=right.degree)
    bid = biduality(m)
    if not bid.is_iso:
        return GPVerdict("no", m, refutation=GPRefutation(m, BidualityFails(bid.rank_deficit)))
    if left.status == "unknown" or right.status == "unknown":
        return GPVerdict("unknown", m, depth=max_depth)
    cert = certify(m, max_depth, ext_depth=max(left.degree, right.degree))
    if cert is None:
        return GPVerdict("unknown", m, depth=max_depth)
    return GPVerdict("yes", m, certificate=cert, depth=cert.period)


def certify(m: Module, max_depth: int = DEFAULT_MAX_DEPTH, ext_depth: int = 0) -> Optional[GPCertificate]:
    """Build the periodic window certificate for a totally reflexive module."""
    a = m.algebra
    core, q, iso = nonprojective_part(m)
    if core.is_zero():
        return GPCertificate(m, 1, two_term(m), None)
    res = periodic_resolution(core, max_depth)
    if res is None:
        return None
    p = res.period
    window = res.window(-(p + 2), p + 2)
    if not q.is_zero():
        z = zero_module(a)
        lo, hi = window.lo, window.hi
        terms = [z] * (hi - lo + 1)
        terms[0 - lo] = q
        terms[1 - lo] = q
        diffs = [ModuleMap.zero(terms[k], terms[k + 1]) for k in range(hi - lo)]
        diffs[0 - lo] = ModuleMap.identity(q)
        window = direct_sum_complex([window, Complex(lo, terms, diffs)])
    dual_res = periodic_resolution(star(core), max_depth)
    return GPCertificate(
        m,
        p,
        window,
        res.seam,
        dual_period=dual_res.period if dual_res else 0,
        dual_seam=dual_res.seam if dual_res else None,
        ext_depth=ext_depth,
        resolution=res,
    )


def complete_resolution(m: Module, cert: GPCertificate) -> Complex:
    if cert.module is not m:
        raise InvalidCertificate("certificate belongs to another module")
    if not cert.validate():
        failed = [k for k, ok in cert.audit().items() if not ok]
        raise InvalidCertificate(f"certificate checks failed: {failed}")
    return cert.window


# ---------------------------------------------------------------------------
# enumeration


def candidate_universe(a: Algebra) -> list[Module]:
    if a.is_nakayama:
        return uniserials(a)
    if a.is_monomial:
        return [projective(a, v) for v in range(a.n_vertices)] + path_ideal_modules(a)
    raise NotEnumerable(
        f"{a!r} has no built-in list of candidate modules; pass an explicit universe"
    )


@dataclass
class GPSurvey:
    algebra: Algebra
    verdicts: list[GPVerdict]

    @property
    def gp(self) -> list[Module]:
        return [v.module for v in self.verdicts if v.is_yes]

    @property
    def unknown(self) -> list[Module]:
        return [v.module for v in self.verdicts if v.status == "unknown"]

    @property
    def nonprojective_gp(self) -> list[Module]:
        return [m for m in self.gp if not is_projective(m)]


def gp_survey(a: Algebra, universe: Optional[Sequence[Module]] = None, max_depth: int = DEFAULT_MAX_DEPTH) -> GPSurvey:
    cands = list(universe) if universe is not None else candidate_universe(a)
    return GPSurvey(a, [is_gp(m, max_depth) for m in cands])


def gp_indecomposables(a: Algebra, universe: Optional[Sequence[Module]] = None, max_depth: int = DEFAULT_MAX_DEPTH) -> list[Module]:
    return gp_survey(a, universe, max_depth).gp


# ---------------------------------------------------------------------------
# brute-force oracle


def _restriction_surjective(inc: ModuleMap, target: Module) -> bool:
    """``Hom(P, target) -> Hom(K, target)`` induced by ``inc: K -> P`` is onto."""
    hk = hom(inc.source, target)
    if hk.dim == 0:
        return True
    hp = hom(inc.target, target)
    if hp.dim == 0:
        return False
    rows = hp.pre_compose(inc)[:, hk.pivots]
    return inc.field.rank(rows) == hk.dim


def _match(x: Module, pool: Sequence[Module]) -> Optional[int]:
    for i, y in enumerate(pool):
        if y.dims == x.dims and iso_indecomposable(x, y) is not None:
            return i
    return None


def oracle_graph(universe: Sequence[Module]) -> tuple[nx.DiGraph, list[Module]]:
    """Edges ``N -> X`` when ``0 -> X (+ proj) -> P -> N -> 0`` is exact under
    ``Hom(-, A)`` and ``X`` is the indecomposable non-projective part of the
    syzygy.  Nodes index the non-projective members of the universe."""
    if not universe:
        return nx.DiGraph(), []
    a = universe[0].algebra
    lam = regular(a)
    nodes = [u for u in universe if not is_projective(u)]
    g = nx.DiGraph()
    g.add_nodes_from(range(len(nodes)))
    for i, n in enumerate(nodes):
        step = syzygy_step(n)
        pieces = [p.module for p in indecomposable_summands(step.syzygy)]
        nonproj = [x for x in pieces if not is_projective(x)]
        matched = [_match(x, nodes) for x in nonproj]
        if any(j is None for j in matched):
            raise UniverseNotClosed(f"a syzygy summand of {n!r} is missing from the universe")
        if not _restriction_surjective(step.inclusion, lam):
            continue
        if len(matched) == 1:
            g.add_edge(i, matched[0])
    return g, nodes


def gp_oracle(m: Module, universe: Sequence[Module]) -> bool:
    """Brute-force GP test: every non-projective summand lies on a directed
    cycle of :func:`oracle_graph`."""
    if is_projective(m):
        return True
    g, nodes = oracle_graph(universe)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            on_cycle |= comp
        else:
            (v,) = comp
            if g.has_edge(v, v):
                on_cycle.add(v)
    for piece in indecomposable_summands(m):
        x = piece.module
        if is_projective(x):
            continue
        j = _match(x, nodes)
        if j is None:
            raise UniverseNotClosed(f"{x!r} is not in the universe")
        if j not in on_cycle:
            return False
    return True


def oracle_verdicts(universe: Sequence[Module]) -> list[bool]:
    """``gp_oracle`` for every universe member, sharing one graph."""
    g, nodes = oracle_graph(universe)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(v, v) for v in comp):
            on_cycle |= comp
    out = []
    for u in universe:
        if is_projective(u):
            out.append(True)
        else:
            out.append(nodes.index(u) in on_cycle)
    return out


# ---------------------------------------------------------------------------
# stability


@dataclass
class StabilityReport:
    invoked: bool
    reason: str = ""
    verdicts: dict[int, str] = dc_field(default_factory=dict)

    @property
    def contradiction(self) -> bool:
        return self.invoked and any(v == "no" for v in self.verdicts.values())

    @property
    def passed(self) -> bool:
        return self.invoked and all(v == "yes" for v in self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "invoked": self.invoked,
            "reason": self.reason,
            "images": {str(k): v for k, v in sorted(self.verdicts.items())},
            "passed": self.passed,
        }


def stability_check(c: Complex, e_summands: Sequence[Module], max_depth: int = DEFAULT_MAX_DEPTH) -> StabilityReport:
    """If the terms are GP and the complex is exact and biexact against the
    given summands, every image between interior terms must be GP."""
    for t in c.terms:
        if not t.is_zero() and not is_gp(t, max_depth).is_yes:
            return StabilityReport(False, f"term {t!r} is not Gorenstein-projective")
    if not is_exact(c):
        return StabilityReport(False, "complex is not exact")
    if not biexact(c, e_summands):
        return StabilityReport(False, "complex is not biexact")
    verdicts = {}
    for i in range(c.lo + 1, c.hi - 1):
        verdicts[i] = is_gp(image_at(c, i), max_depth).status
    return StabilityReport(True, "", verdicts)


def random_automorphism(m: Module, rng: np.random.Generator, tries: int = 32) -> ModuleMap:
    h = hom(m, m)
    for _ in range(tries):
        g = h.random(rng)
        if g.is_iso():
            return g
    return ModuleMap.identity(m)


def splice(resolutions: Sequence[PeriodicResolution], lo: int, hi: int, shifts: Sequence[int], seed: int = 0) -> Complex:
    """Direct sum of shifted periodic windows, with differentials twisted by
    random automorphisms of the terms."""
    parts = [r.window(lo, hi, s) for r, s in zip(resolutions, shifts)]
    total = direct_sum_complex(parts) if len(parts) > 1 else parts[0]
    rng = np.random.default_rng(seed)
    autos = [random_automorphism(t, rng) for t in total.terms]
    return conjugate(total, autos)


__all__ = [
    "BidualityFails",
    "DEFAULT_MAX_DEPTH",
    "ExtNonvanishing",
    "GPCertificate",
    "GPRefutation",
    "GPSurvey",
    "GPVerdict",
    "InvalidCertificate",
    "NotEnumerable",
    "OrbitResult",
    "PeriodicResolution",
    "StabilityReport",
    "StarSideExtNonvanishing",
    "UniverseNotClosed",
    "candidate_universe",
    "certify",
    "complete_resolution",
    "ext_orbit",
    "gp_indecomposables",
    "gp_oracle",
    "gp_survey",
    "is_gp",
    "nonprojective_part",
    "oracle_graph",
    "oracle_verdicts",
    "periodic_resolution",
    "random_automorphism",
    "regular",
    "splice",
    "spliced_complexes",
    "stability_check",
]


def spliced_complexes(a: Algebra, count: int, lo: int = -3, hi: int = 3, seed: int = 0,
                      max_depth: int = DEFAULT_MAX_DEPTH) -> list[Complex]:
    """Complexes of projectives glued from the periodic resolutions of the
    non-projective GP candidates of ``a``: sums of one or two shifted
    windows, twisted by random automorphisms."""
    survey = gp_survey(a, max_depth=max_depth)
    resolutions = [v.certificate.resolution for v in survey.verdicts
                   if v.is_yes and v.certificate.resolution is not None]
    if not resolutions:
        return []
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        width = 1 + int(rng.integers(0, 2))
        picks = [resolutions[int(i)] for i in rng.integers(0, len(resolutions), width)]
        shifts = [int(rng.integers(0, r.period)) for r in picks]
        out.append(splice(picks, lo, hi, shifts, seed=seed * 1000 + k))
    return out
