"""Command line front end.

Algebra files are TOML documents::

    kind = "nakayama-cyclic"      # or nakayama-linear, bound-quiver-monomial,
                                  # structure-constants
    characteristic = 32003        # optional
    name = "..."                  # optional

    [algebra]
    sequence = [6, 6, 5]          # Nakayama kinds
    # vertices = 2, arrows = [["a", 0, 1]], relations = [["a", "b"]]
    # dim = 3, entries = [[i, j, k, c], ...]   (b_i * b_j has c at b_k)

    [caps]                        # optional
    maxDepth = 64
    glDimCap = 64
    refutationDepth = 32

Exit codes: 0 success, 1 input error, 2 a verification check failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .algebra import (
    AlgebraError,
    Algebra,
    from_structure_constants,
    nakayama_algebra,
    path_algebra,
)
from .auslander import aus, cm_free_refutation, default_samples, verify_equivalence_exp, verify_fully_faithful
from .exactfield import CharacteristicError, DEFAULT_CHARACTERISTIC, PrimeField
from .gorenstein import NotEnumerable, spliced_complexes, stability_check
from .invariants import Caps, Finite, classify, global_dimension, is_gorenstein, verify_dif
from .modules import projectives

SCHEMA_VERSION = 1
KINDS = ("nakayama-cyclic", "nakayama-linear", "bound-quiver-monomial", "structure-constants")
UNKNOWN_TEXT = "unknown"
THEOREMS = ("free", "exp", "yoneda", "stability", "dif")

_TOP_KEYS = {"kind", "characteristic", "name", "algebra", "caps"}
_PAYLOAD_KEYS = {
    "nakayama-cyclic": {"sequence"},
    "nakayama-linear": {"sequence"},
    "bound-quiver-monomial": {"vertices", "arrows", "relations"},
    "structure-constants": {"dim", "entries", "labels"},
}
_CAP_KEYS = {"maxDepth": "max_depth", "glDimCap": "gl_dim_cap", "refutationDepth": "refutation_depth"}


class SpecError(ValueError):
    pass


@dataclass
class AlgebraSpecFile:
    kind: str
    payload: dict
    characteristic: int
    name: str
    caps: Caps

    def build(self, characteristic: Optional[int] = None) -> Algebra:
        field = PrimeField(characteristic or self.characteristic)
        pl = self.payload
        if self.kind in ("nakayama-cyclic", "nakayama-linear"):
            shape = self.kind.split("-")[1]
            a = nakayama_algebra(*pl["sequence"], shape=shape, field=field)
        elif self.kind == "bound-quiver-monomial":
            arrows = [(str(n), int(s), int(t)) for n, s, t in pl["arrows"]]
            a = path_algebra(int(pl["vertices"]), arrows, pl.get("relations", []), field, name=self.name)
        else:
            d = int(pl["dim"])
            table = np.zeros((d, d, d), dtype=np.int64)
            for i, j, k, c in pl["entries"]:
                table[i, j, k] = c
            a = from_structure_constants(table, field, labels=pl.get("labels"), name=self.name or "structure-constants")
        if self.name:
            a.name = self.name
        return a


def _locate(text: str, key: str) -> str:
    for n, line in enumerate(text.splitlines(), 1):
        m = re.match(rf"\s*(\[\s*)?{re.escape(key)}\s*[=\]]", line)
        if m:
            return f"line {n}, column {line.index(key) + 1}: "
    return ""


def _reject_unknown(found, allowed, where: str, text: str = "") -> None:
    extra = sorted(set(found) - set(allowed))
    if extra:
        raise SpecError(f"{_locate(text, extra[0])}unknown key(s) in {where}: {', '.join(extra)}")


def parse_spec(text: str) -> AlgebraSpecFile:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        where = f"line {line}, column {col}: " if line is not None else ""
        raise SpecError(f"{where}parse error: {getattr(exc, 'msg', exc)}") from exc
    _reject_unknown(doc, _TOP_KEYS, "the top level", text)
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {', '.join(KINDS)}; got {kind!r}")
    payload = doc.get("algebra", {})
    if not isinstance(payload, dict):
        raise SpecError("[algebra] must be a table")
    _reject_unknown(payload, _PAYLOAD_KEYS[kind], "[algebra]", text)
    required = {"structure-constants": {"dim", "entries"}, "bound-quiver-monomial": {"vertices", "arrows"}}.get(
        kind, {"sequence"}
    )
    missing = sorted(required - set(payload))
    if missing:
        raise SpecError(f"[algebra] is missing {', '.join(missing)}")
    caps_doc = doc.get("caps", {})
    _reject_unknown(caps_doc, _CAP_KEYS, "[caps]", text)
    caps = Caps(**{_CAP_KEYS[k]: int(v) for k, v in caps_doc.items()})
    return AlgebraSpecFile(kind, payload, int(doc.get("characteristic", DEFAULT_CHARACTERISTIC)), str(doc.get("name", "")), caps)


def load_spec(path: str) -> tuple[AlgebraSpecFile, bytes]:
    raw = Path(path).read_bytes()
    return parse_spec(raw.decode("utf-8")), raw


def dump_structure_constants(a: Algebra, name: str = "") -> str:
    """Structure-constants spec text for ``a`` (re-readable by ``parse_spec``)."""
    idx = np.argwhere(a.table)
    lines = [
        'kind = "structure-constants"',
        f"characteristic = {a.p}",
        f"name = {json.dumps(name or a.name)}",
        "",
        "[algebra]",
        f"dim = {a.dim}",
        "labels = [" + ", ".join(json.dumps(x) for x in a.labels) + "]",
        "entries = [",
    ]
    for i, j, k in idx:
        lines.append(f"  [{i}, {j}, {k}, {int(a.table[i, j, k])}],")
    lines.append("]")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# envelope and output


def envelope(raw: bytes, p: int, body: dict, started: Optional[float] = None) -> dict:
    out = {
        "schemaVersion": SCHEMA_VERSION,
        "tool": "cmfree",
        "version": __version__,
        "inputHash": hashlib.sha256(raw).hexdigest(),
        "characteristic": p,
        **body,
    }
    if started is not None:
        out["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    return out


def _emit(doc: dict, as_json: bool, human: Sequence[str]) -> None:
    if as_json:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(human) + "\n")


def _fmt(value) -> str:
    if isinstance(value, dict) and "status" in value:
        if value["status"] == "finite":
            return f"Finite({value['value']})"
        if value["status"] == "infinite":
            w = value["witness"]
            return f"CertifiedInfinite(i={w['i']}, j={w['j']})"
        return f"Unknown(cap={value['cap']})"
    return str(value).lower() if isinstance(value, bool) else str(value)


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    spec, raw = load_spec(args.file)
    caps = spec.caps
    if args.cap is not None:
        caps = Caps(args.cap, args.cap, caps.refutation_depth)
    a = spec.build(args.char)
    started = time.perf_counter() if args.timing else None
    report = classify(a, caps)
    doc = envelope(raw, a.p, {"report": report.to_json(certificates=args.certificates)}, started)
    r = doc["report"]
    human = [
        f"algebra        {r['algebra']} (dim {r['dim']}, {r['vertices']} vertices, GF({r['characteristic']}))",
        f"CM-finite      {_fmt(r['cmFinite'])}",
        f"GP count       {UNKNOWN_TEXT if r['gpCount'] is None else r['gpCount']}",
        f"CM-free        {_fmt(r['cmFree'])}",
        f"Gorenstein     {_fmt(r['gorenstein'])}",
        f"injdim left    {_fmt(r['injDimLeft'])}",
        f"injdim right   {_fmt(r['injDimRight'])}",
        f"gl.dim         {_fmt(r['glDim'])}",
        f"D_sg = 0       {_fmt(r['sgTrivial'])}",
        f"D_defect = 0   {_fmt(r['defectTrivial'])}",
    ]
    if r["aus"] and "dim" in r["aus"]:
        au = r["aus"]
        human.append(
            f"Aus            dim {au['dim']}, {au['idempotents']} idempotents, gl.dim {_fmt(au['glDim'])}, "
            f"refutation empty {_fmt(au['cmFreeRefutationEmpty'])}"
        )
    elif r["aus"]:
        human.append(f"CM-free refutation empty {_fmt(r['aus']['cmFreeRefutationEmpty'])}")
    for c in r["checks"]:
        human.append(f"check {c['name']:<28} {'pass' if c['passed'] else 'FAIL'}")
    human.extend(f"note: {n}" for n in r["notes"])
    _emit(doc, args.json, human)
    return 2 if report.contradiction else 0


def _verify(a: Algebra, theorem: str, caps: Caps) -> dict:
    if theorem == "yoneda":
        aa = aus(a, max_depth=caps.max_depth)
        rep = verify_fully_faithful(aa, default_samples(a))
        return rep.to_json()
    if theorem == "exp":
        aa = aus(a, max_depth=caps.max_depth)
        return verify_equivalence_exp(aa, caps.refutation_depth).to_json()
    if theorem == "free":
        aa = aus(a, max_depth=caps.max_depth)
        ref = cm_free_refutation(aa.gamma, caps.refutation_depth, caps.max_depth)
        gor = is_gorenstein(a, caps.gl_dim_cap)
        gl = global_dimension(aa.gamma, caps.gl_dim_cap)
        if gor is True:
            map_ok = isinstance(gl, Finite)
        elif gor is False:
            map_ok = not isinstance(gl, Finite)
        else:
            map_ok = True
        return {
            "name": "free",
            "passed": ref.empty and map_ok,
            "refutationEmpty": ref.empty,
            "explored": ref.explored,
            "gorenstein": gor,
            "ausGlDim": gl.to_json(),
        }
    if theorem == "stability":
        complexes = spliced_complexes(a, 10, seed=0, max_depth=caps.max_depth)
        reports = [stability_check(c, projectives(a), caps.max_depth) for c in complexes]
        return {
            "name": "stability",
            "passed": bool(reports) and all(r.passed for r in reports),
            "complexes": len(reports),
            "results": [r.to_json() for r in reports],
        }
    if theorem == "dif":
        return verify_dif(a, caps.gl_dim_cap).to_json()
    raise SpecError(f"unknown theorem {theorem!r}")


def cmd_verify(args) -> int:
    spec, raw = load_spec(args.file)
    a = spec.build(args.char)
    started = time.perf_counter() if args.timing else None
    result = _verify(a, args.theorem, spec.caps)
    doc = envelope(raw, a.p, {"theorem": args.theorem, "result": result}, started)
    human = [f"verify {args.theorem} on {a.name}: {'pass' if result['passed'] else 'FAIL'}"]
    _emit(doc, args.json, human)
    return 0 if result["passed"] else 2


def cmd_aus(args) -> int:
    spec, raw = load_spec(args.file)
    a = spec.build(args.char)
    aa = aus(a, max_depth=spec.caps.max_depth)
    text = dump_structure_constants(aa.gamma, name=f"Aus({a.name})")
    Path(args.emit).write_text(text)
    doc = envelope(raw, a.p, {"aus": aa.to_json(), "emitted": str(args.emit)})
    human = [f"wrote {args.emit}: Aus({a.name}) of dimension {aa.dim} with {aa.gamma.n_vertices} idempotents"]
    _emit(doc, args.json, human)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmfree", description="Gorenstein-projective census and Auslander algebra checks.")
    parser.add_argument("--version", action="version", version=f"cmfree {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="algebra description (TOML)")
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--char", type=int, default=None, help="override the field characteristic")
        p.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identical output)")

    p = sub.add_parser("classify", help="run the full classification pipeline")
    common(p)
    p.add_argument("--certificates", action="store_true", help="include GP certificates and refutations")
    p.add_argument("--cap", type=int, default=None, help="depth cap for GP orbits and dimension computations")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run one theorem check")
    common(p)
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("aus", help="write the relative Auslander algebra as a structure-constants file")
    common(p)
    p.add_argument("--emit", required=True, help="output path")
    p.set_defaults(func=cmd_aus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, AlgebraError, CharacteristicError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except NotEnumerable as exc:
        print(f"error: NotEnumerable: {exc}", file=sys.stderr)
        print("hint: GP enumeration needs a Nakayama or monomial presentation", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
