"""Command-line front end.

JSON reports go to ``--out`` (or stdout), a one-line human summary goes to
stderr.  Exit codes: 0 success, 1 invalid input, 2 an internal invariant
failed, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import corpus
from .complex import SimplicialComplex, homology, subdivide, validate_complex
from .exitpath import check_weak, classifying_space_check, enter_category, is_groupoid
from .poset import Poset, validate_poset
from .ran import ran_poset
from .report import InvariantError, Report, StratkitError, ValidationError
from .sheaf import Sheaf, cohomology, global_sections, is_locally_constant, pullback_refinement, validate_sheaf
from .strat import (
    StratifiedComplex,
    cone_strat,
    depth_dim_report,
    face_stratification,
    join_strat,
    product_strat,
    restrict,
    subdivide_strat,
    validate_strat,
)
from .unzip import export_part, unzip_once, unzip_tower

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("stratkit")

KEYS = {
    frozenset({"elements", "leq"}): "poset",
    frozenset({"vertices", "simplices"}): "complex",
    frozenset({"complex", "poset", "assignment"}): "stratified",
    frozenset({"base", "dims", "maps"}): "sheaf",
}


class UsageError(Exception):
    pass


class Workspace:
    """Named documents, loaded from files or built from the corpus."""

    def __init__(self) -> None:
        self.docs: dict[str, tuple[str, Any]] = {}

    def register(self, name: str, kind: str, doc: Any) -> None:
        if name in self.docs and self.docs[name][1] is not doc:
            raise ValidationError(f"document name {name!r} already registered")
        self.docs[name] = (kind, doc)

    def load(self, ref: str, *, check: bool = True) -> tuple[str, Any]:
        if ref in self.docs:
            return self.docs[ref]
        if ref.startswith("corpus:"):
            name = ref[len("corpus:"):]
            try:
                kind, doc = corpus.build(name)
            except KeyError:
                raise UsageError(f"unknown corpus entry {name!r}") from None
        else:
            kind, doc = self._load_file(Path(ref), check)
        self.register(ref, kind, doc)
        return kind, doc

    def _load_file(self, path: Path, check: bool) -> tuple[str, Any]:
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise ValidationError(f"{path}: top level must be an object")
        return self.parse(raw, check=check, where=str(path))

    def parse(self, raw: dict, *, check: bool = True, where: str = "document") -> tuple[str, Any]:
        kind = None
        for keys, k in KEYS.items():
            if set(raw) <= keys and ({"elements", "vertices", "complex", "base"} & set(raw) & keys):
                kind = k
                break
        if kind is None:
            raise ValidationError(f"{where}: unrecognised top-level keys {sorted(raw)}")
        if kind == "poset":
            return kind, Poset.from_json(raw, check=check)
        if kind == "complex":
            return kind, SimplicialComplex.from_json(raw)
        if kind == "stratified":
            k = SimplicialComplex.from_json(raw["complex"])
            p = Poset.from_json(raw["poset"])
            assign = {tuple(str(v) for v in s): str(q) for s, q in raw["assignment"]}
            return kind, StratifiedComplex(k, p, assign, check=check)
        base = raw["base"]
        if isinstance(base, str):
            bkind, space = self.load(base)
            space = as_stratified(bkind, space)
        else:
            space = as_stratified(*self.parse(base, where=where + " base"))
        maps = {(s, t): [[Fraction(x) for x in row] for row in m] for s, t, m in raw["maps"]}
        return kind, Sheaf(space, raw["dims"], maps, check=check)


def as_stratified(kind: str, doc: Any) -> StratifiedComplex:
    if kind == "stratified":
        return doc
    if kind == "complex":
        return face_stratification(doc)
    if kind == "sheaf":
        return doc.space
    raise UsageError(f"expected a complex, got a {kind}")


def as_complex(kind: str, doc: Any) -> SimplicialComplex:
    if kind == "complex":
        return doc
    return as_stratified(kind, doc).complex


# -- commands ------------------------------------------------------------

def cmd_validate(ws: Workspace, a) -> tuple[dict, str, int]:
    kind, doc = ws.load(a.ref, check=False)
    rep: Report = {
        "poset": validate_poset,
        "complex": validate_complex,
        "stratified": validate_strat,
        "sheaf": validate_sheaf,
    }[kind](doc)
    out = {"kind": kind, "report": rep.to_json()}
    summary = f"{kind}: {'valid' if rep.ok else 'INVALID ' + ', '.join(sorted(rep.kinds()))}"
    return out, summary, EXIT_OK if rep.ok else EXIT_INVALID


def cmd_homology(ws, a):
    k = as_complex(*ws.load(a.ref))
    h = homology(k, a.field)
    return {"f_vector": list(k.f_vector), **h.to_json()}, f"betti {list(h.betti)} over {h.field}", EXIT_OK


def cmd_strata_report(ws, a):
    x = as_stratified(*ws.load(a.ref))
    rep = depth_dim_report(x)
    verdict = "monotone" if rep.monotone else f"NOT monotone at {rep.violations[0]}"
    return rep.to_json(), f"{len(rep.table)} strata, max depth {rep.max_depth}, {verdict}", EXIT_OK


def cmd_exitpath(ws, a):
    x = as_stratified(*ws.load(a.ref))
    rc = enter_category(x)
    weak = check_weak(rc)
    cs = classifying_space_check(x, a.field)
    grp, witness = is_groupoid(x)
    if not cs.ok:
        raise InvariantError(f"nerve betti {cs.betti_nerve} != complex betti {cs.betti_space}")
    if not weak.ok:
        raise InvariantError(f"weak equivalences malformed: {sorted(weak.kinds())}")
    out = {
        "objects": len(rc.base),
        "weak": sorted(list(w) for w in rc.weak),
        "classifying_space": cs.to_json(),
        "groupoid": grp,
        "non_weak_witness": list(witness) if witness else None,
    }
    return out, f"{len(rc.base)} objects, {len(rc.weak)} weak arrows, groupoid={grp}", EXIT_OK


def cmd_sheaf_cohomology(ws, a):
    kind, f = ws.load(a.ref)
    if kind != "sheaf":
        raise UsageError("sheaf-cohomology needs a sheaf")
    for _ in range(a.refine):
        f = pullback_refinement(f)
    h = cohomology(f)
    gs = global_sections(f)
    if gs.dim != (h.dims[0] if h.dims else 0):
        raise InvariantError(f"global sections {gs.dim} != H0 {h.dims[0]}")
    out = {"cohomology": h.to_json(), "global_sections": gs.dim, "locally_constant": is_locally_constant(f)}
    return out, f"H = {list(h.dims)}", EXIT_OK


def cmd_unzip(ws, a):
    x = as_stratified(*ws.load(a.ref))
    dec = unzip_once(x, a.deep or [], field=a.field)
    summary = (
        f"unzip f={list(dec.unzip.complex.f_vector)}, link f={list(dec.link.f_vector)}, "
        f"ledger {'balanced' if dec.ledger.balanced else 'UNBALANCED'}"
    )
    return dec.to_json(), summary, EXIT_OK


def cmd_unzip_tower(ws, a):
    x = as_stratified(*ws.load(a.ref))
    stages = unzip_tower(x, field=a.field)
    out = {
        "stages": [
            {
                "deep": sorted(s.classification.deep_strata),
                "unzip_f_vector": list(s.unzip.complex.f_vector),
                "link_f_vector": list(s.link.f_vector),
                "max_depth_after": depth_dim_report(s.unzip).max_depth,
                "ledger": s.ledger.to_json(),
            }
            for s in stages
        ]
    }
    return out, f"tower of length {len(stages)}", EXIT_OK


def cmd_ran_poset(ws, a):
    kind, p = ws.load(a.ref)
    if kind != "poset":
        raise UsageError("ran-poset needs a poset")
    r = ran_poset(p, a.bound)
    out = {
        "relation": r.poset.to_json(),
        "counts": {k: list(v) for k, v in sorted(r.counts.items())},
        "verdict": r.verdict.to_json(),
    }
    verdict = "poset" if r.is_poset else "not a poset: " + ", ".join(sorted(r.verdict.kinds()))
    return out, f"{len(r.poset)} elements, {verdict}", EXIT_OK


def cmd_cone(ws, a):
    x = as_stratified(*ws.load(a.ref))
    c = cone_strat(a.apex_vertex, x)
    return c.to_json(), f"cone f={list(c.complex.f_vector)}", EXIT_OK


def cmd_join(ws, a):
    x = as_stratified(*ws.load(a.ref))
    y = as_stratified(*ws.load(a.other))
    j = join_strat(x, y)
    return j.to_json(), f"join f={list(j.complex.f_vector)}", EXIT_OK


def cmd_product(ws, a):
    x = as_stratified(*ws.load(a.ref))
    y = as_stratified(*ws.load(a.other))
    p = product_strat(x, y)
    return p.to_json(), f"product f={list(p.complex.f_vector)}", EXIT_OK


def cmd_subdivide(ws, a):
    kind, doc = ws.load(a.ref)
    if kind == "complex":
        k = doc
        for _ in range(a.times):
            k = subdivide(k)[0]
        return k.to_json(), f"subdivision f={list(k.f_vector)}", EXIT_OK
    x = as_stratified(kind, doc)
    for _ in range(a.times):
        x = subdivide_strat(x)
    return x.to_json(), f"subdivision f={list(x.complex.f_vector)}", EXIT_OK


def cmd_restrict(ws, a):
    x = as_stratified(*ws.load(a.ref))
    r = restrict(x, a.strata or [])
    return r.to_json(), f"restriction f={list(r.complex.f_vector)}", EXIT_OK


def cmd_mesh_export(ws, a):
    x = as_stratified(*ws.load(a.ref))
    dec = unzip_once(x, a.deep or [], field=None)
    text = export_part(dec, a.part)
    return text, f"OFF mesh of {a.part}", EXIT_OK


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "strata-report": cmd_strata_report,
    "exitpath": cmd_exitpath,
    "sheaf-cohomology": cmd_sheaf_cohomology,
    "unzip": cmd_unzip,
    "unzip-tower": cmd_unzip_tower,
    "ran-poset": cmd_ran_poset,
    "cone": cmd_cone,
    "join": cmd_join,
    "product": cmd_product,
    "subdivide": cmd_subdivide,
    "restrict": cmd_restrict,
    "mesh-export": cmd_mesh_export,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default="q", choices=["q", "f2"])
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--log", help="append a timestamped log to this file")

    parser = _Parser(prog="stratkit", description="Combinatorial stratified spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str, *refs: str):
        p = sub.add_parser(name, parents=[common], help=help)
        for r in refs:
            p.add_argument(r, help="corpus:NAME or a JSON file")
        return p

    add("validate", "check a document against its axioms", "ref")
    add("homology", "Betti numbers", "ref")
    add("strata-report", "depth and dimension per stratum", "ref")
    add("exitpath", "enter-path relative category", "ref")
    add("sheaf-cohomology", "cohomology of a sheaf", "ref").add_argument("--refine", type=int, default=0)
    add("unzip", "unzip a closed union of strata", "ref").add_argument("--deep", action="append")
    add("unzip-tower", "iterated unzip down to depth zero", "ref")
    add("ran-poset", "bounded Ran poset over a poset", "ref").add_argument("--bound", type=int, required=True)
    add("cone", "stratified cone", "ref").add_argument("--apex-vertex", default="v")
    add("join", "stratified join", "ref", "other")
    add("product", "stratified product", "ref", "other")
    add("subdivide", "barycentric subdivision", "ref").add_argument("--times", type=int, default=1)
    add("restrict", "restriction to a consecutive set of strata", "ref").add_argument("--strata", action="append")
    mesh = add("mesh-export", "OFF mesh of an unzip part", "ref")
    mesh.add_argument("--deep", action="append")
    mesh.add_argument("--part", default="unzip")
    return parser


def _setup_log(path: str | None) -> None:
    log.handlers.clear()
    log.propagate = False
    if not path:
        log.addHandler(logging.NullHandler())
    else:
        h = logging.FileHandler(path)
        h.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
        log.addHandler(h)
        log.setLevel(logging.INFO)


def dispatch(argv: Sequence[str]) -> tuple[str | None, str, int]:
    """Run one command; returns ``(payload, summary, exit code)``."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        return None, f"usage: {exc}", EXIT_USAGE
    _setup_log(args.log)
    log.info("command %s %s", args.command, " ".join(argv))
    ws = Workspace()
    try:
        out, summary, code = COMMANDS[args.command](ws, args)
    except UsageError as exc:
        return None, f"usage: {exc}", EXIT_USAGE
    except InvariantError as exc:
        log.error("invariant failure: %s", exc)
        return None, f"internal invariant failed: {exc}", EXIT_INVARIANT
    except (ValidationError, StratkitError) as exc:
        payload = None
        if getattr(exc, "report", None) is not None:
            payload = json.dumps(exc.report.to_json(), indent=2, sort_keys=True) + "\n"
        log.error("invalid input: %s", exc)
        return payload, f"invalid: {exc}", EXIT_INVALID
    payload = out if isinstance(out, str) else json.dumps(out, indent=2, sort_keys=True) + "\n"
    log.info("exit %d: %s", code, summary)
    return payload, summary, code


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    payload, summary, code = dispatch(argv)
    out_path = None
    if code != EXIT_USAGE:
        out_path = _out_arg(argv)
    if payload is not None:
        if out_path:
            Path(out_path).write_text(payload)
        else:
            sys.stdout.write(payload)
    print(summary, file=sys.stderr)
    return code


def _out_arg(argv: Sequence[str]) -> str | None:
    args = list(argv)
    for i, x in enumerate(args):
        if x == "--out" and i + 1 < len(args):
            return args[i + 1]
        if x.startswith("--out="):
            return x.split("=", 1)[1]
    return None


if __name__ == "__main__":
    sys.exit(main())
