"""Stratified simplicial complexes: a complex with a monotone map to a poset.

Monotonicity of the assignment (a face never sits in a larger stratum than
its coface) is exactly continuity of ``|K| -> P`` for the Alexandrov topology.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import complex as cx
from .complex import Simplex, SimplicialComplex, simplex_id
from .poset import (
    APEX,
    DepthDim,
    Poset,
    cone,
    consecutive_check,
    join_poset,
    pair_id,
    pp_make,
    product,
)
from .report import Report, ValidationError


class StratifiedComplex:
    def __init__(
        self,
        complex: SimplicialComplex,
        poset: Poset,
        assignment: Mapping[Iterable[str], str],
        *,
        check: bool = True,
    ):
        self.complex = complex
        self.poset = poset
        assign: dict[Simplex, str] = {}
        for s, p in assignment.items():
            try:
                key = complex.normalize(s)
            except KeyError:
                raise ValidationError(f"assignment references unknown simplex {tuple(s)!r}") from None
            if key not in complex.simplices:
                raise ValidationError(f"assignment references unknown simplex {tuple(s)!r}")
            if p not in poset:
                raise ValidationError(f"assignment references unknown stratum {p!r}")
            assign[key] = p
        missing = complex.simplices - assign.keys()
        if missing:
            first = min(missing, key=lambda s: (len(s), s))
            raise ValidationError(f"simplex {first!r} has no stratum")
        self.assignment: dict[Simplex, str] = assign
        if check:
            validate_strat(self).raise_if_invalid()

    def __repr__(self) -> str:
        return f"StratifiedComplex(f={self.complex.f_vector}, strata={len(self.poset)})"

    def stratum(self, s: Iterable[str]) -> str:
        return self.assignment[self.complex.normalize(s)]

    def strata_members(self) -> dict[str, list[Simplex]]:
        out: dict[str, list[Simplex]] = {p: [] for p in self.poset.elements}
        for s in self.complex.ordered:
            out[self.assignment[s]].append(s)
        return out

    def deep_simplices(self, d: Iterable[str]) -> frozenset[Simplex]:
        d = set(d)
        return frozenset(s for s, p in self.assignment.items() if p in d)

    def relabel(self, *, vertex_prefix: str = "", stratum_prefix: str = "") -> "StratifiedComplex":
        k = self.complex.relabel(prefix=vertex_prefix)
        p = self.poset.relabel(prefix=stratum_prefix)
        assign = {
            tuple(vertex_prefix + v for v in s): stratum_prefix + q for s, q in self.assignment.items()
        }
        return StratifiedComplex(k, p, assign, check=False)

    def to_json(self) -> dict:
        return {
            "complex": self.complex.to_json(),
            "poset": self.poset.to_json(),
            "assignment": [[list(s), self.assignment[s]] for s in self.complex.ordered],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "StratifiedComplex":
        extra = set(doc) - {"complex", "poset", "assignment"}
        if extra:
            raise ValidationError(f"unknown stratified complex keys: {sorted(extra)}")
        k = SimplicialComplex.from_json(doc["complex"])
        p = Poset.from_json(doc["poset"])
        assign = {tuple(str(v) for v in s): str(q) for s, q in doc["assignment"]}
        return cls(k, p, assign)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def validate_strat(x: StratifiedComplex) -> Report:
    """Every face pair breaking monotonicity; empty strata as warnings."""
    rep = Report("stratified complex")
    for t in x.complex.ordered:
        pt = x.assignment[t]
        for s in cx.all_faces(t):
            if s == t:
                continue
            ps = x.assignment[s]
            if not x.poset.le(ps, pt):
                rep.add("non-monotone", (list(s), list(t)), f"{ps} !<= {pt}")
    used = set(x.assignment.values())
    for p in x.poset.elements:
        if p not in used:
            rep.warn("empty-stratum", (p,))
    return rep


# -- constructions -----------------------------------------------------

def face_stratification(k: SimplicialComplex) -> StratifiedComplex:
    """Stratify by open simplices: strata poset = face poset, assignment = identity."""
    return StratifiedComplex(k, k.face_poset, {s: simplex_id(s) for s in k.simplices}, check=False)


def single_stratum(k: SimplicialComplex, label: str = "X") -> StratifiedComplex:
    return StratifiedComplex(k, Poset([label], [[True]], check=False), {s: label for s in k.simplices}, check=False)


def standard_simplex_stratification(n: int) -> StratifiedComplex:
    """``Delta^n -> [n]``: a simplex goes to its largest vertex index."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    labels = [str(i) for i in range(n + 1)]
    k = SimplicialComplex.from_facets([labels], vertices=labels)
    assign = {s: max(s, key=int) for s in k.simplices}
    return StratifiedComplex(k, Poset.chain(n), assign, check=False)


def cone_strat(v: str, x: StratifiedComplex, apex: str = APEX) -> StratifiedComplex:
    """Stratified cone: the apex vertex ``v`` is the new minimal stratum ``apex``."""
    k = cx.cone_complex(v, x.complex)
    p = cone(x.poset, apex)
    assign: dict[Simplex, str] = {(v,): apex}
    for s, q in x.assignment.items():
        assign[s] = q
        assign[(v,) + s] = q
    return StratifiedComplex(k, p, assign, check=False)


def join_strat(x: StratifiedComplex, y: StratifiedComplex) -> StratifiedComplex:
    k = cx.join_complex(x.complex, y.complex)
    p = join_poset(x.poset, y.poset)
    assign: dict[Simplex, str] = {}
    assign.update(x.assignment)
    assign.update(y.assignment)
    for s, a in x.assignment.items():
        for t, b in y.assignment.items():
            assign[s + t] = pair_id(a, b)
    return StratifiedComplex(k, p, assign, check=False)


def product_strat(x: StratifiedComplex, y: StratifiedComplex) -> StratifiedComplex:
    """Product over ``P x Q``; a chain of pairs goes to the strata of its top pair."""
    k, lookup = cx.product_with_pairs(x.complex, y.complex)
    p = product(x.poset, y.poset)
    assign = {}
    for chain in k.simplices:
        s, t = lookup[chain[-1]]
        assign[chain] = pair_id(x.assignment[s], y.assignment[t])
    return StratifiedComplex(k, p, assign, check=False)


def subdivide_strat(x: StratifiedComplex) -> StratifiedComplex:
    """``Sd K`` with each chain placed in the stratum of its top simplex."""
    sd, _ = cx.subdivide(x.complex)
    simp = x.complex.simplex_of
    assign = {chain: x.assignment[simp[chain[-1]]] for chain in sd.simplices}
    return StratifiedComplex(sd, x.poset, assign, check=False)


def restrict(x: StratifiedComplex, q: Iterable[str]) -> StratifiedComplex:
    """Model of ``X|Q`` for a consecutive ``Q``.

    Closed (downward-closed) ``Q`` gives the literal subcomplex.  Open
    (upward-closed) ``Q`` gives the full subcomplex of the subdivision on the
    barycenters of simplices in ``Q``, which is a deformation retract of the
    open subspace.  A general consecutive ``Q`` is closed inside its upward
    closure, so the two steps compose.
    """
    q = frozenset(q)
    verdict = consecutive_check(q, x.poset)
    if not verdict:
        raise ValidationError(
            f"restriction to a non-consecutive subposet; witness {verdict.witness}",
        )
    if q == frozenset(x.poset.elements):
        return x
    target = x.poset.subposet(q)
    if x.poset.is_downward_closed(q):
        keep = {s: p for s, p in x.assignment.items() if p in q}
        return StratifiedComplex(x.complex.subcomplex(keep), target, keep, check=False)
    up = x.poset.upset(q)
    sdx = subdivide_strat(x)
    bary = [simplex_id(s) for s, p in x.assignment.items() if p in up]
    opened = sdx.complex.full_subcomplex(bary)
    keep = {c: sdx.assignment[c] for c in opened.simplices if sdx.assignment[c] in q}
    return StratifiedComplex(opened.subcomplex(keep), target, keep, check=False)


# -- depth and dimension -------------------------------------------------

@dataclass(frozen=True)
class StratumDepth:
    stratum_dim: int
    star_dim: int
    pure: bool

    @property
    def depth(self) -> int:
        return self.star_dim - self.stratum_dim

    @property
    def point(self) -> DepthDim:
        return DepthDim(self.depth, self.star_dim)


@dataclass
class DepthDimReport:
    table: dict[str, StratumDepth]
    target: Poset
    violations: list[tuple[str, str]] = field(default_factory=list)
    excluded: list[str] = field(default_factory=list)
    empty: list[str] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return not self.violations

    @property
    def pmap(self) -> dict[str, str]:
        return {p: row.point.id for p, row in self.table.items()}

    def depth(self, p: str) -> int:
        return self.table[p].depth

    @property
    def max_depth(self) -> int:
        return max((r.depth for r in self.table.values()), default=-1)

    def to_json(self) -> dict:
        return {
            "table": [
                {
                    "stratum": p,
                    "stratum_dim": r.stratum_dim,
                    "star_dim": r.star_dim,
                    "depth": r.depth,
                    "pure": r.pure,
                    "image": r.point.id,
                }
                for p, r in sorted(self.table.items())
            ],
            "monotone": self.monotone,
            "violations": [list(v) for v in self.violations],
            "non_pure": sorted(self.excluded),
            "empty_strata": sorted(self.empty),
        }


def depth_dim_report(x: StratifiedComplex) -> DepthDimReport:
    """Per-stratum dimension, local dimension and depth, and the induced map to
    the (depth, dimension) poset, checked for order preservation.

    Strata whose simplices do not share one star dimension are marked
    non-pure and left out of the monotonicity verdict.
    """
    members = x.strata_members()
    k = x.complex
    table: dict[str, StratumDepth] = {}
    empty = []
    for p, simps in members.items():
        if not simps:
            empty.append(p)
            continue
        stars = {k.star_dim(s) for s in simps}
        table[p] = StratumDepth(
            stratum_dim=max(len(s) - 1 for s in simps),
            star_dim=max(stars),
            pure=len(stars) == 1,
        )
    target = pp_make(max((r.star_dim for r in table.values()), default=-1))
    rep = DepthDimReport(table, target, empty=empty)
    rep.excluded = sorted(p for p, r in table.items() if not r.pure)
    # order preservation on covers implies it on every comparable pair, as
    # long as no pure stratum is skipped; otherwise fall back to all pairs
    points = {p: r.point for p, r in table.items() if r.pure}
    if len(points) == len(x.poset):
        pairs = x.poset.covers()
    else:
        pairs = [(a, b) for a in x.poset.elements for b in sorted(x.poset.up(a)) if a != b]
    for a, b in pairs:
        if a in points and b in points and not points[a].le(points[b]):
            rep.violations.append((a, b))
    rep.violations.sort()
    return rep
