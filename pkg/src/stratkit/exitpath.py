"""Enter-path categories of stratified complexes as finite relative categories.

The enter-path category of a stratified complex is presented by the face
poset together with the face relations that stay inside one stratum (the weak
equivalences).  The localization at those is never built; consumers work
with functors on the face poset that invert them.
"""
from __future__ import annotations

from dataclasses import dataclass

from .complex import SimplicialComplex, homology, simplex_id, subdivide, all_faces, faces
from .poset import Poset, is_order_preserving, order_complex
from .report import Report
from .strat import StratifiedComplex


@dataclass(frozen=True)
class RelativeCategory:
    base: Poset
    weak: frozenset[tuple[str, str]]

    def is_weak(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.weak

    def to_json(self) -> dict:
        return {"poset": self.base.to_json(), "weak": sorted([list(w) for w in self.weak])}


def check_weak(rc: RelativeCategory) -> Report:
    """``W`` is made of strict relations, composes, and cancels inside chains."""
    rep = Report("relative category")
    P = rc.base
    for a, b in sorted(rc.weak):
        if not P.lt(a, b):
            rep.add("weak-not-strict", (a, b))
    for a, b in sorted(rc.weak):
        for c in sorted(P.up(b)):
            if c != b and (b, c) in rc.weak and (a, c) not in rc.weak:
                rep.add("weak-not-composable", (a, b, c))
        for m in sorted(P.up(a) & P.down(b)):
            if m in (a, b):
                continue
            if (a, m) not in rc.weak or (m, b) not in rc.weak:
                rep.add("weak-not-cancellable", (a, m, b))
    return rep


def enter_category(x: StratifiedComplex) -> RelativeCategory:
    """Face poset with ``W = {(s, t) : s < t in the same stratum}``."""
    k = x.complex
    weak = set()
    for t in k.ordered:
        for s in all_faces(t):
            if s != t and x.assignment[s] == x.assignment[t]:
                weak.add((k.id_of[s], k.id_of[t]))
    return RelativeCategory(k.face_poset, frozenset(weak))


@dataclass(frozen=True)
class Refinement:
    """The monotone map ``Face(Sd K) -> Face(K)`` sending a chain to its top."""

    mapping: dict[str, str]
    source: Poset
    target: Poset
    violations: tuple[tuple[str, str], ...]

    @property
    def monotone(self) -> bool:
        return not self.violations

    def fibers(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {t: [] for t in self.target.elements}
        for s, t in sorted(self.mapping.items()):
            out[t].append(s)
        return out


def refinement_functor(k: SimplicialComplex) -> Refinement:
    sd, carrier = subdivide(k)
    mapping = {simplex_id(chain): top for chain, top in carrier.items()}
    source = sd.face_poset
    target = k.face_poset
    bad = tuple(is_order_preserving(mapping, source, target))
    return Refinement(mapping, source, target, bad)


@dataclass(frozen=True)
class ClassifyingSpaceCheck:
    field: str
    betti_nerve: tuple[int, ...]
    betti_space: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.betti_nerve == self.betti_space

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "betti_nerve": list(self.betti_nerve),
            "betti_space": list(self.betti_space),
            "equal": self.ok,
        }


def classifying_space_check(x: StratifiedComplex, field: str = "q") -> ClassifyingSpaceCheck:
    """Betti numbers of the nerve of the face poset against those of the complex."""
    rc = enter_category(x)
    nerve = order_complex(rc.base)
    a = homology(nerve, field)
    b = homology(x.complex, field)
    return ClassifyingSpaceCheck(a.field, a.betti, b.betti)


def is_groupoid(x: StratifiedComplex) -> tuple[bool, tuple[str, str] | None]:
    """True iff every face relation is weak; otherwise a non-weak covering pair."""
    k = x.complex
    key = {s: i for i, s in enumerate(k.ordered)}
    worst = None
    for t in k.ordered:
        for s in faces(t):
            if x.assignment[s] != x.assignment[t]:
                cand = (key[s], key[t])
                if worst is None or cand < worst:
                    worst = cand
    if worst is None:
        return True, None
    return False, (k.id_of[k.ordered[worst[0]]], k.id_of[k.ordered[worst[1]]])
