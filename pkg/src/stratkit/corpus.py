"""The built-in corpus: small complexes, stratifications, sheaves and posets.

Everything is constructed on demand from deterministic recipes, so two
builds of the same entry are identical.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .complex import SimplicialComplex, cone_complex, join_complex
from .poset import Poset
from .sheaf import ChainFunctor, Sheaf, as_matrix, circle_local_system, constant_sheaf, induced_sheaf
from .strat import (
    StratifiedComplex,
    cone_strat,
    face_stratification,
    join_strat,
    product_strat,
    single_stratum,
    standard_simplex_stratification,
)

TORUS_FACETS = [
    (0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2),
    (0, 2, 3), (1, 3, 4), (2, 4, 5), (3, 5, 6), (4, 6, 0), (5, 0, 1), (6, 1, 2),
]
RP2_FACETS = [
    (0, 1, 3), (0, 1, 4), (0, 2, 3), (0, 2, 5), (0, 4, 5),
    (1, 2, 4), (1, 2, 5), (1, 3, 5), (2, 3, 4), (3, 4, 5),
]


def simplex(n: int) -> SimplicialComplex:
    labels = [str(i) for i in range(n + 1)]
    return SimplicialComplex.from_facets([labels], vertices=labels)


def boundary(n: int) -> SimplicialComplex:
    """Boundary of the ``n``-simplex (an ``(n-1)``-sphere)."""
    labels = [str(i) for i in range(n + 1)]
    return SimplicialComplex.from_facets([[v for v in labels if v != x] for x in labels], vertices=labels)


def cycle(n: int) -> SimplicialComplex:
    labels = [str(i) for i in range(n)]
    return SimplicialComplex.from_facets([[labels[i], labels[(i + 1) % n]] for i in range(n)], vertices=labels)


def from_numbered(facets) -> SimplicialComplex:
    verts = sorted({v for f in facets for v in f})
    return SimplicialComplex.from_facets([[str(v) for v in f] for f in facets], vertices=[str(v) for v in verts])


def two_points(prefix: str = "") -> SimplicialComplex:
    return SimplicialComplex.from_facets([[prefix + "n"], [prefix + "s"]])


def _complexes() -> dict[str, Callable[[], SimplicialComplex]]:
    return {
        "point": lambda: simplex(0),
        "two-points": lambda: two_points(),
        "delta1": lambda: simplex(1),
        "delta2": lambda: simplex(2),
        "delta3": lambda: simplex(3),
        "boundary2": lambda: boundary(2),
        "boundary3": lambda: boundary(3),
        "hexagon": lambda: cycle(6),
        "torus": lambda: from_numbered(TORUS_FACETS),
        "rp2": lambda: from_numbered(RP2_FACETS),
        "cone-two-points": lambda: cone_complex("v", two_points()),
        "cone-boundary2": lambda: cone_complex("v", boundary(2)),
        "cone-boundary3": lambda: cone_complex("v", boundary(3)),
        "cone-hexagon": lambda: cone_complex("v", cycle(6)),
        "cone-rp2": lambda: cone_complex("v", from_numbered(RP2_FACETS)),
        "suspension-boundary2": lambda: join_complex(boundary(2), two_points("p")),
        "join-two-points": lambda: join_complex(two_points(), two_points("p")),
        "join-boundary2-point": lambda: join_complex(boundary(2), SimplicialComplex.from_facets([["p"]])),
    }


def _stratified() -> dict[str, Callable[[], StratifiedComplex]]:
    out: dict[str, Callable[[], StratifiedComplex]] = {
        "delta1-standard": lambda: standard_simplex_stratification(1),
        "delta2-standard": lambda: standard_simplex_stratification(2),
        "delta3-standard": lambda: standard_simplex_stratification(3),
        "cone-s0": lambda: cone_strat("v", single_stratum(two_points())),
        "cone-s1": lambda: cone_strat("v", single_stratum(boundary(2))),
        "cone-s2": lambda: cone_strat("v", single_stratum(boundary(3))),
        "cone-face-boundary2": lambda: cone_strat("v", face_stratification(boundary(2))),
        "cone-face-delta1": lambda: cone_strat("v", face_stratification(simplex(1))),
        "join-face-delta1-point": lambda: join_strat(
            face_stratification(simplex(1)), face_stratification(SimplicialComplex.from_facets([["p"]]))
        ),
        "product-delta1-standard": lambda: product_strat(
            standard_simplex_stratification(1), standard_simplex_stratification(1)
        ),
        "torus-single": lambda: single_stratum(from_numbered(TORUS_FACETS)),
        "rp2-single": lambda: single_stratum(from_numbered(RP2_FACETS)),
    }
    for name in ("point", "two-points", "delta1", "delta2", "delta3", "boundary2", "boundary3", "hexagon"):
        out[f"face-{name}"] = (lambda n=name: face_stratification(COMPLEXES[n]()))
    return out


def _delta2_induced() -> Sheaf:
    g = ChainFunctor(
        (1, 2, 1),
        (as_matrix([[1], [0]], (2, 1)), as_matrix([[0, 1]], (1, 2))),
    )
    return induced_sheaf(g)


def _sheaves() -> dict[str, Callable[[], Sheaf]]:
    out: dict[str, Callable[[], Sheaf]] = {
        "s1-monodromy-plus": lambda: circle_local_system(1),
        "s1-monodromy-minus": lambda: circle_local_system(-1),
        "s1-monodromy-two": lambda: circle_local_system(Fraction(2)),
        "delta2-induced": _delta2_induced,
    }
    for name in STRATIFIED:
        if name not in ("torus-single", "rp2-single", "cone-s2"):
            out[f"constant-{name}"] = (lambda n=name: constant_sheaf(STRATIFIED[n]()))
    out["constant2-face-boundary2"] = lambda: constant_sheaf(STRATIFIED["face-boundary2"](), 2)
    return out


def _posets() -> dict[str, Callable[[], Poset]]:
    return {
        "star": lambda: Poset(["*"], [[True]]),
        "chain1": lambda: Poset.chain(1),
        "chain2": lambda: Poset.chain(2),
        "antichain2": lambda: Poset.antichain(["a", "b"]),
        "vee": lambda: Poset.from_pairs(["0", "a", "b"], [("0", "a"), ("0", "b")]),
        "wedge": lambda: Poset.from_pairs(["a", "b", "1"], [("a", "1"), ("b", "1")]),
    }


COMPLEXES = _complexes()
STRATIFIED = _stratified()
SHEAVES = _sheaves()
POSETS = _posets()

REGISTRIES: dict[str, dict[str, Callable]] = {
    "complex": COMPLEXES,
    "stratified": STRATIFIED,
    "sheaf": SHEAVES,
    "poset": POSETS,
}


def names() -> dict[str, list[str]]:
    return {kind: sorted(reg) for kind, reg in REGISTRIES.items()}


def build(name: str):
    """``(kind, document)`` for a corpus entry."""
    for kind, reg in REGISTRIES.items():
        if name in reg:
            return kind, reg[name]()
    raise KeyError(name)


def _check_unique() -> None:
    seen: dict[str, str] = {}
    for kind, reg in REGISTRIES.items():
        for name in reg:
            if name in seen:
                raise RuntimeError(f"corpus name {name!r} used for {seen[name]} and {kind}")
            seen[name] = kind


_check_unique()
