"""Finite abstract simplicial complexes and their exact homology.

Simplices are tuples of vertex identifiers sorted by the complex's vertex
order.  The identifier of a simplex, used whenever a simplex becomes a vertex
(barycentric subdivision) or a poset element (face poset), is ``{a,b,c}``;
braces nest, so iterated subdivisions stay unambiguous.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx
import numpy as np

from . import linalg
from .poset import Poset, order_complex, pair_id, product as poset_product
from .report import Report, ValidationError

Simplex = tuple[str, ...]


def simplex_id(s: Sequence[str]) -> str:
    return "{" + ",".join(s) + "}"


def parse_simplex_id(sid: str) -> Simplex:
    """Inverse of :func:`simplex_id` (top level split only; braces may nest)."""
    if not (sid.startswith("{") and sid.endswith("}")):
        raise ValueError(f"not a simplex identifier: {sid!r}")
    body = sid[1:-1]
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "{" or ch == "("
        depth -= ch == "}" or ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return tuple(parts)


class SimplicialComplex:
    """Finite abstract simplicial complex over totally ordered vertices.

    The plain constructor stores exactly the simplices given (so broken data
    can be diagnosed by :func:`validate_complex`); use :meth:`from_facets`
    to take the closure under faces.
    """

    def __init__(self, vertices: Sequence[str], simplices: Iterable[Iterable[str]]):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex identifiers")
        self.pos = {v: i for i, v in enumerate(self.vertices)}
        out = set()
        for s in simplices:
            s = tuple(str(v) for v in s)
            if not s:
                continue
            if len(set(s)) != len(s):
                raise ValidationError(f"repeated vertex in simplex {s!r}")
            try:
                out.add(tuple(sorted(s, key=self.pos.__getitem__)))
            except KeyError as exc:
                raise ValidationError(f"simplex {s!r} uses unknown vertex {exc.args[0]!r}") from None
        self.simplices: frozenset[Simplex] = frozenset(out)

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[str]], vertices: Sequence[str] | None = None):
        facets = [tuple(str(v) for v in f) for f in facets]
        if vertices is None:
            seen: dict[str, None] = {}
            for f in facets:
                for v in f:
                    seen.setdefault(v, None)
            vertices = sorted(seen)
        closed = set()
        for f in facets:
            for r in range(1, len(f) + 1):
                closed.update(itertools.combinations(f, r))
        closed.update((v,) for v in vertices)
        return cls(vertices, closed)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), ())

    # -- structure -----------------------------------------------------
    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, s: object) -> bool:
        if isinstance(s, tuple):
            try:
                return self.normalize(s) in self.simplices
            except (KeyError, ValidationError):
                return False
        return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and {
            frozenset(s) for s in self.simplices
        } == {frozenset(s) for s in other.simplices}

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices), len(self.simplices)))

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector})"

    def normalize(self, s: Iterable[str]) -> Simplex:
        return tuple(sorted((str(v) for v in s), key=self.pos.__getitem__))

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @cached_property
    def ordered(self) -> tuple[Simplex, ...]:
        """Simplices in canonical order: by dimension, then vertex positions."""
        return tuple(sorted(self.simplices, key=lambda s: (len(s), [self.pos[v] for v in s])))

    @cached_property
    def by_dim(self) -> tuple[tuple[Simplex, ...], ...]:
        out: list[list[Simplex]] = [[] for _ in range(self.dim + 1)]
        for s in self.ordered:
            out[len(s) - 1].append(s)
        return tuple(tuple(x) for x in out)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * n for i, n in enumerate(self.f_vector))

    @cached_property
    def maximal_simplices(self) -> tuple[Simplex, ...]:
        cofaced = set()
        for s in self.simplices:
            for f in faces(s):
                cofaced.add(f)
        return tuple(s for s in self.ordered if s not in cofaced)

    @cached_property
    def cofaces(self) -> dict[Simplex, tuple[Simplex, ...]]:
        """Strict cofaces of every simplex."""
        up: dict[Simplex, list[Simplex]] = {s: [] for s in self.simplices}
        for t in self.ordered:
            for f in all_faces(t):
                if f != t and f in up:
                    up[f].append(t)
        return {s: tuple(v) for s, v in up.items()}

    def star_dim(self, s: Simplex) -> int:
        return max((len(t) - 1 for t in self.cofaces[s]), default=len(s) - 1)

    def full_subcomplex(self, vertices: Iterable[str]) -> "SimplicialComplex":
        keep = set(vertices)
        verts = [v for v in self.vertices if v in keep]
        return SimplicialComplex(verts, (s for s in self.simplices if keep.issuperset(s)))

    def subcomplex(self, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        """The given simplices (assumed closed under faces), keeping vertex order."""
        simplices = set(simplices)
        used = {v for s in simplices for v in s}
        return SimplicialComplex([v for v in self.vertices if v in used], simplices)

    def relabel(self, mapping: Mapping[str, str] | None = None, *, prefix: str = "") -> "SimplicialComplex":
        if mapping is None:
            mapping = {v: prefix + v for v in self.vertices}
        return SimplicialComplex(
            [mapping[v] for v in self.vertices],
            (tuple(mapping[v] for v in s) for s in self.simplices),
        )

    @cached_property
    def face_poset(self) -> Poset:
        """Simplices ordered by inclusion, identified by :func:`simplex_id`."""
        order = self.ordered
        idx = {s: i for i, s in enumerate(order)}
        n = len(order)
        mat = np.zeros((n, n), dtype=bool)
        for t in order:
            j = idx[t]
            for r in range(1, len(t) + 1):
                for f in itertools.combinations(t, r):
                    mat[idx[f], j] = True
        return Poset([simplex_id(s) for s in order], mat, check=False)

    @cached_property
    def id_of(self) -> dict[Simplex, str]:
        return {s: simplex_id(s) for s in self.simplices}

    @cached_property
    def simplex_of(self) -> dict[str, Simplex]:
        return {sid: s for s, sid in self.id_of.items()}

    @cached_property
    def _subdivision(self) -> tuple["SimplicialComplex", dict[Simplex, str]]:
        sd = order_complex(self.face_poset)
        carrier = {chain: chain[-1] for chain in sd.simplices}
        return sd, carrier

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "simplices": [list(s) for s in self.maximal_simplices],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SimplicialComplex":
        extra = set(doc) - {"vertices", "simplices"}
        if extra:
            raise ValidationError(f"unknown complex keys: {sorted(extra)}")
        verts = [str(v) for v in doc.get("vertices", [])]
        facets = [[str(v) for v in s] for s in doc.get("simplices", [])]
        unknown = {v for f in facets for v in f} - set(verts)
        if unknown:
            raise ValidationError(f"simplices use undeclared vertices {sorted(unknown)}")
        return cls.from_facets(facets, vertices=verts)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def faces(s: Simplex) -> Iterator[Simplex]:
    """Codimension-one faces, in the order ``d_0, d_1, ...``."""
    if len(s) <= 1:
        return
    for i in range(len(s)):
        yield s[:i] + s[i + 1:]


def all_faces(s: Simplex) -> Iterator[Simplex]:
    """Every nonempty face, including ``s``."""
    for r in range(1, len(s) + 1):
        yield from itertools.combinations(s, r)


def validate_complex(k: SimplicialComplex) -> Report:
    """Report every missing face; empty iff ``k`` is closed under faces."""
    rep = Report("simplicial complex")
    for s in k.ordered:
        for f in faces(s):
            if f not in k.simplices:
                rep.add("missing-face", (list(s), list(f)))
    for v in k.vertices:
        if (v,) not in k.simplices:
            rep.add("missing-vertex", (v,))
    return rep


# -- constructions -----------------------------------------------------

def cone_complex(v: str, k: SimplicialComplex) -> SimplicialComplex:
    """``v * K``; the apex comes first in the vertex order."""
    if v in k.pos:
        raise ValidationError(f"cone apex {v!r} is already a vertex")
    simp = list(k.simplices) + [(v,)] + [(v,) + s for s in k.simplices]
    return SimplicialComplex((v,) + k.vertices, simp)


def join_complex(k: SimplicialComplex, l: SimplicialComplex) -> SimplicialComplex:
    clash = set(k.vertices) & set(l.vertices)
    if clash:
        raise ValidationError(f"join of complexes sharing vertices {sorted(clash)}")
    simp = list(k.simplices) + list(l.simplices)
    simp += [s + t for s in k.simplices for t in l.simplices]
    return SimplicialComplex(k.vertices + l.vertices, simp)


def disjoint_union(k: SimplicialComplex, l: SimplicialComplex) -> SimplicialComplex:
    clash = set(k.vertices) & set(l.vertices)
    if clash:
        raise ValidationError(f"disjoint union of complexes sharing vertices {sorted(clash)}")
    return SimplicialComplex(k.vertices + l.vertices, list(k.simplices) + list(l.simplices))


def subdivide(k: SimplicialComplex) -> tuple[SimplicialComplex, dict[Simplex, str]]:
    """Barycentric subdivision as the order complex of the face poset.

    Returns ``(Sd K, carrier)`` where ``carrier`` sends each chain (a simplex
    of ``Sd K``) to the identifier of its largest member.
    """
    return k._subdivision


def sd(k: SimplicialComplex, times: int = 1) -> SimplicialComplex:
    for _ in range(times):
        k = subdivide(k)[0]
    return k


def product_with_pairs(
    k: SimplicialComplex, l: SimplicialComplex
) -> tuple[SimplicialComplex, dict[str, tuple[Simplex, Simplex]]]:
    """Product triangulation plus the lookup vertex id -> (simplex of k, simplex of l)."""
    prod = order_complex(poset_product(k.face_poset, l.face_poset))
    lookup = {
        pair_id(k.id_of[s], l.id_of[t]): (s, t) for s in k.simplices for t in l.simplices
    }
    return prod, lookup


def product_complex(k: SimplicialComplex, l: SimplicialComplex) -> SimplicialComplex:
    """Triangulation of ``|k| x |l|``: order complex of the product of face posets."""
    return product_with_pairs(k, l)[0]


def link_star(s: Sequence[str], k: SimplicialComplex) -> tuple[SimplicialComplex, SimplicialComplex]:
    """``(link, closed star)`` of a simplex."""
    try:
        sigma = k.normalize(s)
    except KeyError:
        raise ValidationError(f"{tuple(s)!r} is not a simplex") from None
    if sigma not in k.simplices:
        raise ValidationError(f"{tuple(s)!r} is not a simplex")
    ss = set(sigma)
    star_top = [t for t in k.cofaces[sigma]] + [sigma]
    star = set()
    for t in star_top:
        star.update(all_faces(t))
    link = set()
    for t in k.simplices:
        if ss.isdisjoint(t) and k.normalize(ss.union(t)) in k.simplices:
            link.add(t)
    return k.subcomplex(link), k.subcomplex(star)


# -- homology ------------------------------------------------------------

@dataclass(frozen=True)
class HomologyProfile:
    field: str
    betti: tuple[int, ...]
    euler: int

    def trimmed(self) -> tuple[int, ...]:
        """Betti numbers with trailing zeros removed."""
        b = list(self.betti)
        while b and b[-1] == 0:
            b.pop()
        return tuple(b)

    def to_json(self) -> dict:
        return {"field": self.field, "betti": list(self.betti), "euler": self.euler}


def boundary_rows(k: SimplicialComplex, n: int) -> list[dict[int, int]]:
    """Rows of the boundary map ``C_n -> C_{n-1}``, one sparse row per n-simplex."""
    if n <= 0 or n > k.dim:
        return []
    idx = {s: i for i, s in enumerate(k.by_dim[n - 1])}
    return [
        {idx[f]: (-1) ** i for i, f in enumerate(faces(s))}
        for s in k.by_dim[n]
    ]


def boundary_ranks(k: SimplicialComplex, field: str) -> list[int]:
    """``ranks[n]`` = rank of the boundary ``C_n -> C_{n-1}`` (``ranks[0] = 0``)."""
    field = linalg.field_tag(field)
    return [0] + [linalg.rank(boundary_rows(k, n), field) for n in range(1, k.dim + 1)]


def homology(k: SimplicialComplex, field: str = "q") -> HomologyProfile:
    """Betti numbers over Q or Z/2 by exact elimination on boundary matrices.

    The Euler characteristic from the Betti numbers is cross-checked
    against the alternating simplex count.
    """
    field = linalg.field_tag(field)
    cache = k.__dict__.setdefault("_homology_cache", {})
    if field in cache:
        return cache[field]
    ranks = boundary_ranks(k, field) + [0]
    fv = k.f_vector
    betti = tuple(fv[n] - ranks[n] - ranks[n + 1] for n in range(len(fv)))
    euler = sum((-1) ** i * b for i, b in enumerate(betti))
    if euler != k.euler_characteristic():
        from .report import InvariantError

        raise InvariantError(f"Euler mismatch: betti give {euler}, simplices give {k.euler_characteristic()}")
    prof = HomologyProfile(field, betti, euler)
    cache[field] = prof
    return prof


def cycle_basis(k: SimplicialComplex, n: int, field: str) -> list[dict[int, object]]:
    """Basis of the n-cycles, indexed by ``k.by_dim[n]``."""
    if n < 0 or n > k.dim:
        return []
    ncols = len(k.by_dim[n])
    if n == 0:
        return [{i: 1} for i in range(ncols)]
    rows_t = boundary_rows(k, n)  # one row per n-simplex
    # kernel of the boundary needs rows indexed by (n-1)-simplices
    m = len(k.by_dim[n - 1])
    rows: list[dict[int, int]] = [dict() for _ in range(m)]
    for j, col in enumerate(rows_t):
        for i, x in col.items():
            rows[i][j] = x
    return linalg.kernel(rows, ncols, field)


# -- isomorphism ------------------------------------------------------------

def complex_isomorphism(k: SimplicialComplex, l: SimplicialComplex) -> dict[str, str] | None:
    """A vertex bijection carrying simplices onto simplices, or ``None``.

    Searched as a colored graph isomorphism of the vertex / maximal-simplex
    incidence graphs (which determine the complexes).
    """
    if k.f_vector != l.f_vector:
        return None

    def graph(c: SimplicialComplex) -> nx.Graph:
        g = nx.Graph()
        for v in c.vertices:
            g.add_node(("v", v), kind="v")
        for s in c.maximal_simplices:
            g.add_node(("s", s), kind=len(s))
            for v in s:
                g.add_edge(("v", v), ("s", s))
        return g

    gm = nx.algorithms.isomorphism.GraphMatcher(
        graph(k), graph(l), node_match=lambda a, b: a["kind"] == b["kind"]
    )
    for m in gm.isomorphisms_iter():
        return {a[1]: b[1] for a, b in m.items() if a[0] == "v"}
    return None
