"""Constructible sheaves as functors on the face poset that invert ``W``.

A sheaf puts a rational vector space (its stalk) on every simplex and a
matrix on every covering relation ``s < t`` (face to coface, i.e. the
generization map).  Functoriality is not assumed: :func:`validate_sheaf`
checks that all composites along different chains agree.

Cohomology is computed from the cochain complex

    C^n = prod over chains s0 < ... < sn of F(sn)

whose differential is the alternating sum of the face maps of the chain, the
last one composed with the structure map ``F(s(n-1) -> sn)``.  Its ``H^0`` is
the limit of the functor, i.e. the global sections, on the nose.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .complex import SimplicialComplex, subdivide
from .exitpath import RelativeCategory, enter_category
from .poset import Poset
from .report import InvariantError, Report, ValidationError
from .strat import StratifiedComplex, standard_simplex_stratification, subdivide_strat

Matrix = np.ndarray  # object dtype, Fraction entries


def as_matrix(rows, shape: tuple[int, int]) -> Matrix:
    """Coerce nested rows (numbers or ``"p/q"`` strings) into a Fraction matrix."""
    m = np.empty(shape, dtype=object)
    data = np.asarray(rows, dtype=object).reshape(shape) if shape[0] * shape[1] else None
    for i in range(shape[0]):
        for j in range(shape[1]):
            m[i, j] = Fraction(data[i, j])
    return m


def eye(n: int) -> Matrix:
    m = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            m[i, j] = Fraction(int(i == j))
    return m


def _mul(a: Matrix, b: Matrix) -> Matrix:
    out = np.empty((a.shape[0], b.shape[1]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            out[i, j] = sum((a[i, k] * b[k, j] for k in range(a.shape[1])), Fraction(0))
    return out


def _equal(a: Matrix, b: Matrix) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def _invertible(a: Matrix) -> bool:
    return a.shape[0] == a.shape[1] and linalg.dense_rank(a.tolist()) == a.shape[0]


# -- representations of a finite poset --------------------------------------

@dataclass
class Composites:
    table: dict[tuple[str, str], Matrix]
    diamond: tuple[str, str, str, str] | None = None


def composites(poset: Poset, dims: Mapping[str, int], maps: Mapping[tuple[str, str], Matrix]) -> Composites:
    """Composite matrix for every pair ``a <= b``, by dynamic programming over covers.

    The first disagreement between two routes is returned as the diamond
    ``(a, c1, c2, b)``: the routes through the covers ``c1 < b`` and ``c2 < b``.
    """
    ext = poset.linear_extension()
    into: dict[str, list[str]] = {e: [] for e in ext}
    for c, b in poset.covers():
        into[b].append(c)
    table: dict[tuple[str, str], Matrix] = {}
    diamond = None
    for a in ext:
        table[(a, a)] = eye(dims[a])
        ups = poset.up(a)
        for b in ext:
            if b == a or b not in ups:
                continue
            first = None
            for c in sorted(into[b]):
                if (a, c) not in table:
                    continue
                m = _mul(maps[(c, b)], table[(a, c)])
                if first is None:
                    first = (c, m)
                elif diamond is None and not _equal(first[1], m):
                    diamond = (a, first[0], c, b)
            table[(a, b)] = first[1]
    return Composites(table, diamond)


@dataclass(frozen=True)
class CohomologyProfile:
    dims: tuple[int, ...]
    euler: int
    cochain_dims: tuple[int, ...]

    def trimmed(self) -> tuple[int, ...]:
        d = list(self.dims)
        while d and d[-1] == 0:
            d.pop()
        return tuple(d)

    def to_json(self) -> dict:
        return {"H": list(self.dims), "euler": self.euler, "cochain_dims": list(self.cochain_dims)}


class _Cochains:
    """The cochain complex of a poset representation, with block offsets."""

    def __init__(self, poset: Poset, dims: Mapping[str, int], table: Mapping[tuple[str, str], Matrix]):
        self.dims = dims
        self.table = table
        by_len: dict[int, list[tuple[str, ...]]] = {}
        for c in poset.chains():
            by_len.setdefault(len(c) - 1, []).append(c)
        self.top = max(by_len, default=-1)
        self.chains = [by_len.get(n, []) for n in range(self.top + 1)]
        self.offsets: list[dict[tuple[str, ...], int]] = []
        self.size: list[int] = []
        for layer in self.chains:
            off, pos = {}, 0
            for c in layer:
                off[c] = pos
                pos += dims[c[-1]]
            self.offsets.append(off)
            self.size.append(pos)

    def rows(self, n: int) -> list[dict[int, Fraction]]:
        """Rows of ``d^n : C^n -> C^(n+1)``, one per coordinate of ``C^(n+1)``."""
        if n + 1 > self.top or n < 0:
            return []
        out = []
        src = self.offsets[n]
        for c in self.chains[n + 1]:
            top, prev = c[-1], c[-2]
            m = self.table[(prev, top)]
            last = len(c) - 1
            sign_last = -1 if last % 2 else 1
            for r in range(self.dims[top]):
                row: dict[int, Fraction] = {}
                for i in range(last):
                    face = c[:i] + c[i + 1:]
                    k = src[face] + r
                    row[k] = row.get(k, 0) + (-1) ** i
                base = src[c[:-1]]
                for j in range(self.dims[prev]):
                    x = m[r, j]
                    if x:
                        k = base + j
                        row[k] = row.get(k, 0) + sign_last * x
                out.append({k: Fraction(v) for k, v in row.items() if v})
        return out

    def cohomology(self) -> CohomologyProfile:
        ranks = [linalg.rank(self.rows(n)) for n in range(self.top + 1)]
        dims = []
        for n in range(self.top + 1):
            below = ranks[n - 1] if n > 0 else 0
            dims.append(self.size[n] - ranks[n] - below)
        euler = sum((-1) ** n * h for n, h in enumerate(dims))
        cochain_euler = sum((-1) ** n * s for n, s in enumerate(self.size))
        if euler != cochain_euler:
            raise InvariantError(f"cochain Euler {cochain_euler} != cohomology Euler {euler}")
        return CohomologyProfile(tuple(dims), euler, tuple(self.size))


def poset_cohomology(poset: Poset, dims: Mapping[str, int], maps: Mapping[tuple[str, str], Matrix]) -> CohomologyProfile:
    comp = composites(poset, dims, maps)
    if comp.diamond is not None:
        raise ValidationError(f"representation is not functorial; diamond {comp.diamond}")
    return _Cochains(poset, dims, comp.table).cohomology()


# -- sheaves ------------------------------------------------------------

class Sheaf:
    """A representation of the face poset of ``space``.

    ``maps`` must give a matrix of shape ``dims[t] x dims[s]`` on every
    covering relation ``s < t``; edges touching a zero stalk may be omitted.
    """

    def __init__(
        self,
        space: StratifiedComplex,
        dims: Mapping[str, int],
        maps: Mapping[tuple[str, str], object],
        *,
        check: bool = True,
    ):
        self.space = space
        base = space.complex.face_poset
        missing = set(base.elements) - set(dims)
        if missing:
            raise ValidationError(f"no stalk dimension for {sorted(missing)[:3]}")
        unknown = set(dims) - set(base.elements)
        if unknown:
            raise ValidationError(f"stalks on unknown simplices {sorted(unknown)[:3]}")
        self.dims = {e: int(dims[e]) for e in base.elements}
        covers = set(base.covers())
        extra = set(maps) - covers
        if extra:
            raise ValidationError(f"maps on non-covering pairs {sorted(extra)[:3]}")
        self.maps: dict[tuple[str, str], Matrix] = {}
        for s, t in base.covers():
            shape = (self.dims[t], self.dims[s])
            if (s, t) in maps:
                m = maps[(s, t)]
                arr = np.asarray(m, dtype=object)
                if shape[0] * shape[1] and arr.shape != shape:
                    raise ValidationError(f"map {s}->{t} has shape {arr.shape}, expected {shape}")
                self.maps[(s, t)] = as_matrix(m, shape)
            elif shape[0] * shape[1] == 0:
                self.maps[(s, t)] = np.empty(shape, dtype=object)
            else:
                raise ValidationError(f"no map on covering edge {s} -> {t}")
        if check:
            validate_sheaf(self).raise_if_invalid()

    @property
    def base(self) -> Poset:
        return self.space.complex.face_poset

    @cached_property
    def carrier(self) -> RelativeCategory:
        return enter_category(self.space)

    @cached_property
    def _composites(self) -> Composites:
        return composites(self.base, self.dims, self.maps)

    def composite(self, a: str, b: str) -> Matrix:
        return self._composites.table[(a, b)]

    def to_json(self) -> dict:
        return {
            "base": self.space.to_json(),
            "dims": dict(sorted(self.dims.items())),
            "maps": [
                [s, t, [[str(x) for x in row] for row in m.tolist()]]
                for (s, t), m in sorted(self.maps.items())
            ],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Sheaf":
        extra = set(doc) - {"base", "dims", "maps"}
        if extra:
            raise ValidationError(f"unknown sheaf keys: {sorted(extra)}")
        space = StratifiedComplex.from_json(doc["base"])
        maps = {(s, t): [[Fraction(x) for x in row] for row in m] for s, t, m in doc["maps"]}
        return cls(space, doc["dims"], maps)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def validate_sheaf(f: Sheaf) -> Report:
    """Path independence over all pairs, plus invertibility on weak edges."""
    rep = Report("sheaf")
    comp = f._composites
    if comp.diamond is not None:
        a, c1, c2, b = comp.diamond
        rep.add("non-commuting-diamond", comp.diamond, f"routes {a}->{c1}->{b} and {a}->{c2}->{b} differ")
        return rep
    for a, b in sorted(f.carrier.weak):
        if not _invertible(comp.table[(a, b)]):
            rep.add("weak-edge-not-invertible", (a, b))
    return rep


def constant_sheaf(x: StratifiedComplex, rank: int = 1) -> Sheaf:
    if rank < 0:
        raise ValueError("rank must be >= 0")
    base = x.complex.face_poset
    dims = {e: rank for e in base.elements}
    maps = {c: eye(rank) for c in base.covers()}
    return Sheaf(x, dims, maps, check=False)


def is_locally_constant(f: Sheaf) -> bool:
    """Every covering matrix invertible: the functor factors through a groupoid."""
    return all(_invertible(m) for m in f.maps.values())


@dataclass(frozen=True)
class Sections:
    dim: int
    basis: tuple[dict[str, tuple[Fraction, ...]], ...]


def global_sections(f: Sheaf) -> Sections:
    """Compatible families ``(x_s)`` with ``M x_s = x_t`` on every cover, with a basis."""
    cc = _Cochains(f.base, f.dims, f._composites.table)
    if cc.top < 0:
        return Sections(0, ())
    rows = cc.rows(0)
    ker = linalg.kernel(rows, cc.size[0])
    basis = []
    for vec in ker:
        fam = {}
        for (e,), off in sorted(cc.offsets[0].items()):
            fam[e] = tuple(Fraction(vec.get(off + i, 0)) for i in range(f.dims[e]))
        basis.append(fam)
    return Sections(len(basis), tuple(basis))


def cohomology(f: Sheaf) -> CohomologyProfile:
    if f._composites.diamond is not None:
        raise ValidationError(f"sheaf is not functorial; diamond {f._composites.diamond}")
    return _Cochains(f.base, f.dims, f._composites.table).cohomology()


def pullback_along(f: Sheaf, refined: StratifiedComplex, carrier: Mapping[str, str]) -> Sheaf:
    """Compose ``f`` with a monotone map ``Face(refined) -> Face(f.space)``."""
    base = refined.complex.face_poset
    dims = {e: f.dims[carrier[e]] for e in base.elements}
    maps = {(s, t): f.composite(carrier[s], carrier[t]) for s, t in base.covers()}
    return Sheaf(refined, dims, maps, check=False)


def pullback_refinement(f: Sheaf, k: SimplicialComplex | None = None) -> Sheaf:
    """Pull ``f`` back to the face poset of the barycentric subdivision."""
    if k is not None and k != f.space.complex:
        raise ValidationError("sheaf does not live on the given complex")
    refined = subdivide_strat(f.space)
    _, carrier = subdivide(f.space.complex)
    ids = {refined.complex.id_of[c]: top for c, top in carrier.items()}
    return pullback_along(f, refined, ids)


# -- functors on the chain [n] ------------------------------------------------

@dataclass(frozen=True)
class ChainFunctor:
    """A functor ``[n] -> Vect_Q``: stalks ``dims[i]``, maps ``maps[i] : i -> i+1``."""

    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    def __post_init__(self):
        if len(self.maps) != len(self.dims) - 1:
            raise ValidationError("need one map per consecutive pair")
        for i, m in enumerate(self.maps):
            shape = (self.dims[i + 1], self.dims[i])
            if np.asarray(m, dtype=object).shape != shape and shape[0] * shape[1]:
                raise ValidationError(f"map {i}->{i + 1} has wrong shape; expected {shape}")

    def as_rep(self) -> tuple[Poset, dict[str, int], dict[tuple[str, str], Matrix]]:
        p = Poset.chain(self.n)
        dims = {str(i): d for i, d in enumerate(self.dims)}
        maps = {
            (str(i), str(i + 1)): as_matrix(m, (self.dims[i + 1], self.dims[i]))
            for i, m in enumerate(self.maps)
        }
        return p, dims, maps


def random_chain_functor(n: int, rng: random.Random, max_dim: int = 2, max_entry: int = 2) -> ChainFunctor:
    dims = tuple(rng.randint(0, max_dim) for _ in range(n + 1))
    maps = []
    for i in range(n):
        m = [
            [Fraction(rng.randint(-max_entry, max_entry), rng.randint(1, max_entry)) for _ in range(dims[i])]
            for _ in range(dims[i + 1])
        ]
        maps.append(as_matrix(m, (dims[i + 1], dims[i])))
    return ChainFunctor(dims, tuple(maps))


@dataclass
class CoarseEquivalence:
    n: int
    w_inverting: bool
    face_side: CohomologyProfile
    chain_side: CohomologyProfile
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.w_inverting and self.face_side.trimmed() == self.chain_side.trimmed()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "w_inverting": self.w_inverting,
            "face_side": self.face_side.to_json(),
            "chain_side": self.chain_side.to_json(),
            "agree": self.ok,
        }


def induced_sheaf(g: ChainFunctor) -> Sheaf:
    """The sheaf on ``Face(Delta^n)`` given by ``s -> g(max s)``."""
    x = standard_simplex_stratification(g.n)
    p, dims, maps = g.as_rep()
    comp = composites(p, dims, maps)
    k = x.complex
    sdims = {k.id_of[s]: dims[x.assignment[s]] for s in k.simplices}
    smaps = {}
    for a, b in k.face_poset.covers():
        sa = x.assignment[k.simplex_of[a]]
        sb = x.assignment[k.simplex_of[b]]
        smaps[(a, b)] = comp.table[(sa, sb)]
    return Sheaf(x, sdims, smaps, check=False)


def coarse_equivalence_check(g: ChainFunctor) -> CoarseEquivalence:
    """Sheaf cohomology over ``Face(Delta^n)`` against the functor's over ``[n]``."""
    f = induced_sheaf(g)
    rep = validate_sheaf(f)
    chain_side = poset_cohomology(*g.as_rep())
    face_side = cohomology(f)
    return CoarseEquivalence(g.n, rep.ok, face_side, chain_side)


# -- S^1 local systems ----------------------------------------------------------

def circle_local_system(monodromy: Fraction | int, space: StratifiedComplex | None = None) -> Sheaf:
    """Rank-one local system on the face-stratified boundary of a triangle.

    Every vertex-to-edge map is ``1`` except ``{a} -> {a,c}``, which carries the
    monodromy.
    """
    from .strat import face_stratification

    if space is None:
        space = face_stratification(SimplicialComplex.from_facets([["a", "b"], ["b", "c"], ["a", "c"]]))
    base = space.complex.face_poset
    dims = {e: 1 for e in base.elements}
    maps = {c: eye(1) for c in base.covers()}
    maps[("{a}", "{a,c}")] = as_matrix([[monodromy]], (1, 1))
    return Sheaf(space, dims, maps)
