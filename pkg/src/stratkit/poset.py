"""Finite posets with the Alexandrov topology (open = upward closed).

A :class:`Poset` stores its full relation as a boolean matrix so that ``<=``
queries are constant time.  Element identifiers are opaque strings; derived
constructions build structured identifiers deterministically::

    product   -> "(a,b)"
    cone      -> "*" adjoined as the new minimum
    join      -> a, b kept as is, plus pairs "(a,b)"
"""
from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .report import Report, ValidationError

if TYPE_CHECKING:
    from .complex import SimplicialComplex

APEX = "*"


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


def tuple_id(parts: Sequence[str]) -> str:
    return "(" + ",".join(parts) + ")"


class Poset:
    """A finite (pre)ordered set.

    ``Poset(..., check=True)`` refuses relations that are not partial orders;
    pass ``check=False`` to hold an arbitrary relation for diagnosis with
    :func:`validate_poset`.
    """

    __slots__ = ("elements", "leq", "index", "_covers", "_ext")

    def __init__(self, elements: Sequence[str], leq, *, check: bool = True):
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise ValidationError(f"duplicate poset elements in {elements!r}")
        mat = np.array(leq, dtype=bool).reshape(len(elements), len(elements))
        mat.setflags(write=False)
        self.elements = elements
        self.leq = mat
        self.index = {e: i for i, e in enumerate(elements)}
        self._covers = None
        self._ext = None
        if check:
            validate_poset(self).raise_if_invalid()

    @classmethod
    def from_pairs(
        cls,
        elements: Sequence[str],
        pairs: Iterable[tuple[str, str]],
        *,
        closure: bool = False,
        check: bool = True,
    ) -> "Poset":
        """Build from ``(a, b)`` pairs meaning ``a <= b``; reflexive pairs implied.

        With ``closure=True`` the transitive closure is taken first.
        """
        elements = tuple(str(e) for e in elements)
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        mat = np.eye(n, dtype=bool)
        for a, b in pairs:
            try:
                mat[idx[str(a)], idx[str(b)]] = True
            except KeyError as exc:
                raise ValidationError(f"relation mentions unknown element {exc.args[0]!r}") from None
        if closure:
            mat = _transitive_closure(mat)
        return cls(elements, mat, check=check)

    @classmethod
    def chain(cls, n: int, labels: Sequence[str] | None = None) -> "Poset":
        """The chain [n] = {0 < 1 < ... < n}."""
        labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n + 1))
        return cls(labels, np.triu(np.ones((n + 1, n + 1), dtype=bool)), check=False)

    @classmethod
    def antichain(cls, labels: Sequence[str]) -> "Poset":
        return cls(labels, np.eye(len(labels), dtype=bool), check=False)

    # -- basic queries -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, e: object) -> bool:
        return e in self.index

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.covers())} covers)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        if set(self.elements) != set(other.elements):
            return False
        perm = [other.index[e] for e in self.elements]
        return bool(np.array_equal(self.leq, other.leq[np.ix_(perm, perm)]))

    def __hash__(self) -> int:
        return hash(frozenset(self.elements))

    def le(self, a: str, b: str) -> bool:
        return bool(self.leq[self.index[a], self.index[b]])

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.le(a, b)

    def up(self, a: str) -> frozenset[str]:
        return frozenset(self.elements[j] for j in np.flatnonzero(self.leq[self.index[a]]))

    def down(self, a: str) -> frozenset[str]:
        return frozenset(self.elements[j] for j in np.flatnonzero(self.leq[:, self.index[a]]))

    def upset(self, subset: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for a in subset:
            out |= self.up(a)
        return frozenset(out)

    def downset(self, subset: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for a in subset:
            out |= self.down(a)
        return frozenset(out)

    def is_upward_closed(self, subset: Iterable[str]) -> bool:
        s = frozenset(subset)
        return self.upset(s) == s

    def is_downward_closed(self, subset: Iterable[str]) -> bool:
        s = frozenset(subset)
        return self.downset(s) == s

    is_open = is_upward_closed

    def minimal(self) -> list[str]:
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        return [e for j, e in enumerate(self.elements) if not strict[:, j].any()]

    def maximal(self) -> list[str]:
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        return [e for i, e in enumerate(self.elements) if not strict[i].any()]

    def covers(self) -> list[tuple[str, str]]:
        """Covering relations ``a < b`` with nothing strictly between."""
        if self._covers is None:
            n = len(self)
            strict = self.leq & ~np.eye(n, dtype=bool)
            out = []
            for i in range(n):
                above = np.flatnonzero(strict[i])
                if not len(above):
                    continue
                sub = strict[np.ix_(above, above)]
                for j in above[~sub.any(axis=0)]:
                    out.append((self.elements[i], self.elements[int(j)]))
            self._covers = out
        return self._covers

    def linear_extension(self) -> tuple[str, ...]:
        """Topological sort, ties broken by smallest identifier (fixed, reproducible)."""
        if self._ext is None:
            n = len(self)
            strict = self.leq & ~np.eye(n, dtype=bool)
            indeg = strict.sum(axis=0).astype(int).tolist()
            heap = [(self.elements[j], j) for j in range(n) if indeg[j] == 0]
            heapq.heapify(heap)
            out = []
            while heap:
                _, i = heapq.heappop(heap)
                out.append(self.elements[i])
                for j in np.flatnonzero(strict[i]):
                    indeg[j] -= 1
                    if indeg[j] == 0:
                        heapq.heappush(heap, (self.elements[j], int(j)))
            if len(out) != n:
                raise ValidationError("relation has a cycle; no linear extension")
            self._ext = tuple(out)
        return self._ext

    def subposet(self, subset: Iterable[str]) -> "Poset":
        """Induced (full) subposet; element order follows this poset's."""
        keep = set(subset)
        missing = keep - set(self.elements)
        if missing:
            raise ValidationError(f"not elements of the poset: {sorted(missing)}")
        idx = [i for i, e in enumerate(self.elements) if e in keep]
        return Poset([self.elements[i] for i in idx], self.leq[np.ix_(idx, idx)], check=False)

    def relabel(self, mapping: Mapping[str, str] | None = None, *, prefix: str = "") -> "Poset":
        if mapping is None:
            mapping = {e: prefix + e for e in self.elements}
        return Poset([mapping[e] for e in self.elements], self.leq, check=False)

    def chains(self) -> Iterator[tuple[str, ...]]:
        """All nonempty chains ``e0 < e1 < ... < ek``, ascending."""
        ext = self.linear_extension()
        pos = {e: i for i, e in enumerate(ext)}
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        above = {
            e: sorted((self.elements[j] for j in np.flatnonzero(strict[self.index[e]])), key=pos.__getitem__)
            for e in self.elements
        }

        def grow(chain: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
            yield chain
            for nxt in above[chain[-1]]:
                yield from grow(chain + (nxt,))

        for e in ext:
            yield from grow((e,))

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        els = sorted(self.elements)
        pairs = [
            [a, b] for a in els for b in els if a != b and self.le(a, b)
        ]
        return {"elements": els, "leq": pairs}

    @classmethod
    def from_json(cls, doc: Mapping, *, check: bool = True) -> "Poset":
        extra = set(doc) - {"elements", "leq"}
        if extra:
            raise ValidationError(f"unknown poset keys: {sorted(extra)}")
        return cls.from_pairs(doc["elements"], [tuple(p) for p in doc.get("leq", [])], check=check)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _transitive_closure(mat: np.ndarray) -> np.ndarray:
    m = mat.copy()
    n = len(m)
    for k in range(n):
        m |= np.outer(m[:, k], m[k, :])
    return m


def validate_poset(p: Poset) -> Report:
    """Report every violated poset axiom with a witness; empty iff ``p`` is a poset."""
    rep = Report("poset")
    L = p.leq
    e = p.elements
    n = len(e)
    for i in range(n):
        if not L[i, i]:
            rep.add("reflexivity", (e[i],))
    sym = L & L.T
    for i, j in zip(*np.nonzero(np.triu(sym, 1))):
        rep.add("antisymmetry", (e[i], e[j]))
    off = L & ~np.eye(n, dtype=bool)
    two_step = (off.astype(np.int64) @ off.astype(np.int64)) > 0
    bad = two_step & ~L
    for i, k in zip(*np.nonzero(bad)):
        j = int(np.flatnonzero(off[i] & off[:, k])[0])
        rep.add("transitivity", (e[i], e[j], e[k]))
    return rep


# -- constructions -----------------------------------------------------

def product(p: Poset, q: Poset) -> Poset:
    """Product order: ``(a,b) <= (c,d)`` iff ``a <= c`` and ``b <= d``."""
    els = [pair_id(a, b) for a in p.elements for b in q.elements]
    return Poset(els, np.kron(p.leq, q.leq).astype(bool), check=False)


def power(p: Poset, n: int) -> Poset:
    """``p^n`` with tuple identifiers ``(a,b,c)``."""
    els = []
    idx = list(itertools.product(range(len(p)), repeat=n))
    for t in idx:
        els.append(tuple_id([p.elements[i] for i in t]))
    m = len(idx)
    mat = np.ones((m, m), dtype=bool)
    for k in range(n):
        col = np.array([t[k] for t in idx], dtype=int)
        mat &= p.leq[np.ix_(col, col)]
    return Poset(els, mat, check=False)


def cone(p: Poset, apex: str = APEX) -> Poset:
    """Adjoin a new minimum ``apex``."""
    if apex in p:
        raise ValidationError(f"cone apex {apex!r} collides with an element")
    n = len(p)
    mat = np.zeros((n + 1, n + 1), dtype=bool)
    mat[0, :] = True
    mat[1:, 1:] = p.leq
    return Poset((apex,) + p.elements, mat, check=False)


def join_poset(p: Poset, q: Poset) -> Poset:
    """The poset making ``cone(join) = product of cones`` hold.

    Elements are ``p``, ``q`` and pairs ``(a,b)``; ``a <= (a',b)`` iff
    ``a <= a'`` and symmetrically for ``q``.
    """
    clash = set(p.elements) & set(q.elements)
    if clash:
        raise ValidationError(f"join of posets with shared identifiers {sorted(clash)}")
    pairs = [pair_id(a, b) for a in p.elements for b in q.elements]
    clash = set(pairs) & (set(p.elements) | set(q.elements))
    if clash:
        raise ValidationError(f"join pair identifiers collide with elements {sorted(clash)}")
    n, m = len(p), len(q)
    N = n + m + n * m
    mat = np.zeros((N, N), dtype=bool)
    mat[:n, :n] = p.leq
    mat[n:n + m, n:n + m] = q.leq
    mat[n + m:, n + m:] = np.kron(p.leq, q.leq)
    # a <= (a', b) iff a <= a'
    mat[:n, n + m:] = np.repeat(p.leq, m, axis=1)
    # b <= (a, b') iff b <= b'
    mat[n:n + m, n + m:] = np.tile(q.leq, (1, n))
    return Poset(p.elements + q.elements + tuple(pairs), mat, check=False)


def disjoint_union(p: Poset, q: Poset) -> Poset:
    """Coproduct with identifiers ``L:a`` and ``R:b``."""
    els = tuple("L:" + a for a in p.elements) + tuple("R:" + b for b in q.elements)
    n, m = len(p), len(q)
    mat = np.zeros((n + m, n + m), dtype=bool)
    mat[:n, :n] = p.leq
    mat[n:, n:] = q.leq
    return Poset(els, mat, check=False)


@dataclass(frozen=True)
class Consecutive:
    verdict: str  # "consecutive" | "not-full" | "not-interval"
    witness: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.verdict == "consecutive"


def consecutive_check(q: Iterable[str], p: Poset) -> Consecutive:
    """Is the inclusion of ``q`` into ``p`` consecutive (full and interval-closed)?

    An induced subposet is automatically full, so only ``not-interval`` can
    occur for plain subsets; the witness is ``(x, y, z)`` with ``x <= y <= z``,
    ``x, z`` in ``q`` and ``y`` outside.
    """
    qs = set(q)
    missing = qs - set(p.elements)
    if missing:
        raise ValidationError(f"not elements of the poset: {sorted(missing)}")
    inside = np.array([e in qs for e in p.elements], dtype=bool)
    L = p.leq
    for i in np.flatnonzero(inside):
        for k in np.flatnonzero(inside & L[i]):
            between = L[i] & L[:, k] & ~inside
            if between.any():
                j = int(np.flatnonzero(between)[0])
                return Consecutive("not-interval", (p.elements[i], p.elements[j], p.elements[k]))
    return Consecutive("consecutive")


def order_complex(p: Poset) -> "SimplicialComplex":
    """Nerve of ``p``: vertices are elements, simplices are nonempty chains.

    The vertex order is :meth:`Poset.linear_extension`.
    """
    from .complex import SimplicialComplex

    return SimplicialComplex(p.linear_extension(), p.chains())


# -- the poset of (depth, dimension) pairs -----------------------------

@dataclass(frozen=True, order=True)
class DepthDim:
    depth: int
    dim: int

    def __post_init__(self):
        if not (-1 <= self.depth <= self.dim):
            raise ValueError(f"need -1 <= depth <= dim, got {self.depth}, {self.dim}")

    @property
    def id(self) -> str:
        return pair_id(str(self.depth), str(self.dim))

    def le(self, other: "DepthDim") -> bool:
        return self.depth >= other.depth and self.dim >= other.dim


def pp_make(maxdim: int) -> Poset:
    """Pairs ``(k, n)`` with ``-1 <= k <= n <= maxdim``; ``(k,n) <= (k',n')`` iff ``k >= k'`` and ``n >= n'``."""
    if maxdim < -1:
        raise ValueError(f"maxdim must be >= -1, got {maxdim}")
    pts = [DepthDim(k, n) for n in range(-1, maxdim + 1) for k in range(-1, n + 1)]
    mat = np.array([[a.le(b) for b in pts] for a in pts], dtype=bool)
    return Poset([d.id for d in pts], mat, check=False)


# -- isomorphism and enumeration --------------------------------------

def _levels(L: np.ndarray) -> list[int]:
    """Length of the longest chain ending at each element."""
    n = len(L)
    strict = L & ~np.eye(n, dtype=bool)
    level = [0] * n
    order = sorted(range(n), key=lambda i: int(L[:, i].sum()))
    for j in order:
        below = np.flatnonzero(strict[:, j])
        level[j] = 1 + max((level[i] for i in below), default=-1)
    return level


def is_isomorphic(p: Poset, q: Poset) -> dict[str, str] | None:
    """Backtracking search for an order isomorphism ``p -> q``.

    Candidates are pruned by (down-set size, up-set size, level); returns a
    mapping of identifiers or ``None``.
    """
    n = len(p)
    if n != len(q):
        return None
    if n == 0:
        return {}
    A, B = p.leq, q.leq
    la, lb = _levels(A), _levels(B)
    sig_a = [(int(A[:, i].sum()), int(A[i].sum()), la[i]) for i in range(n)]
    sig_b = [(int(B[:, i].sum()), int(B[i].sum()), lb[i]) for i in range(n)]
    if sorted(sig_a) != sorted(sig_b):
        return None
    cands = {i: [j for j in range(n) if sig_b[j] == sig_a[i]] for i in range(n)}
    order = sorted(range(n), key=lambda i: (len(cands[i]), la[i]))
    image = [-1] * n
    used = [False] * n

    def ok(i: int, j: int) -> bool:
        for i2 in range(n):
            j2 = image[i2]
            if j2 < 0:
                continue
            if A[i, i2] != B[j, j2] or A[i2, i] != B[j2, j]:
                return False
        return True

    def search(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in cands[i]:
            if not used[j] and ok(i, j):
                image[i] = j
                used[j] = True
                if search(k + 1):
                    return True
                image[i] = -1
                used[j] = False
        return False

    if not search(0):
        return None
    return {p.elements[i]: q.elements[image[i]] for i in range(n)}


def is_order_preserving(f: Mapping[str, str], p: Poset, q: Poset) -> list[tuple[str, str]]:
    """Pairs ``a <= b`` in ``p`` whose images are not ``<=`` in ``q`` (empty = monotone)."""
    bad = []
    for a in p.elements:
        for b in p.up(a):
            if not q.le(f[a], f[b]):
                bad.append((a, b))
    return sorted(bad)


def ideals(p: Poset) -> Iterator[frozenset[str]]:
    """All downward-closed subsets, including empty and total."""
    ext = p.linear_extension()

    def grow(k: int, chosen: frozenset[str]) -> Iterator[frozenset[str]]:
        if k == len(ext):
            yield chosen
            return
        e = ext[k]
        yield from grow(k + 1, chosen)
        if p.down(e) - {e} <= chosen:
            yield from grow(k + 1, chosen | {e})

    # the recursion is over a linear extension, so every element's strict
    # down-set is decided before the element itself
    yield from grow(0, frozenset())


def _canonical(L: np.ndarray) -> bytes:
    n = len(L)
    best = None
    for perm in itertools.permutations(range(n)):
        key = L[np.ix_(perm, perm)].tobytes()
        if best is None or key < best:
            best = key
    return best or b""


def all_posets(n: int) -> list[Poset]:
    """One representative of every isomorphism class of ``n``-element posets.

    Grown by adding a new maximal element over each order ideal, then
    deduplicated by brute-force canonical form (fine for ``n <= 5``).
    """
    labelled = [np.zeros((0, 0), dtype=bool)]
    for m in range(n):
        nxt = []
        for L in labelled:
            base = Poset([str(i) for i in range(m)], L, check=False)
            for ideal in ideals(base):
                M = np.zeros((m + 1, m + 1), dtype=bool)
                M[:m, :m] = L
                for e in ideal:
                    M[int(e), m] = True
                M[m, m] = True
                nxt.append(M)
        seen = {}
        for M in nxt:
            seen.setdefault(_canonical(M), M)
        labelled = list(seen.values())
    reps = sorted(labelled, key=lambda M: (int(M.sum()), _canonical(M)))
    return [Poset([str(i) for i in range(n)], M, check=False) for M in reps]
