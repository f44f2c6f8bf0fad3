"""Stratifying posets of coincidence spaces and bounded Ran spaces."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .poset import Poset, is_order_preserving, power, tuple_id, validate_poset
from .report import Report, ValidationError

Partition = frozenset[frozenset[str]]


def set_partitions(items: Sequence[str]) -> list[Partition]:
    """All partitions of ``items``, generated by placing each item in turn."""
    items = list(items)
    if not items:
        return [frozenset()]
    out = []
    for rest in set_partitions(items[1:]):
        head = items[0]
        out.append(rest | {frozenset([head])})
        for block in rest:
            out.append((rest - {block}) | {block | {head}})
    return out


def relation(part: Partition) -> frozenset[tuple[str, str]]:
    """The equivalence relation of a partition, as a subset of ``I x I``."""
    return frozenset((a, b) for block in part for a in block for b in block)


def partition_id(part: Partition, order: Sequence[str]) -> str:
    pos = {v: i for i, v in enumerate(order)}
    blocks = sorted((sorted(b, key=pos.__getitem__) for b in part), key=lambda b: pos[b[0]])
    return "|".join(",".join(b) for b in blocks)


def _labels(items: Sequence[str]) -> list[str]:
    items = [str(i) for i in items]
    if not items:
        raise ValidationError("the index set must be nonempty")
    if len(set(items)) != len(items):
        raise ValidationError("repeated index set labels")
    return items


def _refines(fine: Partition, coarse: Partition) -> bool:
    return relation(fine) <= relation(coarse)


@dataclass(frozen=True)
class PartitionPoset:
    index: tuple[str, ...]
    poset: Poset
    partitions: dict[str, Partition]

    @property
    def minimum(self) -> str:
        return partition_id(frozenset([frozenset(self.index)]), self.index)

    @property
    def maximum(self) -> str:
        return partition_id(frozenset(frozenset([i]) for i in self.index), self.index)


def partitions_poset(items: Sequence[str]) -> PartitionPoset:
    """Partitions of ``items``; ``P <= P'`` iff ``P'`` refines ``P`` (reverse inclusion)."""
    items = _labels(items)
    parts = sorted(set_partitions(items), key=lambda p: (len(p), partition_id(p, items)))
    ids = [partition_id(p, items) for p in parts]
    n = len(parts)
    mat = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(parts):
        for j, b in enumerate(parts):
            mat[i, j] = _refines(b, a)
    return PartitionPoset(tuple(items), Poset(ids, mat), dict(zip(ids, parts)))


def _block_of(part: Partition, i: str) -> frozenset[str]:
    for b in part:
        if i in b:
            return b
    raise KeyError(i)


@dataclass(frozen=True)
class Wreath:
    poset: Poset
    to_partitions: dict[str, str]
    to_power: dict[str, str]
    partitions: PartitionPoset
    power: Poset
    violations: tuple[tuple[str, str], ...]

    @property
    def projections_monotone(self) -> bool:
        return not self.violations


def wreath_poset(items: Sequence[str], p: Poset) -> Wreath:
    """Pairs ``(P, c)`` of a partition of ``items`` and a labelling ``c : I/P -> p``.

    ``(P, c) <= (P', c')`` iff ``P'`` refines ``P`` and ``c(q(b)) <= c'(b)``
    for every block ``b`` of ``P'``, ``q`` being the quotient ``I/P' -> I/P``.
    """
    pp = partitions_poset(items)
    order = pp.index
    pos = {v: i for i, v in enumerate(order)}
    elems = []  # (id, partition id, {block: label})
    for pid in pp.poset.elements:
        part = pp.partitions[pid]
        blocks = sorted(part, key=lambda b: min(pos[v] for v in b))
        for labs in itertools.product(p.elements, repeat=len(blocks)):
            lab = dict(zip(blocks, labs))
            name = "|".join(
                ",".join(sorted(b, key=pos.__getitem__)) + ":" + l for b, l in zip(blocks, labs)
            )
            elems.append((name, pid, lab))
    n = len(elems)
    mat = np.zeros((n, n), dtype=bool)
    for i, (_, pa, la) in enumerate(elems):
        part_a = pp.partitions[pa]
        for j, (_, pb, lb) in enumerate(elems):
            if not pp.poset.le(pa, pb):
                continue
            mat[i, j] = all(
                p.le(la[_block_of(part_a, next(iter(b)))], lb[b]) for b in pp.partitions[pb]
            )
    w = Poset([e[0] for e in elems], mat)
    pw = power(p, len(order))
    to_part = {name: pid for name, pid, _ in elems}
    to_pow = {
        name: tuple_id([lab[_block_of(pp.partitions[pid], i)] for i in order]) for name, pid, lab in elems
    }
    bad = is_order_preserving(to_part, w, pp.poset) + is_order_preserving(to_pow, w, pw)
    return Wreath(w, to_part, to_pow, pp, pw, tuple(bad))


@dataclass(frozen=True)
class RanPoset:
    base: Poset
    bound: int
    poset: Poset  # built unchecked: the relation need not be a partial order
    counts: dict[str, tuple[int, ...]]
    verdict: Report

    @property
    def is_poset(self) -> bool:
        return self.verdict.ok


def ran_id(p: Poset, c: Sequence[int]) -> str:
    return ",".join(f"{e}={k}" for e, k in zip(p.elements, c))


def ran_poset(p: Poset, i: int) -> RanPoset:
    """Maps ``c : p -> Z>=0`` with ``1 <= sum(c) <= i``.

    ``c <= c'`` iff ``{q : c_q > c'_q}`` contains no maximal element of ``p``.
    The relation is taken as stated and checked with :func:`validate_poset`.
    """
    if i < 1:
        raise ValidationError(f"the bound must be >= 1, got {i}")
    maxima = {p.index[m] for m in p.maximal()}
    counts = [
        c for c in itertools.product(range(i + 1), repeat=len(p)) if 1 <= sum(c) <= i
    ]
    counts.sort(key=lambda c: (sum(c), tuple(-x for x in c)))
    n = len(counts)
    mat = np.zeros((n, n), dtype=bool)
    for a, c in enumerate(counts):
        for b, d in enumerate(counts):
            mat[a, b] = not any(c[q] > d[q] for q in maxima)
    ids = [ran_id(p, c) for c in counts]
    rel = Poset(ids, mat, check=False)
    return RanPoset(p, i, rel, dict(zip(ids, counts)), validate_poset(rel))


def pullback_partition(f: Mapping[str, str], part: Partition) -> Partition:
    """``i ~ i'`` iff ``f(i) ~ f(i')``."""
    blocks: dict[frozenset[str], set[str]] = {}
    for i, j in f.items():
        blocks.setdefault(_block_of(part, j), set()).add(i)
    return frozenset(frozenset(b) for b in blocks.values())


def monotone_surjections(m: int, n: int) -> list[dict[str, str]]:
    """Monotone surjections ``[m-1] -> [n-1]`` between ordinals, as label maps."""
    out = []
    for cuts in itertools.combinations(range(1, m), n - 1):
        f, k = {}, 0
        for i in range(m):
            if k < len(cuts) and i == cuts[k]:
                k += 1
            f[str(i)] = str(k)
        out.append(f)
    return out


def pullback_map(f: Mapping[str, str]) -> tuple[dict[str, str], PartitionPoset, PartitionPoset, list]:
    """The induced map of partition posets and its monotonicity violations."""
    src = partitions_poset(sorted(set(f.values()), key=int))
    dst = partitions_poset(sorted(f, key=int))
    table = {
        pid: partition_id(pullback_partition(f, part), dst.index) for pid, part in src.partitions.items()
    }
    return table, src, dst, is_order_preserving(table, src.poset, dst.poset)
