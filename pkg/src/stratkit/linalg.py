"""Exact sparse linear algebra over Q and Z/2.

Vectors are sparse: a ``dict[int, Fraction]`` over Q, a python ``int`` bitmask
over Z/2 (bit ``i`` set iff coordinate ``i`` is 1).  Everything here is exact;
there is no floating point.
"""
from __future__ import annotations

from fractions import Fraction
import heapq
from math import gcd
from typing import Iterable, Sequence

QQ = "Q"
F2 = "F2"
FIELDS = (QQ, F2)

_ALIASES = {"q": QQ, "Q": QQ, "QQ": QQ, "f2": F2, "F2": F2, "z2": F2, "Z/2": F2}


def field_tag(field: str) -> str:
    try:
        return _ALIASES[field]
    except KeyError:
        raise ValueError(f"unknown coefficient field {field!r}; use 'q' or 'f2'") from None


class EchelonQ:
    """Incrementally built row-echelon basis over Q.

    Rows are kept fraction free: rational input is scaled to a primitive
    integer vector, and elimination cross-multiplies and strips the content.
    This is exact and much faster than ``Fraction`` arithmetic.  Pivots are
    keyed by the smallest coordinate of the reduced vector.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, int]] = {}

    @staticmethod
    def _primitive(v: dict[int, int]) -> dict[int, int]:
        g = 0
        for x in v.values():
            g = gcd(g, x)
            if g == 1:
                break
        lead = v[min(v)]
        if lead < 0:
            g = -g
        if g != 1:
            v = {k: x // g for k, x in v.items()}
        return v

    @staticmethod
    def _integral(vec: dict[int, object]) -> dict[int, int]:
        if all(type(x) is int for x in vec.values()):
            return {k: x for k, x in vec.items() if x}
        fr = {k: Fraction(x) for k, x in vec.items() if x}
        den = 1
        for x in fr.values():
            den = den * x.denominator // gcd(den, x.denominator)
        return {k: int(x * den) for k, x in fr.items()}

    def reduce(self, vec: dict[int, object]) -> dict[int, int]:
        v = self._integral(vec)
        heap = list(v)
        heapq.heapify(heap)
        big = False
        while heap:
            c = heap[0]
            if c not in v:
                heapq.heappop(heap)
                continue
            piv = self.pivots.get(c)
            if piv is None:
                break
            a, b = v[c], piv[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            if b != 1:
                v = {k: x * b for k, x in v.items()}
            for k, x in piv.items():
                y = v.get(k)
                if y is None:
                    v[k] = -a * x
                    heapq.heappush(heap, k)
                    big = big or v[k].bit_length() > 62
                    continue
                y -= a * x
                if y:
                    v[k] = y
                    big = big or y.bit_length() > 62
                else:
                    del v[k]
            if big and v:
                v = self._primitive(v)
                big = False
        return self._primitive(v) if v else v

    def add(self, vec: dict[int, object]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        self.pivots[min(v)] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


class EchelonF2:
    """Row-echelon basis over Z/2 on int bitmasks."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, vec: int) -> int:
        v = vec
        while v:
            low = v & -v
            piv = self.pivots.get(low)
            if piv is None:
                return v
            v ^= piv
        return v

    def add(self, vec: int) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        self.pivots[v & -v] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def echelon(field: str):
    return EchelonQ() if field_tag(field) == QQ else EchelonF2()


def to_f2(vec: dict[int, object]) -> int:
    """Reduce a sparse integer/rational vector mod 2 into a bitmask."""
    out = 0
    for k, x in vec.items():
        x = Fraction(x)
        if x.denominator % 2 == 0:
            raise ValueError("vector entry not defined mod 2")
        if x.numerator % 2:
            out |= 1 << k
    return out


def as_field_vector(vec: dict[int, object], field: str):
    if field_tag(field) == F2:
        return to_f2(vec)
    return vec


def rank(vectors: Iterable[dict[int, object]], field: str = QQ) -> int:
    """Rank of the span of sparse vectors."""
    ech = echelon(field)
    for v in vectors:
        ech.add(as_field_vector(v, field))
    return ech.rank


def kernel(rows: Sequence[dict[int, object]], ncols: int, field: str = QQ) -> list[dict[int, Fraction]]:
    """Basis of ``{x : A x = 0}`` where ``A`` is given by sparse ``rows``.

    Works column by column: each column is reduced together with an identity
    tag, and columns whose matrix part reduces to zero leave a kernel vector
    in their tag.  Basis vectors come back as sparse ``{col: value}`` dicts.
    """
    field = field_tag(field)
    m = len(rows)
    cols: list[dict[int, object]] = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, x in row.items():
            if x:
                cols[j][i] = x
    basis: list[dict[int, Fraction]] = []
    if field == F2:
        ech2 = EchelonF2()
        mask = (1 << m) - 1
        for j in range(ncols):
            v = ech2.reduce(to_f2(cols[j]) | (1 << (m + j)))
            if v & mask:
                ech2.pivots[v & -v] = v
            else:
                tag = v >> m
                vec = {}
                k = 0
                while tag:
                    if tag & 1:
                        vec[k] = Fraction(1)
                    tag >>= 1
                    k += 1
                basis.append(vec)
        return basis
    ech = EchelonQ()
    for j in range(ncols):
        v = dict(cols[j])
        v[m + j] = 1
        v = ech.reduce(v)
        if min(v) < m:
            ech.pivots[min(v)] = v
        else:
            basis.append({k - m: Fraction(x) for k, x in v.items()})
    return basis


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """Dense product of matrices given as row tuples; shapes (p x q)(q x r)."""
    if not a:
        return ()
    q = len(a[0])
    r = len(b[0]) if b else 0
    if len(b) != q:
        raise ValueError(f"shape mismatch: {len(a)}x{q} times {len(b)}x{r}")
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(q)), Fraction(0)) for j in range(r))
        for i in range(len(a))
    )


def identity(n: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))


def dense_rank(mat: Sequence[Sequence[object]], field: str = QQ) -> int:
    return rank(({j: x for j, x in enumerate(row) if x} for row in mat), field)


def is_invertible(mat: Sequence[Sequence[Fraction]], rows: int, cols: int) -> bool:
    """Square and full rank; the 0x0 matrix counts as invertible."""
    if rows != cols:
        return False
    return dense_rank(mat) == rows
