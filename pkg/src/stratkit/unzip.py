"""Combinatorial unzipping of a closed union of strata.

Given a downward-closed set ``d`` of strata, the deep simplices (those in
``d``) form a subcomplex ``Y``.  Everything is modelled inside barycentric
subdivisions of ``K``:

* the cone locus is ``Sd Y``, the full subcomplex of ``Sd K`` on deep barycenters;
* the link is the full subcomplex of ``Sd^2 K`` on barycenters of mixed chains
  (chains meeting both ``Y`` and its complement);
* the unzip is the full subcomplex of ``Sd K`` on the outer barycenters that
  are not collar simplices.  A collar simplex is an outer simplex ``s`` that
  splits as a join ``delta * omega`` with ``delta`` a nonempty deep simplex
  spanned by the vertices of ``s`` lying in ``Y`` and ``omega`` the nonempty
  rest.  Dropping collars retracts the complement of ``Y`` off its collar, so a
  cone point is resolved by exactly a copy of ``Sd`` of its base.

The full subcomplex on all outer barycenters (``complement``) is kept too;
it is the unzip with the collar still attached.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import linalg
from .complex import (
    Simplex,
    SimplicialComplex,
    boundary_rows,
    cycle_basis,
    homology,
    sd,
    simplex_id,
    subdivide,
)
from .report import InvariantError, ValidationError
from .strat import StratifiedComplex, depth_dim_report

DEEP, OUTER, MIXED = "deep", "outer", "mixed"


@dataclass
class ChainClassification:
    deep_strata: frozenset[str]
    deep_simplices: frozenset[Simplex]
    classes: dict[Simplex, str]  # chains of Face(K), i.e. simplices of Sd K

    def of_class(self, kind: str) -> list[Simplex]:
        return sorted((c for c, k in self.classes.items() if k == kind), key=lambda c: (len(c), c))

    def counts(self) -> dict[str, int]:
        out = {DEEP: 0, OUTER: 0, MIXED: 0}
        for k in self.classes.values():
            out[k] += 1
        return out


def classify_chains(x: StratifiedComplex, d: Iterable[str]) -> ChainClassification:
    d = frozenset(d)
    unknown = d - set(x.poset.elements)
    if unknown:
        raise ValidationError(f"unknown strata {sorted(unknown)}")
    for a in sorted(d):
        for b in sorted(x.poset.down(a)):
            if b not in d:
                raise ValidationError(f"deep set is not downward closed; witness ({b}, {a})")
    k = x.complex
    deep_ids = {k.id_of[s] for s in x.deep_simplices(d)}
    sdk, _ = subdivide(k)
    classes = {}
    for chain in sdk.simplices:
        flags = [m in deep_ids for m in chain]
        if all(flags):
            classes[chain] = DEEP
        elif not any(flags):
            classes[chain] = OUTER
        else:
            n = flags.index(False)
            if any(flags[n:]):
                raise InvariantError(f"deep members of {chain} are not an initial segment")
            classes[chain] = MIXED
    return ChainClassification(d, x.deep_simplices(d), classes)


def _collar_retraction(k: SimplicialComplex, deep: frozenset[Simplex]) -> dict[Simplex, Simplex]:
    """``r(s)`` for every outer simplex: its off-``Y`` part if ``s`` is a collar, else ``s``."""
    yverts = {v for s in deep for v in s}
    r = {}
    for s in k.simplices:
        if s in deep:
            continue
        delta = tuple(v for v in s if v in yverts)
        omega = tuple(v for v in s if v not in yverts)
        r[s] = omega if delta and omega and delta in deep else s
    return r


@dataclass
class Ledger:
    field: str
    union_ok: bool
    intersection_ok: bool
    euler: dict[str, int]
    betti: dict[str, tuple[int, ...]]
    mv_ranks: tuple[int, ...]
    mv_predicted: tuple[int, ...]
    failures: list[str] = field(default_factory=list)

    @property
    def balanced(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "union": self.union_ok,
            "intersection": self.intersection_ok,
            "euler": dict(self.euler),
            "betti": {k: list(v) for k, v in self.betti.items()},
            "mv_ranks": list(self.mv_ranks),
            "mv_predicted_betti": list(self.mv_predicted),
            "balanced": self.balanced,
            "failures": list(self.failures),
        }


@dataclass
class UnzipDecomposition:
    source: StratifiedComplex
    classification: ChainClassification
    deep_complex: SimplicialComplex
    cone_locus: SimplicialComplex
    unzip: StratifiedComplex
    complement: SimplicialComplex
    link: SimplicialComplex
    pi: dict[str, str]
    rho: dict[str, str]
    ledger: Ledger | None = None

    @property
    def degenerate(self) -> bool:
        return not self.link.simplices

    def to_json(self) -> dict:
        out = {
            "deep": sorted(self.classification.deep_strata),
            "chain_counts": self.classification.counts(),
            "cone_locus": self.cone_locus.to_json(),
            "unzip": self.unzip.to_json(),
            "complement": self.complement.to_json(),
            "link": self.link.to_json(),
            "pi": dict(sorted(self.pi.items())),
            "rho": dict(sorted(self.rho.items())),
        }
        if self.ledger is not None:
            out["ledger"] = self.ledger.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _check_simplicial(f: dict[str, str], src: SimplicialComplex, dst: SimplicialComplex, name: str) -> None:
    for s in src.simplices:
        image = {f[v] for v in s}
        try:
            t = dst.normalize(image)
        except KeyError:
            raise InvariantError(f"{name} sends {s} outside the target") from None
        if t not in dst.simplices:
            raise InvariantError(f"{name} is not simplicial on {s}")


def unzip_once(x: StratifiedComplex, d: Iterable[str], *, field: str | None = "q") -> UnzipDecomposition:
    """Unzip ``x`` along the closed union of strata ``d``.

    With ``field`` set, the decomposition ledger is computed and must balance.
    Empty or total ``d`` gives the trivial decomposition with an empty link.
    """
    cls = classify_chains(x, d)
    k = x.complex
    sdk, _ = subdivide(k)
    deep = cls.deep_simplices
    y = k.subcomplex(deep)
    cone_locus = sdk.full_subcomplex(k.id_of[s] for s in deep)

    r = _collar_retraction(k, deep)
    kept = [s for s in k.ordered if s in r and r[s] == s]
    unzip_k = sdk.full_subcomplex(k.id_of[s] for s in kept)
    shallow = [p for p in x.poset.elements if p not in cls.deep_strata]
    assign = {c: x.assignment[k.simplex_of[c[-1]]] for c in unzip_k.simplices}
    unzip = StratifiedComplex(unzip_k, x.poset.subposet(shallow), assign, check=False)
    complement = sdk.full_subcomplex(k.id_of[s] for s in r)

    sd2 = sd(k, 2)
    mixed = cls.of_class(MIXED)
    link = sd2.full_subcomplex(simplex_id(c) for c in mixed)
    deep_ids = {k.id_of[s] for s in deep}
    rid = {k.id_of[s]: k.id_of[t] for s, t in r.items()}
    pi, rho = {}, {}
    pos = {v: i for i, v in enumerate(sdk.vertices)}
    for c in mixed:
        cid = simplex_id(c)
        n = sum(m in deep_ids for m in c)
        pi[cid] = simplex_id(c[:n])
        image = sorted({rid[m] for m in c[n:]}, key=pos.__getitem__)
        rho[cid] = simplex_id(image)
    _check_simplicial(pi, link, sd(cone_locus), "pi")
    _check_simplicial(rho, link, sd(unzip_k), "rho")

    dec = UnzipDecomposition(x, cls, y, cone_locus, unzip, complement, link, pi, rho)
    if field is not None:
        dec.ledger = decomposition_report(dec, field)
    return dec


def _embed(vecs, src: SimplicialComplex, n: int, index: dict[Simplex, int], offset: int = 0):
    order = src.by_dim[n] if n <= src.dim else ()
    for v in vecs:
        yield {index[order[i]] + offset: x for i, x in v.items()}


def _mv_ranks(k2: SimplicialComplex, nbhd: SimplicialComplex, outer: SimplicialComplex,
              link: SimplicialComplex, field: str) -> list[int]:
    """``rank(H_n(L) -> H_n(N) + H_n(U))`` for every ``n``, from cycles and boundaries."""
    ranks = []
    for n in range(k2.dim + 1):
        if n > link.dim:
            ranks.append(0)
            continue
        index = {s: i for i, s in enumerate(k2.by_dim[n])}
        size = len(index)
        bn = list(_embed(_boundaries(nbhd, n), nbhd, n, index))
        bu = list(_embed(_boundaries(outer, n), outer, n, index, size))
        cyc = []
        for z in _embed(cycle_basis(link, n, field), link, n, index):
            both = dict(z)
            both.update({i + size: x for i, x in z.items()})
            cyc.append(both)
        if not cyc:
            ranks.append(0)
            continue
        ech = linalg.echelon(field)
        for v in bn + bu:
            ech.add(linalg.as_field_vector(v, field))
        base = ech.rank
        for v in cyc:
            ech.add(linalg.as_field_vector(v, field))
        ranks.append(ech.rank - base)
    return ranks


def _boundaries(c: SimplicialComplex, n: int) -> list[dict[int, int]]:
    """Boundaries of the (n+1)-simplices, indexed by ``c.by_dim[n]``."""
    return boundary_rows(c, n + 1)


def decomposition_report(dec: UnzipDecomposition, field: str = "q", *, strict: bool = True) -> Ledger:
    """Check ``Sd^2 K = N u U`` with ``N n U = link`` and the homology it forces.

    ``N`` (derived neighbourhood of ``Y``) and ``U`` are the full subcomplexes
    of ``Sd^2 K`` on deep-or-mixed and outer-or-mixed chain barycenters.
    """
    field = linalg.field_tag(field)
    k = dec.source.complex
    sd2 = sd(k, 2)
    cls = dec.classification.classes
    nb = sd2.full_subcomplex(simplex_id(c) for c, t in cls.items() if t != OUTER)
    ou = sd2.full_subcomplex(simplex_id(c) for c, t in cls.items() if t != DEEP)
    link = dec.link
    fails = []
    union_ok = (nb.simplices | ou.simplices) == sd2.simplices
    inter = nb.simplices & ou.simplices
    inter_ok = inter == link.simplices
    if not union_ok:
        missing = min(sd2.simplices - nb.simplices - ou.simplices)
        fails.append(f"union misses {missing}")
    if not inter_ok:
        odd = min(inter ^ link.simplices)
        fails.append(f"intersection differs from link at {odd}")

    chi = {
        "K": k.euler_characteristic(),
        "N": nb.euler_characteristic(),
        "U": ou.euler_characteristic(),
        "link": link.euler_characteristic(),
    }
    if chi["K"] != chi["N"] + chi["U"] - chi["link"]:
        fails.append(f"euler {chi['K']} != {chi['N']} + {chi['U']} - {chi['link']}")

    def betti(c: SimplicialComplex) -> tuple[int, ...]:
        return homology(c, field).trimmed()

    b = {
        "K": betti(k),
        "N": betti(nb),
        "Y": betti(dec.deep_complex),
        "U": betti(ou),
        "unzip": betti(dec.unzip.complex),
        "complement": betti(dec.complement),
        "link": betti(link),
    }
    if b["N"] != b["Y"]:
        fails.append(f"betti N {b['N']} != betti Y {b['Y']}")
    if b["U"] != b["unzip"]:
        fails.append(f"betti U {b['U']} != betti unzip {b['unzip']}")
    if b["complement"] != b["unzip"]:
        fails.append(f"betti complement {b['complement']} != betti unzip {b['unzip']}")

    ranks = _mv_ranks(sd2, nb, ou, link, field)
    top = sd2.dim + 1

    def at(t: tuple[int, ...], n: int) -> int:
        return t[n] if 0 <= n < len(t) else 0

    predicted = []
    for n in range(top):
        prev = at(b["link"], n - 1) - (ranks[n - 1] if n > 0 else 0)
        predicted.append(at(b["N"], n) + at(b["U"], n) - ranks[n] + prev)
    for n in range(top):
        if predicted[n] != at(b["K"], n):
            fails.append(f"mayer-vietoris degree {n}: predicted {predicted[n]}, betti {at(b['K'], n)}")
    ledger = Ledger(field, union_ok, inter_ok, chi, b, tuple(ranks), tuple(predicted), fails)
    if strict and fails:
        raise InvariantError("decomposition ledger does not balance: " + "; ".join(fails))
    return ledger


def unzip_tower(x: StratifiedComplex, *, field: str | None = "q") -> list[UnzipDecomposition]:
    """Unzip the deepest strata until every stratum has depth zero."""
    stages: list[UnzipDecomposition] = []
    start = depth_dim_report(x).max_depth
    cur = x
    depth = start
    while depth > 0:
        rep = depth_dim_report(cur)
        worst = [p for p, row in rep.table.items() if row.depth == depth]
        d = cur.poset.downset(worst)
        dec = unzip_once(cur, d, field=field)
        stages.append(dec)
        cur = dec.unzip
        new = depth_dim_report(cur).max_depth
        if new >= depth:
            raise InvariantError(f"unzipping did not lower the maximal depth ({depth} -> {new})")
        if len(stages) > start:
            raise InvariantError("tower longer than the starting maximal depth")
        depth = new
    return stages


# -- mesh export -----------------------------------------------------------

def moment_coordinates(k: SimplicialComplex) -> dict[str, np.ndarray]:
    """Vertices on the moment curve ``(t, t^2, t^3)``: general position up to dimension 3."""
    return {
        v: np.array([t, t * t, t ** 3], dtype=float) / (len(k.vertices) ** 2)
        for t, v in ((i + 1.0, v) for i, v in enumerate(k.vertices))
    }


def realize(base: SimplicialComplex, level: int) -> dict[str, np.ndarray]:
    """Coordinates for the vertices of ``Sd^level base`` by iterated barycenters."""
    coords = moment_coordinates(base)
    cur = base
    for _ in range(level):
        nxt = {sid: np.mean([coords[v] for v in s], axis=0) for s, sid in cur.id_of.items()}
        coords = nxt
        cur = subdivide(cur)[0]
    return coords


def to_off(c: SimplicialComplex, coords: dict[str, np.ndarray]) -> str:
    """OFF text: all 2-simplices, plus lower-dimensional maximal simplices as degenerate faces."""
    if c.dim > 3:
        raise ValidationError("mesh export supports dimension <= 3")
    idx = {v: i for i, v in enumerate(c.vertices)}
    faces = [s for s in c.ordered if len(s) == 3]
    faces += [s for s in c.maximal_simplices if len(s) < 3]
    faces.sort(key=lambda s: [idx[v] for v in s])
    lines = ["OFF", f"{len(c.vertices)} {len(faces)} 0"]
    for v in c.vertices:
        lines.append(" ".join(f"{x:.6f}" for x in coords[v]))
    for s in faces:
        lines.append(" ".join([str(len(s))] + [str(idx[v]) for v in s]))
    return "\n".join(lines) + "\n"


def export_part(dec: UnzipDecomposition, part: str) -> str:
    """OFF mesh of one part of a decomposition, placed inside the realization of ``K``."""
    k = dec.source.complex
    table = {
        "source": (k, 0),
        "cone_locus": (dec.cone_locus, 1),
        "unzip": (dec.unzip.complex, 1),
        "complement": (dec.complement, 1),
        "link": (dec.link, 2),
    }
    if part not in table:
        raise ValidationError(f"unknown part {part!r}; choose from {sorted(table)}")
    c, level = table[part]
    return to_off(c, realize(k, level))
