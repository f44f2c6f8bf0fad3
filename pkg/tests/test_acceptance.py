"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import sympy
from sympy.functions.combinatorial.numbers import bell

from stratkit import corpus
from stratkit.cli import dispatch
from stratkit.complex import complex_isomorphism, homology, sd
from stratkit.poset import Poset, all_posets, cone, ideals, is_isomorphic, join_poset, product, validate_poset
from stratkit.ran import partitions_poset, ran_poset, wreath_poset
from stratkit.sheaf import (
    circle_local_system,
    coarse_equivalence_check,
    cohomology,
    constant_sheaf,
    pullback_refinement,
    random_chain_functor,
)
from stratkit.strat import cone_strat, depth_dim_report, face_stratification, join_strat, product_strat
from stratkit.unzip import unzip_once, unzip_tower

ROOT = Path(__file__).resolve().parents[1]
RESULTS: list[str] = []


class Check:
    """Collects failures for one criterion and reports a single line."""

    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.failures: list[str] = []
        self.detail = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def expect(self, cond, what: str) -> None:
        if not cond:
            self.failures.append(what)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.budget:
            self.failures.append(f"took {elapsed:.2f}s, budget {self.budget:.0f}s")
        verdict = "PASS" if not self.failures else "FAIL"
        line = f"{verdict} {self.number} {self.title}: {self.detail} ({elapsed:.2f}s < {self.budget:.0f}s)"
        if self.failures:
            line += " | " + "; ".join(self.failures[:5])
        RESULTS.append(line)
        print(line)
        assert not self.failures, line
        return False


def pure_face_corpus() -> dict:
    out = {}
    for name, build in sorted(corpus.COMPLEXES.items()):
        k = build()
        if len({len(s) for s in k.maximal_simplices}) == 1:
            out[name] = face_stratification(k)
    return out


def dense_s1_oracle(monodromy: int) -> tuple[int, int]:
    verts = ["a", "b", "c"]
    edges = [("a", "b"), ("b", "c"), ("a", "c")]
    cells = verts + edges
    pairs = [(v, e) for e in edges for v in e]
    d = sympy.zeros(len(pairs), len(cells))
    for r, (v, e) in enumerate(pairs):
        d[r, cells.index(e)] += 1
        d[r, cells.index(v)] -= monodromy if (v, e) == ("a", ("a", "c")) else 1
    rank = d.rank()
    return len(cells) - rank, len(pairs) - rank


def test_cone_join_law():
    with Check(1, "cone-join poset law", 5) as c:
        reps = [p for n in range(5) for p in all_posets(n)]
        count = 0
        for p in reps:
            for q in reps:
                q = q.relabel(prefix="w")
                c.expect(
                    is_isomorphic(product(cone(p), cone(q)), cone(join_poset(p, q))) is not None,
                    f"{p!r} * {q!r}",
                )
                count += 1
        c.detail = f"{count} pairs over {len(reps)} posets"


def test_classifying_space_law():
    with Check(2, "Betti(Sd K) = Betti(K)", 30) as c:
        for name, build in sorted(corpus.COMPLEXES.items()):
            k = build()
            s = sd(k)
            for field in ("q", "f2"):
                c.expect(homology(s, field).betti == homology(k, field).betti, f"{name} over {field}")
        c.detail = f"{len(corpus.COMPLEXES)} complexes, both fields"


def test_depth_law():
    with Check(3, "depth law and P-map monotone", 5) as c:
        pure = pure_face_corpus()
        for name, build in sorted(corpus.COMPLEXES.items()):
            z = face_stratification(build())
            rep = depth_dim_report(cone_strat("apex", z))
            c.expect(rep.depth("*") == z.complex.dim + 1, f"cone point depth for {name}")
        built = 0
        for name, x in pure.items():
            c.expect(depth_dim_report(x).monotone, name)
            c.expect(depth_dim_report(cone_strat("apex", x)).monotone, f"cone {name}")
            built += 2
        for a, x in pure.items():
            for b, y in pure.items():
                if x.complex.dim + y.complex.dim > 2:
                    continue
                y = y.relabel(vertex_prefix="w.", stratum_prefix="w.")
                c.expect(depth_dim_report(join_strat(x, y)).monotone, f"join {a} {b}")
                c.expect(depth_dim_report(product_strat(x, y)).monotone, f"product {a} {b}")
                built += 2
        c.detail = f"{len(corpus.COMPLEXES)} cone points, {built} stratified spaces"


def test_sheaf_laws():
    with Check(4, "constructible sheaf laws", 60) as c:
        spaces = [face_stratification(b()) for _, b in sorted(corpus.COMPLEXES.items())]
        spaces += [b() for _, b in sorted(corpus.STRATIFIED.items())]
        for x in spaces:
            c.expect(cohomology(constant_sheaf(x)).trimmed() == homology(x.complex).trimmed(), f"constant on {x!r}")
        for m, expected in ((1, (1, 1)), (-1, (0, 0))):
            c.expect(dense_s1_oracle(m) == expected, f"dense oracle at monodromy {m}")
            c.expect(cohomology(circle_local_system(m)).dims == expected, f"S1 monodromy {m}")
        for name, build in sorted(corpus.SHEAVES.items()):
            f = build()
            c.expect(cohomology(pullback_refinement(f)).trimmed() == cohomology(f).trimmed(), f"pullback {name}")
        rng = random.Random(20240611)
        for n in range(4):
            for _ in range(5):
                g = random_chain_functor(n, rng)
                c.expect(coarse_equivalence_check(g).ok, f"coarse equivalence {g!r}")
        c.detail = f"{len(spaces)} constant sheaves, {len(corpus.SHEAVES)} pullbacks, 20 random functors"


def test_unzip_laws():
    with Check(5, "unzip laws", 120) as c:
        for name, z in (("cone-s0", corpus.two_points()), ("cone-s1", corpus.boundary(2)), ("cone-s2", corpus.boundary(3))):
            dec = unzip_once(corpus.STRATIFIED[name](), {"*"}, field=None)
            c.expect(complex_isomorphism(dec.unzip.complex, sd(z)) is not None, f"unzip of {name}")
            c.expect(complex_isomorphism(dec.link, sd(z, 2)) is not None, f"link of {name}")
        balanced = total = 0
        for name, build in sorted(corpus.STRATIFIED.items()):
            x = build()
            if len(x.complex.simplices) > 60:
                continue
            everything = frozenset(x.poset.elements)
            for d in ideals(x.poset):
                if d == everything:
                    continue
                total += 1
                ok = unzip_once(x, d).ledger.balanced
                balanced += ok
                c.expect(ok, f"{name} along {sorted(d)}")
        towers = 0
        for name, build in sorted(corpus.STRATIFIED.items()):
            x = build()
            stages = unzip_tower(x)
            c.expect(len(stages) <= max(depth_dim_report(x).max_depth, 0), f"tower length for {name}")
            towers += 1
        c.detail = f"3 cones, {balanced}/{total} ledgers balanced, {towers} towers"


def brute_verdict(m: np.ndarray) -> set[str]:
    kinds = set()
    n = len(m)
    if not m.diagonal().all():
        kinds.add("reflexivity")
    if any(m[a, b] and m[b, a] for a in range(n) for b in range(n) if a != b):
        kinds.add("antisymmetry")
    if any(m[a, b] and m[b, c] and not m[a, c] for a in range(n) for b in range(n) for c in range(n)):
        kinds.add("transitivity")
    return kinds


def test_ran_posets():
    with Check(6, "Ran and partition posets", 5) as c:
        for n in range(1, 5):
            c.expect(len(partitions_poset([str(i) for i in range(n)]).poset) == bell(n), f"Bell({n})")
        for p in [Poset.chain(0), Poset.chain(1), Poset.antichain(["a", "b"])]:
            for n in (1, 2, 3):
                c.expect(wreath_poset([str(i) for i in range(n)], p).projections_monotone, f"wreath {p!r} {n}")
        star = Poset(["*"], [[True]])
        for i in range(1, 6):
            c.expect(is_isomorphic(ran_poset(star, i).poset, Poset.chain(i - 1)) is not None, f"Ran point {i}")
        verdicts = {"poset": 0, "not a poset": 0}
        for n in range(1, 4):
            for p in all_posets(n):
                for i in range(1, 4):
                    r = ran_poset(p, i)
                    c.expect(validate_poset(r.poset).kinds() == brute_verdict(r.poset.leq), f"verdict {p!r} {i}")
                    verdicts["poset" if r.is_poset else "not a poset"] += 1
        c.detail = f"verdicts {verdicts['poset']} poset, {verdicts['not a poset']} not a poset"


def cli_runs() -> list[list[str]]:
    runs = []
    for kind, names in corpus.names().items():
        for name in names:
            ref = f"corpus:{name}"
            runs.append(["validate", ref])
            if kind == "complex":
                runs.append(["homology", ref])
            elif kind == "stratified":
                runs.append(["strata-report", ref])
            elif kind == "sheaf":
                runs.append(["sheaf-cohomology", ref])
            else:
                runs.append(["ran-poset", ref, "--bound", "2"])
    runs.append(["unzip", "corpus:cone-face-boundary2", "--deep", "*"])
    runs.append(["unzip-tower", "corpus:face-delta2"])
    return runs


def test_determinism():
    with Check(7, "byte-identical CLI output", 10) as c:
        runs = cli_runs()
        for argv in runs:
            c.expect(dispatch(argv) == dispatch(argv), " ".join(argv))
        env = dict(os.environ, PYTHONPATH=str(ROOT / "src"))
        argv = ["unzip", "corpus:cone-s1", "--deep", "*"]
        outs = set()
        for seed in ("0", "1", "12345"):
            env["PYTHONHASHSEED"] = seed
            done = subprocess.run(
                [sys.executable, "-m", "stratkit.cli", *argv], env=env, capture_output=True, check=True
            )
            outs.add(done.stdout)
        c.expect(len(outs) == 1, "output depends on hash seed")
        c.detail = f"{len(runs)} commands twice in process, 3 hash seeds in subprocesses"


if __name__ == "__main__":
    failed = 0
    for test in (
        test_cone_join_law,
        test_classifying_space_law,
        test_depth_law,
        test_sheaf_laws,
        test_unzip_laws,
        test_ran_posets,
        test_determinism,
    ):
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
