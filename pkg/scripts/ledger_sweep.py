"""Unzip every corpus stratification along every closed union of strata and
print the decomposition ledger for each.

    python scripts/ledger_sweep.py [--max-simplices 60] [--field q]
"""
import argparse
import time

from stratkit import corpus
from stratkit.poset import ideals
from stratkit.unzip import unzip_once


def sweep(max_simplices: int, field: str):
    for name in sorted(corpus.STRATIFIED):
        x = corpus.STRATIFIED[name]()
        if len(x.complex.simplices) > max_simplices:
            continue
        total = frozenset(x.poset.elements)
        t0 = time.perf_counter()
        rows = []
        for d in ideals(x.poset):
            if d == total:
                continue
            dec = unzip_once(x, d, field=field)
            rows.append((len(d), dec.ledger.euler, dec.ledger.balanced))
        yield name, len(x.complex.simplices), rows, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-simplices", type=int, default=60)
    ap.add_argument("--field", default="q", choices=["q", "f2"])
    a = ap.parse_args()
    grand = 0.0
    for name, size, rows, dt in sweep(a.max_simplices, a.field):
        grand += dt
        ok = sum(r[2] for r in rows)
        print(f"{name:28s} simplices={size:3d} deep sets={len(rows):4d} balanced={ok:4d} {dt:6.2f}s")
    print(f"total {grand:.2f}s")


if __name__ == "__main__":
    main()
