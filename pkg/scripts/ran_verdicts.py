"""Tabulate whether the bounded Ran relation is a partial order, for every
poset up to isomorphism with at most N elements and every bound up to I.

    python scripts/ran_verdicts.py [--max-size 3] [--max-bound 3]
"""
import argparse

from stratkit.poset import all_posets
from stratkit.ran import ran_poset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--max-bound", type=int, default=3)
    a = ap.parse_args()
    for n in range(1, a.max_size + 1):
        for p in all_posets(n):
            relations = [f"{x}<{y}" for x, y in p.covers()] or ["discrete"]
            for i in range(1, a.max_bound + 1):
                r = ran_poset(p, i)
                kinds = ", ".join(sorted(r.verdict.kinds())) or "partial order"
                print(f"|P|={n} {' '.join(relations):16s} i={i} elements={len(r.poset):3d} {kinds}")


if __name__ == "__main__":
    main()
