"""Print the (depth, dimension) table of every stratified corpus entry and of
the cone over every corpus complex.

    python scripts/depth_tables.py [--name NAME]
"""
import argparse

from stratkit import corpus
from stratkit.strat import cone_strat, depth_dim_report, face_stratification


def show(title, x):
    rep = depth_dim_report(x)
    verdict = "monotone" if rep.monotone else f"violations {rep.violations}"
    print(f"== {title}: max depth {rep.max_depth}, {verdict}")
    for p, row in sorted(rep.table.items()):
        flag = "" if row.pure else "  (non-pure)"
        print(f"   {p:24s} dim={row.stratum_dim} local={row.star_dim} depth={row.depth}{flag}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--name", help="only this corpus entry")
    a = ap.parse_args()
    for name in sorted(corpus.STRATIFIED):
        if a.name in (None, name):
            show(name, corpus.STRATIFIED[name]())
    for name in sorted(corpus.COMPLEXES):
        if a.name in (None, name):
            z = face_stratification(corpus.COMPLEXES[name]())
            show(f"cone over {name} (dim {z.complex.dim})", cone_strat("apex", z))


if __name__ == "__main__":
    main()
