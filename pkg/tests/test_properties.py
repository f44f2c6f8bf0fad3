from fractions import Fraction

import numpy as np
import sympy
from hypothesis import given
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import strategies as st

from stratkit.complex import SimplicialComplex, homology, sd
from stratkit.linalg import kernel, rank
from stratkit.poset import Poset, cone, ideals, is_isomorphic, join_poset, order_complex, product, validate_poset
from stratkit.ran import ran_poset
from stratkit.sheaf import cohomology, constant_sheaf, pullback_refinement
from stratkit.strat import face_stratification
from stratkit.unzip import unzip_once


@st.composite
def posets(draw, max_size=5):
    n = draw(st.integers(1, max_size))
    # a random DAG on 0..n-1 with edges i -> j for i < j, then closed
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    pairs = [(str(i), str(j)) for i, j in edges if i < j]
    return Poset.from_pairs([str(i) for i in range(n)], pairs, closure=True)


@st.composite
def complexes(draw, max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    verts = [str(i) for i in range(n)]
    facets = draw(st.lists(st.sets(st.sampled_from(verts), min_size=1, max_size=3), min_size=1, max_size=6))
    return SimplicialComplex.from_facets([sorted(f) for f in facets])


@st.composite
def int_matrices(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))


@given(posets())
def test_closure_gives_a_valid_poset(p):
    assert validate_poset(p).ok
    assert is_isomorphic(p, p.relabel(prefix="x")) is not None


@given(posets(4), posets(3))
def test_cone_of_join_is_product_of_cones(p, q):
    q = q.relabel(prefix="y")
    assert is_isomorphic(cone(join_poset(p, q)), product(cone(p), cone(q))) is not None


@given(posets())
def test_ideals_are_downward_closed(p):
    seen = list(ideals(p))
    assert len(seen) == len(set(seen))
    assert all(p.is_downward_closed(d) for d in seen)


@given(posets())
def test_order_complex_of_poset_with_top_is_acyclic(p):
    assert homology(order_complex(cone(p))).trimmed() == (1,)


@given(complexes())
def test_subdivision_keeps_homology(k):
    assert homology(sd(k)).trimmed() == homology(k).trimmed()
    assert sd(k).euler_characteristic() == k.euler_characteristic()


@given(complexes())
def test_constant_sheaf_cohomology_is_homology(k):
    f = constant_sheaf(face_stratification(k))
    assert cohomology(f).trimmed() == homology(k).trimmed()
    assert cohomology(pullback_refinement(f)).trimmed() == homology(k).trimmed()


@given(int_matrices())
def test_rank_and_kernel_against_sympy(m):
    rows = [{j: x for j, x in enumerate(row) if x} for row in m]
    ncols = len(m[0])
    r = sympy.Matrix(m).rank()
    assert rank(rows) == r
    ker = kernel(rows, ncols)
    assert len(ker) == ncols - r
    dense = np.array([[Fraction(x) for x in row] for row in m], dtype=object)
    for v in ker:
        vec = np.array([v.get(j, Fraction(0)) for j in range(ncols)], dtype=object)
        assert all(x == 0 for x in dense.dot(vec))


@given(int_matrices())
def test_f2_rank_against_sympy(m):
    rows = [{j: x for j, x in enumerate(row) if x % 2} for row in m]
    reduced = sympy.Matrix(m).applyfunc(lambda x: x % 2)
    dm = DomainMatrix.from_Matrix(reduced).convert_to(GF(2))
    assert rank(rows, "f2") == dm.rank()


@given(complexes(5))
def test_unzip_ledger_balances_on_vertex_strata(k):
    x = face_stratification(k)
    d = {p for p in x.poset.elements if "," not in p}
    if len(d) < len(x.poset):
        assert unzip_once(x, d).ledger.balanced


@given(posets(3), st.integers(1, 3))
def test_ran_relation_is_a_preorder(p, i):
    r = ran_poset(p, i)
    m = r.poset.leq
    assert m.diagonal().all()
    assert (((m.astype(int) @ m.astype(int)) > 0) <= m).all()
    if all(e in p.maximal() for e in p.elements):
        assert r.is_poset
