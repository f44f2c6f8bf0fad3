import random
from fractions import Fraction

import pytest
import sympy

from stratkit import corpus
from stratkit.complex import disjoint_union, homology
from stratkit.report import ValidationError
from stratkit.sheaf import (
    ChainFunctor,
    Sheaf,
    as_matrix,
    circle_local_system,
    coarse_equivalence_check,
    cohomology,
    constant_sheaf,
    eye,
    global_sections,
    is_locally_constant,
    pullback_refinement,
    random_chain_functor,
    validate_sheaf,
)
from stratkit.strat import face_stratification, standard_simplex_stratification


def dense_s1_cohomology(monodromy):
    """Oracle: the 6x6 Cech-style complex of a rank-one system on a triangle.

    C^0 = vertices + edges (stalk at the top of each 0-chain), C^1 = the six
    vertex-edge pairs; d(x)_{v<e} = x_e - m(v,e) x_v.
    """
    verts = ["a", "b", "c"]
    edges = [("a", "b"), ("b", "c"), ("a", "c")]
    cells = verts + edges
    pairs = [(v, e) for e in edges for v in e]
    d = sympy.zeros(len(pairs), len(cells))
    for r, (v, e) in enumerate(pairs):
        m = monodromy if (v, e) == ("a", ("a", "c")) else 1
        d[r, cells.index(e)] += 1
        d[r, cells.index(v)] -= m
    rank = d.rank()
    return len(cells) - rank, len(pairs) - rank


@pytest.mark.parametrize("m,expected", [(1, (1, 1)), (-1, (0, 0))])
def test_s1_local_systems(m, expected):
    f = circle_local_system(m)
    assert dense_s1_cohomology(m) == expected
    assert cohomology(f).dims == expected
    assert global_sections(f).dim == expected[0]
    assert is_locally_constant(f)


def test_constant_sheaf_examples():
    zero = constant_sheaf(face_stratification(corpus.boundary(2)), 0)
    assert set(cohomology(zero).dims) == {0}
    assert cohomology(constant_sheaf(face_stratification(corpus.boundary(2)))).dims == (1, 1)
    assert cohomology(constant_sheaf(face_stratification(corpus.simplex(2)))).trimmed() == (1,)
    with pytest.raises(ValueError):
        constant_sheaf(face_stratification(corpus.simplex(0)), -1)


def test_global_sections_of_two_components():
    k = disjoint_union(corpus.simplex(1), corpus.simplex(1).relabel(prefix="r"))
    gs = global_sections(constant_sheaf(face_stratification(k)))
    assert gs.dim == 2
    for fam in gs.basis:
        assert fam["{0}"] == fam["{0,1}"] == fam["{1}"]


def test_non_commuting_diamond_is_reported():
    x = face_stratification(corpus.simplex(2))
    base = x.complex.face_poset
    maps = {c: eye(1) for c in base.covers()}
    maps[("{0}", "{0,1}")] = as_matrix([[2]], (1, 1))
    f = Sheaf(x, {e: 1 for e in base.elements}, maps, check=False)
    rep = validate_sheaf(f)
    assert rep.kinds() == {"non-commuting-diamond"}
    a, _, _, b = rep.violations[0].witness
    assert a == "{0}" and b == "{0,1,2}"
    with pytest.raises(ValidationError):
        Sheaf(x, {e: 1 for e in base.elements}, maps)


def test_shape_mismatch():
    x = face_stratification(corpus.simplex(1))
    dims = {"{0}": 1, "{1}": 1, "{0,1}": 2}
    with pytest.raises(ValidationError, match="shape"):
        Sheaf(x, dims, {("{0}", "{0,1}"): [[1]], ("{1}", "{0,1}"): [[1], [0]]})


def test_tree_hasse_diagram_is_path_independent():
    x = face_stratification(corpus.simplex(1))
    maps = {("{0}", "{0,1}"): [[3]], ("{1}", "{0,1}"): [[Fraction(1, 2)]]}
    f = Sheaf(x, {e: 1 for e in x.complex.face_poset.elements}, maps)
    assert validate_sheaf(f).ok and cohomology(f).dims == (1, 0)


def test_zero_map_is_not_locally_constant():
    x = standard_simplex_stratification(1)
    maps = {("{0}", "{0,1}"): [[0]], ("{1}", "{0,1}"): [[1]]}
    f = Sheaf(x, {e: 1 for e in x.complex.face_poset.elements}, maps)
    assert validate_sheaf(f).ok
    assert not is_locally_constant(f)


def test_weak_edge_must_be_invertible():
    x = standard_simplex_stratification(1)
    maps = {("{0}", "{0,1}"): [[1]], ("{1}", "{0,1}"): [[0]]}
    f = Sheaf(x, {e: 1 for e in x.complex.face_poset.elements}, maps, check=False)
    assert validate_sheaf(f).kinds() == {"weak-edge-not-invertible"}


@pytest.mark.parametrize("name", sorted(corpus.STRATIFIED))
def test_constant_sheaf_matches_homology(name):
    x = corpus.STRATIFIED[name]()
    h = cohomology(constant_sheaf(x))
    assert h.trimmed() == homology(x.complex).trimmed()
    assert h.dims[0] == global_sections(constant_sheaf(x)).dim


@pytest.mark.parametrize("name", sorted(corpus.SHEAVES))
def test_pullback_keeps_cohomology(name):
    f = corpus.SHEAVES[name]()
    g = pullback_refinement(f)
    assert cohomology(g).trimmed() == cohomology(f).trimmed()
    assert is_locally_constant(g) == is_locally_constant(f)
    assert validate_sheaf(g).ok


def test_pullback_of_constant_is_constant():
    f = constant_sheaf(face_stratification(corpus.boundary(2)))
    g = pullback_refinement(f)
    assert set(g.dims.values()) == {1}
    assert all(m[0, 0] == 1 for m in g.maps.values())


def test_pullback_base_mismatch():
    f = constant_sheaf(face_stratification(corpus.boundary(2)))
    with pytest.raises(ValidationError):
        pullback_refinement(f, corpus.simplex(1))


def test_double_pullback_on_edge():
    f = Sheaf(
        standard_simplex_stratification(1),
        {"{0}": 1, "{1}": 1, "{0,1}": 1},
        {("{0}", "{0,1}"): [[5]], ("{1}", "{0,1}"): [[1]]},
    )
    twice = pullback_refinement(pullback_refinement(f))
    assert cohomology(twice).trimmed() == cohomology(f).trimmed()
    # every composite in the double pullback is a composite of f
    for (s, t), m in twice.maps.items():
        assert m[0, 0] in (1, 5)


@pytest.mark.parametrize(
    "g,expected",
    [
        (ChainFunctor((1, 1), (as_matrix([[0]], (1, 1)),)), (1,)),
        (ChainFunctor((1, 1, 1), (eye(1), eye(1))), (1,)),
        # sections over [1] are the graph of the map, a copy of the source
        (ChainFunctor((2, 1), (as_matrix([[1, 0]], (1, 2)),)), (2,)),
    ],
)
def test_coarse_equivalence_examples(g, expected):
    rep = coarse_equivalence_check(g)
    assert rep.ok
    assert rep.chain_side.trimmed() == rep.face_side.trimmed() == expected


def test_coarse_equivalence_random():
    rng = random.Random(7)
    for n in range(4):
        for _ in range(3):
            assert coarse_equivalence_check(random_chain_functor(n, rng)).ok


def test_json_roundtrip():
    f = corpus.SHEAVES["s1-monodromy-minus"]()
    doc = f.to_json()
    assert ["{a}", "{a,c}", [["-1"]]] in doc["maps"]
    g = Sheaf.from_json(doc)
    assert cohomology(g).dims == (0, 0)
