import pytest

from stratkit import corpus
from stratkit.complex import SimplicialComplex, disjoint_union, sd, subdivide
from stratkit.exitpath import (
    check_weak,
    classifying_space_check,
    enter_category,
    is_groupoid,
    refinement_functor,
)
from stratkit.strat import (
    StratifiedComplex,
    face_stratification,
    single_stratum,
    standard_simplex_stratification,
)
from stratkit.poset import Poset


def test_face_stratification_has_no_weak_arrows():
    assert enter_category(face_stratification(corpus.boundary(3))).weak == frozenset()


def test_standard_edge_weak_arrow():
    rc = enter_category(standard_simplex_stratification(1))
    assert rc.weak == frozenset({("{1}", "{0,1}")})


def test_single_stratum_weak_is_everything():
    k = corpus.simplex(2)
    rc = enter_category(single_stratum(k))
    strict = {(a, b) for a in rc.base.elements for b in rc.base.up(a) if a != b}
    assert rc.weak == strict


@pytest.mark.parametrize("name", sorted(corpus.STRATIFIED))
def test_weak_arrows_compose_and_cancel(name):
    assert check_weak(enter_category(corpus.STRATIFIED[name]())).ok


def test_refinement_functor():
    r = refinement_functor(corpus.simplex(1))
    assert r.monotone
    assert r.mapping["{{0},{0,1}}"] == "{0,1}"
    assert sorted(len(v) for v in r.fibers().values()) == [1, 1, 3]


def test_refinement_functor_composes_with_second_subdivision():
    k = corpus.simplex(1)
    r1 = refinement_functor(k)
    r2 = refinement_functor(sd(k))
    _, carrier1 = subdivide(k)
    sd2 = sd(k, 2)
    for chain in sd2.simplices:
        # the top of the top of a chain of chains, computed in one step
        top_chain = sd(k).simplex_of[chain[-1]]
        assert r1.mapping[r2.mapping[sd2.id_of[chain]]] == carrier1[top_chain]


@pytest.mark.parametrize(
    "name,field,expected",
    [("boundary2", "q", (1, 1)), ("rp2", "f2", (1, 1, 1)), ("point", "q", (1,))],
)
def test_classifying_space_examples(name, field, expected):
    cs = classifying_space_check(face_stratification(corpus.COMPLEXES[name]()), field)
    assert cs.ok and cs.betti_space == expected


def test_is_groupoid_examples():
    assert is_groupoid(single_stratum(corpus.COMPLEXES["torus"]()))[0]
    ok, witness = is_groupoid(standard_simplex_stratification(1))
    assert not ok and witness == ("{0}", "{0,1}")
    a = SimplicialComplex.from_facets([["a", "b"]])
    b = SimplicialComplex.from_facets([["c", "d"]])
    k = disjoint_union(a, b)
    assign = {s: ("A" if s[0] in "ab" else "B") for s in k.simplices}
    x = StratifiedComplex(k, Poset.antichain(["A", "B"]), assign)
    assert is_groupoid(x)[0]


@pytest.mark.parametrize("name", sorted(corpus.COMPLEXES))
def test_face_stratification_groupoid_iff_discrete(name):
    k = corpus.COMPLEXES[name]()
    assert is_groupoid(face_stratification(k))[0] == (k.dim <= 0)
