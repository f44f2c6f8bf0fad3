import pytest
from sympy.functions.combinatorial.numbers import bell

from stratkit.poset import Poset, all_posets, is_isomorphic
from stratkit.ran import (
    monotone_surjections,
    partitions_poset,
    pullback_map,
    ran_poset,
    set_partitions,
    wreath_poset,
)
from stratkit.report import ValidationError

STAR = Poset(["*"], [[True]])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bell_numbers(n):
    assert len(partitions_poset([str(i) for i in range(n)]).poset) == bell(n)


def test_partition_examples():
    assert len(partitions_poset(["a"]).poset) == 1
    two = partitions_poset(["a", "b"])
    assert is_isomorphic(two.poset, Poset.chain(1))
    three = partitions_poset(["0", "1", "2"])
    assert three.poset.minimal() == [three.minimum] == ["0,1,2"]
    assert three.poset.maximal() == [three.maximum] == ["0|1|2"]
    middles = [e for e in three.poset.elements if e not in (three.minimum, three.maximum)]
    assert len(middles) == 3
    for a in middles:
        for b in middles:
            assert a == b or not three.poset.le(a, b)
    with pytest.raises(ValidationError):
        partitions_poset([])


def test_set_partitions_are_partitions():
    for part in set_partitions(list("abcd")):
        blocks = list(part)
        assert sorted(v for b in blocks for v in b) == list("abcd")


def test_wreath_examples():
    w = wreath_poset(["0", "1"], Poset.chain(1))
    assert len(w.poset) == 6 and w.projections_monotone
    assert is_isomorphic(wreath_poset(["0", "1", "2"], STAR).poset, partitions_poset(["0", "1", "2"]).poset)
    p = Poset.from_pairs(["a", "b", "c"], [("a", "c")])
    assert is_isomorphic(wreath_poset(["0"], p).poset, p)


def test_wreath_projections_monotone_small():
    for p in all_posets(2):
        for n in (1, 2, 3):
            assert wreath_poset([str(i) for i in range(n)], p).projections_monotone


@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_ran_over_point_is_chain(i):
    r = ran_poset(STAR, i)
    assert r.is_poset
    assert is_isomorphic(r.poset, Poset.chain(i - 1))
    assert r.poset.maximal() == [f"*={i}"]


def test_ran_over_chain():
    r = ran_poset(Poset.chain(1), 2)
    assert sorted(r.counts.values()) == [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert not r.is_poset
    assert r.verdict.kinds() == {"antisymmetry"}
    assert r.poset.le("0=1,1=0", "0=2,1=0") and r.poset.le("0=2,1=0", "0=1,1=0")


def test_ran_bound_must_be_positive():
    with pytest.raises(ValidationError):
        ran_poset(STAR, 0)


def test_ran_relation_is_always_transitive():
    for n in (1, 2, 3):
        for p in all_posets(n):
            for i in (1, 2, 3):
                assert "transitivity" not in ran_poset(p, i).verdict.kinds()


def test_partition_pullback_monotone():
    for m in range(1, 5):
        for n in range(1, m + 1):
            for f in monotone_surjections(m, n):
                assert sorted(set(f.values()), key=int) == [str(j) for j in range(n)]
                assert pullback_map(f)[3] == []
