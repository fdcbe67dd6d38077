from math import gcd

import pytest
from hypothesis import given, strategies as st

from markov_cluster.farey import (
    INF, ONE, ROOT, ZERO, Frac, NotInterior, NotReduced, children, det2,
    fractions_up_to, mediant, parity, parity_index, path_to, triple_of, walk,
)
from markov_cluster.poset import KParams

F = Frac.parse


@st.composite
def interior(draw):
    q = draw(st.integers(1, 40))
    p = draw(st.integers(1, 40))
    g = gcd(p, q)
    return Frac(p // g, q // g)


def test_parse_and_errors():
    assert F("2/3") == Frac(2, 3)
    assert F("1/0") == INF
    assert str(F("3/5")) == "3/5"
    with pytest.raises(NotReduced):
        F("2/4")
    with pytest.raises(ValueError):
        F("0/0")


def test_det2_neighbours():
    assert det2(F("1/2"), F("2/3")) == -1


def test_parity_rule():
    k = KParams(1, 2, 3)
    assert parity(F("1/1"), k) == 1
    assert parity(F("1/0"), k) == 2
    assert parity(F("2/3"), k) == 3
    assert parity(F("0/1"), k) == 3


def test_triples_from_the_tree():
    assert tuple(triple_of(F("2/3"))) == (F("1/2"), F("2/3"), F("1/1"))
    assert tuple(triple_of(F("1/1"))) == (ZERO, ONE, INF)
    assert tuple(triple_of(F("3/5"))) == (F("1/2"), F("3/5"), F("2/3"))
    with pytest.raises(NotInterior):
        triple_of(INF)


def test_children_examples():
    l, r = children(ROOT)
    assert tuple(l) == (ZERO, F("1/2"), ONE)
    assert tuple(r) == (ONE, F("2/1"), INF)
    l, r = children(triple_of(F("2/3")))
    assert tuple(l) == (F("1/2"), F("3/5"), F("2/3"))
    assert tuple(r) == (F("2/3"), F("3/4"), ONE)


def test_walk_generation_sizes():
    words = [w for w, _ in walk(4)]
    assert len(words) == 2 ** 5 - 1
    assert len(set(words)) == len(words)


def test_fractions_up_to():
    fr = fractions_up_to(5)
    assert all(f.p + f.q <= 5 and f.q > 0 for f in fr)
    assert ZERO in fr and F("1/4") in fr and F("3/2") in fr


@given(interior())
def test_path_roundtrip(f):
    t = triple_of(f)
    assert t.middle == f
    assert t.is_valid()
    assert mediant(t.left, t.right) == f
    assert len(path_to(f)) <= f.p + f.q


@given(st.integers(0, 6))
def test_walk_triples_are_valid(depth):
    for w, t in walk(depth):
        assert t.is_valid()
        assert len(w) <= depth


@given(interior())
def test_parity_index_matches_residues(f):
    i = parity_index(f)
    expect = {(1, 1): 1, (1, 0): 2, (0, 1): 3}[(f.p % 2, f.q % 2)]
    assert i == expect
