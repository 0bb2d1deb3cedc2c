import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graevmetric.errors import BudgetExceeded, NotInG, NotXPosition, PositionOutOfRange
from graevmetric.matches import (
    Match,
    count_trivial_words_direct,
    enumerate_trivial_words,
    find_match,
    validate_match,
)
from graevmetric.words import GElem, SWord, Word, XGen, project

from conftest import random_sword_in_g

W = Word.parse
E = GElem(Word.identity())


def sw(*letters, g_rank=2):
    return SWord(letters, g_rank)


def test_validate_examples():
    assert validate_match(sw(XGen(3), E, XGen(3, -1)), Match({1: 3, 3: 1}))
    assert not validate_match(sw(XGen(3), GElem(W("x1")), XGen(3, -1)), Match({1: 3, 3: 1}))
    w = sw(XGen(3), XGen(4), XGen(4, -1), XGen(3, -1))
    assert validate_match(w, Match({2: 3, 3: 2, 1: 4, 4: 1}))


def test_validate_rejects_bad_shapes():
    w = sw(XGen(3), E, XGen(3, -1))
    assert not validate_match(w, Match({1: 3}))
    assert not validate_match(w, Match({}))
    with pytest.raises(PositionOutOfRange):
        validate_match(w, Match({1: 4, 4: 1}))
    with pytest.raises(NotXPosition):
        validate_match(w, Match({1: 2, 2: 1}))
    # same letters, not inverse
    assert not validate_match(sw(XGen(3), XGen(3)), Match({1: 2, 2: 1}))


def test_find_match_examples():
    assert find_match(sw(GElem(W("x1")))) == Match({})
    assert find_match(sw(XGen(3), E, XGen(3, -1))) == Match({1: 3, 3: 1})
    w = sw(XGen(3), XGen(3, -1), XGen(3), XGen(3, -1))
    m = find_match(w)
    assert m.pairs() == [(1, 2), (3, 4)]
    assert validate_match(w, m)
    assert str(m) == "(1,2) (3,4)"


def test_find_match_outside_g():
    with pytest.raises(NotInG):
        find_match(sw(XGen(3), GElem(W("x1")), XGen(3, -1)))


def test_find_match_spans_through_g_letters():
    # x3 x1 x3^-1 [x1^-1] cancels only with conjugating letters in between
    w = sw(XGen(3), GElem(W("x1")), XGen(4), XGen(4, -1), GElem(W("x1^-1")), XGen(3, -1))
    m = find_match(w)
    assert validate_match(w, m)
    assert m.pairs() == [(1, 6), (3, 4)]


def test_find_match_randomized():
    rng = random.Random(11)
    for _ in range(300):
        w = random_sword_in_g(rng)
        assert project(w).rank <= 2
        m = find_match(w)
        assert validate_match(w, m)
        for i, j in m.pairs():
            assert w[i - 1] == w[j - 1].inverse()


def test_enumerate_examples():
    assert list(enumerate_trivial_words([E], 2, 1)) == [SWord((E, E), 1)]
    got = set(enumerate_trivial_words([XGen(2), XGen(2, -1)], 2, 1))
    assert got == {SWord((XGen(2), XGen(2, -1)), 1), SWord((XGen(2, -1), XGen(2)), 1)}
    a, ai = GElem(W("x1")), GElem(W("x1^-1"))
    got = list(enumerate_trivial_words([a, ai, E], 2, 1))
    assert got == [SWord((a, ai), 1), SWord((ai, a), 1), SWord((E, E), 1)]


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_trivial_words([E, XGen(2), XGen(2, -1)], 20, 1, cap=1000))


alphabet_pool = [E, GElem(W("x1")), GElem(W("x1^-1")), XGen(2), XGen(2, -1), GElem(W("x1 x1"))]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(alphabet_pool), min_size=1, max_size=4, unique=True), st.integers(0, 5))
def test_enumerate_matches_direct_filter(alphabet, n):
    got = list(enumerate_trivial_words(alphabet, n, 1))
    assert len(got) == len(set(got)) == count_trivial_words_direct(alphabet, n)
    assert all(project(u).is_identity() for u in got)
