from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pagepredict.markov import count_level1, count_level2
from pagepredict.vague import VagueValue, level1_values, level2_values, prune, vague_level1, vague_level2, vague_score

from conftest import A, B, C, D0_PAGES
from oracles import vague1, vague2

sessions_st = st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=8), min_size=1, max_size=20)


@pytest.mark.parametrize(
    "page, t, f, h",
    [(A, 1, 0, 0), (B, F(1, 3), F(1, 3), F(1, 3)), (C, 0, F(1, 3), F(2, 3))],
)
def test_level1_d0(page, t, f, h):
    v = vague_level1(count_level1(D0_PAGES), page)
    assert (v.t, v.f, v.h) == (t, f, h)
    assert vague1(D0_PAGES, page) == (t, f, h)


@pytest.mark.parametrize(
    "a, b, t, f, h",
    [
        (A, B, F(2, 3), F(1, 3), 0),
        (B, C, F(1, 2), 0, F(1, 2)),
        (A, C, F(1, 3), F(2, 3), 0),
    ],
)
def test_level2_d0(a, b, t, f, h):
    v = vague_level2(count_level1(D0_PAGES), count_level2(D0_PAGES), a, b)
    assert (v.t, v.f, v.h) == (t, f, h)
    assert vague2(D0_PAGES, a, b) == (t, f, h)


def test_score_examples():
    assert vague_score(VagueValue(0.6, 0.2)) == pytest.approx(0.7)
    assert vague_score(VagueValue(F(3, 5), F(1, 5))) == F(7, 10)
    assert vague_score(VagueValue(1, 0)) == 1
    assert vague_score(VagueValue(0, 1)) == 0


def test_invalid_value():
    with pytest.raises(ValueError):
        VagueValue(F(2, 3), F(1, 2))
    with pytest.raises(ValueError):
        VagueValue(-0.1, 0.5)


def test_prune_d0():
    values = level1_values(count_level1(D0_PAGES))
    assert [vague_score(values[p]) for p in (A, B, C)] == [1, F(1, 2), F(1, 3)]
    assert prune(values, 0.4) == {A, B}
    assert prune(values, 0) == {A, B, C}
    assert prune(values, 1) == {A}


def test_prune_boundary_keeps_equal_score():
    values = {"x": VagueValue(F(1, 5), F(2, 5))}  # score exactly 2/5
    assert prune(values, 0.4) == {"x"}
    assert prune(values, 0.41) == set()


def test_prune_rejects_bad_alpha():
    with pytest.raises(ValueError):
        prune({}, 1.5)


@given(sessions_st)
def test_memberships_partition_and_match_oracle(sessions):
    l1 = count_level1(sessions)
    pairs = count_level2(sessions)
    for p, v in level1_values(l1).items():
        assert v.t + v.f + v.h == 1
        assert min(v.t, v.f, v.h) >= 0
        assert (v.t, v.f, v.h) == vague1(sessions, p)
    for (a, b), v in level2_values(l1, pairs).items():
        assert v.t + v.f + v.h == 1
        assert min(v.t, v.f, v.h) >= 0
        assert (v.t, v.f, v.h) == vague2(sessions, a, b)


@given(sessions_st, st.integers(0, 10), st.integers(0, 10))
def test_monotone_pruning(sessions, i, j):
    lo, hi = sorted((F(i, 10), F(j, 10)))
    l1 = count_level1(sessions)
    v1, v2 = level1_values(l1), level2_values(l1, count_level2(sessions))
    assert prune(v1, hi) <= prune(v1, lo)
    assert prune(v2, hi) <= prune(v2, lo)


vague_st = st.tuples(st.fractions(0, 1), st.fractions(0, 1)).filter(lambda tf: tf[0] + tf[1] <= 1)


@given(vague_st, st.fractions(0, 1))
def test_score_monotone_in_t_antitone_in_f(tf, d):
    t, f = tf
    base = vague_score(VagueValue(t, f))
    assert 0 <= base <= 1
    if t + d + f <= 1:
        assert vague_score(VagueValue(t + d, f)) >= base
        assert vague_score(VagueValue(t, f + d)) <= base
