from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordchar.sampling import (
    BLOCK,
    cycle_type,
    evaluate_word,
    exhaustive_expected_character,
    mc_expected_character,
    random_permutation,
    random_permutations,
    short_cycle_counts,
    stable_characters,
)
from wordchar.symmetric import YoungDiagram, character, partitions_of, stable_diagram
from wordchar.words import free_reduce, parse_word

Y = YoungDiagram


def _compose(s, t):
    return np.array([s[t[i]] for i in range(len(t))])


def test_random_permutation_basics():
    assert random_permutation(1, 5, seed=3).tolist() == [0]
    a = random_permutation(10, 17, seed=42)
    assert sorted(a.tolist()) == list(range(10))
    assert (a == random_permutation(10, 17, seed=42)).all()
    assert not (random_permutations(10, 42, 0, 8) == random_permutations(10, 42, 0, 8, stream=1)).all()


def test_stream_is_independent_of_batching():
    whole = random_permutations(12, 7, 0, 3 * BLOCK + 5)
    parts = np.concatenate([random_permutations(12, 7, s, c) for s, c in
                            ((0, 100), (100, BLOCK), (100 + BLOCK, 2 * BLOCK - 95))])
    assert (whole == parts).all()
    assert (random_permutation(12, BLOCK + 3, seed=7) == whole[BLOCK + 3]).all()


def test_fixed_point_mean():
    perms = random_permutations(10, 2024, 0, 100_000)
    fix = (perms == np.arange(10)).sum(axis=1)
    assert abs(fix.mean() - 1) < 0.02


def test_uniformity_on_s3():
    perms = random_permutations(3, 11, 0, 60_000)
    _, counts = np.unique(perms, axis=0, return_counts=True)
    assert len(counts) == 6
    expected = 10_000
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < 25  # 5 degrees of freedom, far beyond the 0.999 quantile 20.5


def test_evaluate_word_examples():
    s = random_permutation(6, 0, seed=1)
    t = random_permutation(6, 0, seed=1, stream=1)
    assert (evaluate_word("a", [s, t]) == s).all()
    assert (evaluate_word("aA", [s]) == np.arange(6)).all()
    assert (evaluate_word("ab", [s, t]) == _compose(s, t)).all()
    a = np.array([1, 0, 2, 3])
    b = np.array([0, 1, 3, 2])
    assert (evaluate_word("abAB", [a, b]) == np.arange(4)).all()
    with pytest.raises(ValueError):
        evaluate_word("abc", [a, b])


def test_evaluate_word_batches():
    P = random_permutations(7, 3, 0, 50)
    Q = random_permutations(7, 3, 0, 50, stream=1)
    batch = evaluate_word("abAB", [P, Q])
    for i in range(50):
        assert (batch[i] == evaluate_word("abAB", [P[i], Q[i]])).all()


letters = st.lists(st.tuples(st.integers(1, 2), st.sampled_from([1, -1])), max_size=12)


@settings(max_examples=100)
@given(letters, st.integers(0, 10**6))
def test_free_reduction_preserves_the_map(w, pos):
    perms = [random_permutation(8, pos, seed=5, stream=i) for i in range(2)]
    assert (evaluate_word(w, perms) == evaluate_word(free_reduce(w), perms)).all()


def test_cycle_type_examples():
    assert cycle_type(range(5)) == (1, 1, 1, 1, 1)
    assert cycle_type([1, 2, 3, 4, 0]) == (5,)
    assert cycle_type([1, 0, 2, 3]) == (2, 1, 1)


@given(st.permutations(list(range(9))))
def test_short_cycle_counts(p):
    ct = cycle_type(p)
    counts = short_cycle_counts(np.array(p), 4)[0]
    assert counts.tolist() == [ct.count(j) for j in range(1, 5)]


@settings(max_examples=150)
@given(st.integers(2, 9).flatmap(lambda v: st.tuples(st.permutations(list(range(v))), st.just(v))),
       st.sampled_from([s for k in (1, 2, 3) for s in partitions_of(k)]))
def test_stable_character_matches_full_cycle_type(case, shape):
    p, v = case
    if v < shape.k + shape.first_row:
        return
    got = stable_characters(shape, np.array(p))[0]
    assert got == character(stable_diagram(shape, v), cycle_type(p))


def test_exhaustive_examples():
    assert exhaustive_expected_character("abAB", Y((1,)), 4) == Fraction(1, 3)
    assert exhaustive_expected_character("abAB", Y((2,)), 5) == Fraction(1, 5)
    assert exhaustive_expected_character("aa", Y((1,)), 4) == 1
    assert exhaustive_expected_character("a", Y((1,)), 5) == 0
    with pytest.raises(ValueError):
        exhaustive_expected_character("abc", Y((1,)), 6)


def test_mc_examples():
    rep = mc_expected_character("abAB", Y((1,)), 50, 200_000, seed=20240611)
    assert abs(rep.mean - 1 / 49) <= 4 * rep.stderr
    rep = mc_expected_character("aa", Y((1,)), 30, 50_000, seed=3)
    assert abs(rep.mean - 1) <= 4 * rep.stderr
    rep = mc_expected_character("a", Y((1,)), 30, 50_000, seed=4)
    assert abs(rep.mean) <= 4 * rep.stderr
    assert rep.samples == 50_000 and rep.stderr >= 0


def test_mc_is_deterministic_and_batch_free():
    a = mc_expected_character("abaB", Y((2,)), 20, 5000, seed=9, batch=512)
    b = mc_expected_character("abaB", Y((2,)), 20, 5000, seed=9, batch=5000)
    assert a.samples == b.samples
    assert a.mean == pytest.approx(b.mean, abs=1e-12)
    assert a.stderr == pytest.approx(b.stderr, rel=1e-9)


@pytest.mark.parametrize("factor", [2, 4])
def test_mc_stderr_rate(factor):
    ratios = []
    for seed in range(6):
        small = mc_expected_character("abAB", Y((1,)), 30, 20_000, seed=100 + seed)
        large = mc_expected_character("abAB", Y((1,)), 30, factor * 20_000, seed=200 + seed)
        ratios.append(large.stderr / small.stderr)
    target = 1 / np.sqrt(factor)
    assert abs(np.mean(ratios) - target) <= 0.2 * target


def test_mc_rejects_small_n():
    with pytest.raises(ValueError):
        mc_expected_character("abAB", Y((2,)), 4, 10, seed=0)
