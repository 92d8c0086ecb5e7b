from itertools import permutations, product
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wordchar.partitions import (
    EnumerationBudgetError,
    PartialMatching,
    SetPartition,
    bell_number,
    completions,
    compose,
    enumerate_partial_matchings,
    enumerate_partitions,
    enumerate_star_partitions,
    inverse,
    iota,
    join,
    leq,
    meet,
    mobius,
    mobius_recursive,
    multiply_diagrams,
)

S = SetPartition.parse


def _partitions_by_insertion(m):
    """Independent listing: insert element i into an existing block or a new one."""
    out = [[]]
    for i in range(m):
        nxt = []
        for blocks in out:
            for j in range(len(blocks)):
                nxt.append([b + [i] if t == j else b for t, b in enumerate(blocks)])
            nxt.append(blocks + [[i]])
        out = nxt
    return {frozenset(frozenset(b) for b in blocks) for blocks in out}


def _as_sets(p):
    return frozenset(frozenset(b) for b in p.blocks)


PART4 = list(enumerate_partitions(4))
parts4 = st.sampled_from(PART4)


def test_enumeration_counts():
    assert [str(p) for p in enumerate_partitions(1)] == ["{{1}}"]
    assert len(list(enumerate_partitions(3))) == 5
    assert len(PART4) == 15
    assert [bell_number(m) for m in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("m", range(1, 7))
def test_enumeration_matches_insertion_oracle(m):
    listed = list(enumerate_partitions(m))
    assert len({p.rgs for p in listed}) == len(listed)
    assert {_as_sets(p) for p in listed} == _partitions_by_insertion(m)
    assert [p.rgs for p in listed] == sorted(p.rgs for p in listed)


def test_budget_error(monkeypatch):
    monkeypatch.setenv("WORDCHAR_BUDGET", "100")
    with pytest.raises(EnumerationBudgetError):
        list(enumerate_partitions(6))


def test_canonical_form():
    assert SetPartition.from_labels([7, 3, 7]) == S("{{1,3},{2}}")
    assert SetPartition.from_blocks([[2], [0, 1]]).rgs == (0, 0, 1)
    assert str(S("{{2},{1,3}}")) == "{{1,3},{2}}"
    with pytest.raises(ValueError):
        SetPartition((1, 0))
    with pytest.raises(ValueError):
        SetPartition((0, 2))


def test_lattice_examples():
    p = S("{{1,2},{3}}")
    assert meet(p, p) == p
    assert meet(p, S("{{1,3},{2}}")) == SetPartition.finest(3)
    assert meet(S("{{1,2,3}}"), p) == p
    assert join(p, S("{{2,3},{1}}")) == SetPartition.coarsest(3)
    assert all(leq(SetPartition.finest(4), q) for q in PART4)
    assert not leq(p, S("{{1,3},{2}}"))
    with pytest.raises(ValueError):
        meet(p, SetPartition.finest(4))


def test_mobius_examples():
    assert mobius(S("{{1,2},{3}}"), S("{{1,2},{3}}")) == 1
    assert mobius(SetPartition.finest(3), SetPartition.coarsest(3)) == 2
    assert mobius(SetPartition.finest(2), SetPartition.coarsest(2)) == -1
    with pytest.raises(ValueError):
        mobius(SetPartition.coarsest(3), SetPartition.finest(3))


@given(parts4, parts4, parts4)
def test_lattice_laws(a, b, c):
    assert meet(a, b) == meet(b, a)
    assert join(a, b) == join(b, a)
    assert meet(meet(a, b), c) == meet(a, meet(b, c))
    assert join(join(a, b), c) == join(a, join(b, c))
    assert meet(a, a) == a and join(a, a) == a
    assert meet(a, join(a, b)) == a
    assert join(a, meet(a, b)) == a
    assert leq(a, b) == (meet(a, b) == a)


@given(parts4, parts4)
def test_meet_is_common_relation(a, b):
    m = meet(a, b)
    for i in range(4):
        for j in range(4):
            assert m.same_block(i, j) == (a.same_block(i, j) and b.same_block(i, j))


@pytest.mark.parametrize("m", range(1, 6))
def test_mobius_consistency(m):
    parts = list(enumerate_partitions(m))
    for p in parts:
        for q in parts:
            if not leq(p, q):
                continue
            total = sum(mobius(p, r) for r in parts if leq(p, r) and leq(r, q))
            assert total == (1 if p == q else 0)
            assert mobius(p, q) == mobius_recursive(p, q)


def _is_star(p, k):
    if any(len(b) == 1 for b in p.blocks):
        return False
    return all(len({e // k for e in b}) == len(b) for b in p.blocks)


def test_star_examples():
    assert [str(p) for p in enumerate_star_partitions(2, 1)] == ["{{1,2}}"]
    assert len(list(enumerate_star_partitions(2, 2))) == 2
    assert [str(p) for p in enumerate_star_partitions(3, 1)] == ["{{1,2,3}}"]
    assert list(enumerate_star_partitions(1, 3)) == []


@pytest.mark.parametrize("rows,k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (5, 1), (6, 1)])
def test_star_partitions_are_the_filter(rows, k):
    expected = [p for p in enumerate_partitions(rows * k) if _is_star(p, k)]
    assert list(enumerate_star_partitions(rows, k)) == expected


def test_partial_matching_counts():
    for k, count in ((1, 2), (2, 7), (3, 34), (4, 209)):
        assert len(enumerate_partial_matchings(k)) == count
        assert count == sum(comb(k, m) ** 2 * factorial(m) for m in range(k + 1))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_submatchings_are_below_permutations(k):
    perms = [iota(t).to_partition() for t in permutations(range(k))]
    below = {p for p in enumerate_partitions(2 * k) if any(leq(p, q) for q in perms)}
    assert {pm.to_partition() for pm in enumerate_partial_matchings(k)} == below


def test_partial_matching_round_trip():
    for pm in enumerate_partial_matchings(3):
        assert PartialMatching.from_partition(pm.to_partition()) == pm
        assert pm.deficiency == 3 - len(pm.pairs)
        assert pm.num_blocks == 6 - len(pm.pairs)
    with pytest.raises(ValueError):
        PartialMatching.from_partition(S("{{1,2},{3},{4}}"))


def test_completion_examples():
    assert completions(PartialMatching(2, ((0, 0), (1, 1)))) == [(0, 1)]
    assert sorted(completions(PartialMatching(2, ()))) == [(0, 1), (1, 0)]
    assert len(completions(PartialMatching(3, ((0, 2),)))) == 2


@pytest.mark.parametrize("k", [1, 2, 3])
def test_completions_are_coarsenings(k):
    for pm in enumerate_partial_matchings(k):
        expected = {t for t in permutations(range(k)) if leq(pm.to_partition(), iota(t).to_partition())}
        got = completions(pm)
        assert set(got) == expected
        assert len(got) == factorial(pm.deficiency)


def test_diagram_examples():
    e = iota((0, 1)).to_partition()
    assert multiply_diagrams(e, e) == (e, 0)
    single = SetPartition.finest(2)
    assert multiply_diagrams(single, single) == (single, 1)


def test_permutation_diagrams_compose():
    for s in permutations(range(3)):
        for t in permutations(range(3)):
            prod, gamma = multiply_diagrams(iota(s).to_partition(), iota(t).to_partition())
            assert gamma == 0
            assert prod == iota(compose(s, t)).to_partition()


@pytest.mark.parametrize("k", [1, 2])
def test_diagram_associativity(k):
    parts = list(enumerate_partitions(2 * k))
    for a, b, c in product(parts, repeat=3):
        ab, g1 = multiply_diagrams(a, b)
        left, g2 = multiply_diagrams(ab, c)
        bc, h1 = multiply_diagrams(b, c)
        right, h2 = multiply_diagrams(a, bc)
        assert left == right
        assert g1 + g2 == h1 + h2


def test_permutation_helpers():
    s, t = (1, 2, 0), (0, 2, 1)
    assert compose(s, t) == tuple(s[t[i]] for i in range(3))
    assert compose(s, inverse(s)) == (0, 1, 2)
