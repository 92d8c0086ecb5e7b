from math import perm, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wordchar.regress import DENSE_CASES
from wordchar.schreier import (
    TupleSpace,
    connectivity,
    dense_report,
    dense_spectrum,
    random_schreier_graph,
    schreier_graph,
    spectral_gap,
)

CYCLE3 = [[1, 2, 0]]


def test_tuple_space_examples():
    space = TupleSpace(5, 1)
    assert [int(space.rank([i])) for i in range(5)] == list(range(5))
    pairs = TupleSpace(3, 2)
    assert [tuple(t) for t in pairs.unrank(np.arange(6))] == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    assert pairs.size == 6
    with pytest.raises(ValueError):
        pairs.rank([1, 1])
    with pytest.raises(ValueError):
        pairs.unrank(6)
    with pytest.raises(ValueError):
        TupleSpace(3, 4)


def test_round_trip_random_tuples():
    space = TupleSpace(50, 3)
    rng = np.random.default_rng(0)
    tuples = np.array([rng.choice(50, size=3, replace=False) for _ in range(10_000)])
    ranks = space.rank(tuples)
    assert ((0 <= ranks) & (ranks < space.size)).all()
    assert (space.unrank(ranks) == tuples).all()


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_rank_is_a_lexicographic_bijection(nk):
    n, k = nk
    space = TupleSpace(n, k)
    tuples = space.unrank(np.arange(space.size))
    assert space.size == perm(n, k)
    assert (space.rank(tuples) == np.arange(space.size)).all()
    assert [tuple(t) for t in tuples] == sorted(tuple(t) for t in tuples)
    assert all(len(set(t)) == k for t in tuples.tolist())


def test_three_cycle_graph():
    op = schreier_graph(3, 1, CYCLE3)
    assert np.allclose(np.sort(dense_spectrum(op)), [-1, -1, 2])
    rep = spectral_gap(op)
    assert rep.lambda_nontrivial == pytest.approx(1.0, abs=1e-8)
    assert connectivity(op).connected


def test_regularity_and_identity_generators():
    op = random_schreier_graph(9, 2, 3, seed=1)
    assert np.allclose(op.matvec(np.ones(op.size)), 2 * op.r)
    ident = schreier_graph(5, 2, [list(range(5))] * 2)
    assert np.array_equal(ident.dense(), 4 * np.eye(ident.size))
    conn = connectivity(ident)
    assert not conn.connected and conn.components == ident.size


def test_single_cycle_connects_points():
    assert connectivity(schreier_graph(7, 1, [[1, 2, 3, 4, 5, 6, 0]])).connected


def test_random_pairs_connect_on_pinned_seeds():
    for seed in range(5):
        assert connectivity(random_schreier_graph(30, 2, 2, seed)).connected


def test_disconnected_graph_is_reported():
    op = random_schreier_graph(40, 1, 2, seed=7)
    connected, components = connectivity(op)
    assert not connected and components == 2
    rep = spectral_gap(op)
    assert not rep.connected and rep.lambda_nontrivial is None


def test_bipartite_cycle_excludes_minus_degree():
    op = schreier_graph(6, 1, [[1, 2, 3, 4, 5, 0]])
    assert connectivity(op).bipartite
    rep = spectral_gap(op)
    assert rep.bipartite
    assert rep.lambda_nontrivial == pytest.approx(1.0, abs=1e-8)
    assert dense_report(op)[2] == pytest.approx(1.0, abs=1e-10)


def test_vacuous_spectrum_gives_none():
    rep = spectral_gap(schreier_graph(2, 1, [[1, 0]]))
    assert rep.connected and rep.lambda_nontrivial is None


def test_matvec_is_symmetric():
    op = random_schreier_graph(12, 3, 2, seed=4)
    rng = np.random.default_rng(1)
    for _ in range(5):
        x, y = rng.standard_normal(op.size), rng.standard_normal(op.size)
        assert abs(op.matvec(x) @ y - x @ op.matvec(y)) <= 1e-12 * op.size
        assert np.allclose(op.matvec(2 * x + y), 2 * op.matvec(x) + op.matvec(y), atol=1e-12)


@pytest.mark.parametrize("case", DENSE_CASES)
def test_lanczos_matches_dense(case):
    n, k, r, seed = case
    op = random_schreier_graph(n, k, r, seed)
    rep = spectral_gap(op, tol=1e-10, seed=seed)
    top, bottom, nontrivial = dense_report(op)
    assert rep.converged and rep.residual <= 1e-10 * op.degree
    assert rep.lambda_top == pytest.approx(top, abs=1e-6)
    assert rep.lambda_bottom == pytest.approx(bottom, abs=1e-6)
    assert rep.lambda_nontrivial == pytest.approx(nontrivial, abs=1e-6)
    assert rep.lambda_nontrivial <= 2 * r


@pytest.mark.parametrize("n", [6, 9, 12])
def test_point_spectrum_inside_pair_spectrum(n):
    perms = [np.random.default_rng(n).permutation(n) for _ in range(2)]
    small = dense_spectrum(schreier_graph(n, 1, perms))
    big = dense_spectrum(schreier_graph(n, 2, perms))
    for lam in small:
        assert np.min(np.abs(big - lam)) < 1e-8


def test_alon_boppana_floor():
    floor = 2 * sqrt(3) - 0.5
    for seed in range(4):
        rep = spectral_gap(random_schreier_graph(100, 2, 2, seed), tol=1e-8, seed=seed)
        assert rep.connected and rep.converged
        assert floor <= rep.lambda_nontrivial <= 4


def test_report_rows():
    rep = spectral_gap(schreier_graph(3, 1, CYCLE3), seed=5)
    row = rep.to_row()
    assert list(row) == ["seed", "n", "k", "r", "lambda_nontrivial", "bound", "iterations", "connected"]
    assert row["bound"] == pytest.approx(2.0)
    assert rep.to_json()["residual"] <= 1e-8 * 2


def test_memory_guard(monkeypatch):
    import wordchar.schreier as sch

    monkeypatch.setattr(sch, "MEMORY_LIMIT", 100)
    with pytest.raises(MemoryError):
        random_schreier_graph(20, 2, 2, seed=0)
