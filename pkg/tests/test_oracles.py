import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from islandmodel.harness.verify import check_decay, check_decision, check_lemma1, check_oracles, check_sssp
from islandmodel.oracles import exchange_distances, random_eulerian_graph, sssp_brute_minimum
from islandmodel.shortest_paths import gen_random_connected, make_graph, shortest_path_oracle
from islandmodel.sorting import exc


def test_exchange_distances_n3():
    dist = exchange_distances(3)
    assert len(dist) == 6
    # identity, three transpositions, two 3-cycles
    assert Counter(dist.values()) == {0: 1, 1: 3, 2: 2}
    assert dist[(2, 3, 1)] == 2


def test_exchange_distances_match_exc_n5():
    assert all(exc(p) == d for p, d in exchange_distances(5).items())


def test_brute_sssp_triangle():
    # source is vertex 3; the heavy direct edge 1-3 is never used
    g = make_graph(3, [(1, 2, 1.0), (2, 3, 1.0), (1, 3, 5.0)])
    assert sssp_brute_minimum(g) == (2.0, 1.0)
    assert shortest_path_oracle(g) == (2.0, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_brute_sssp_matches_label_setting(seed):
    r = random.Random(seed)
    g = gen_random_connected(r.randint(3, 6), r)
    assert sssp_brute_minimum(g) == pytest.approx(shortest_path_oracle(g))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_random_eulerian_graphs_are_eulerian(seed):
    g = random_eulerian_graph(random.Random(seed))
    assert 3 <= g.m <= 12
    deg = g.degrees()
    assert all(d % 2 == 0 and d > 0 for d in deg)


def test_small_checks_pass():
    assert check_oracles(graphs=5, optima=30).passed
    assert check_lemma1(trials=20_000).passed
    assert check_sssp(n=8, runs=10, min_ratio=1.0).passed


def test_small_decision_runs():
    c = check_decision(m=12, runs=60, lo=0.0, hi=1.0)
    assert c.passed and c.number == 3 and "applicable" in c.detail
    assert check_decay(m=12, runs=60, lo=0.0, hi=100.0).passed
