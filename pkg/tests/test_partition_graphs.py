import itertools
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camelot import graphs, oracles, partition
from camelot.engine import NodeConfig, solve
from camelot.field import find_prime
from camelot.graphs import Graph
from camelot.partition import (IndependentG, PottsG, SetFamilyG, UniverseSplit, g_bruteforce,
                               partition_task)

Q = int(find_prime(1 << 61))
CFG = NodeConfig(K=3)


def rand_graph(rng, n, p=0.5):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def _edges_inside(G, X):
    return sum(1 for u, v in G.edges if X >> u & 1 and X >> v & 1)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
def test_g_builders_match_definition(n):
    rng = random.Random(n)
    split = UniverseSplit.balanced(n)
    fam = sorted({rng.randrange(1, 1 << n) for _ in range(6)})
    x0 = rng.randrange(Q)
    assert np.array_equal(SetFamilyG(fam, split)(x0, Q),
                          g_bruteforce(lambda X: int(X in fam), n, split, x0, Q))
    G = rand_graph(rng, n)
    assert np.array_equal(IndependentG(G, split)(x0, Q),
                          g_bruteforce(lambda X: int(_edges_inside(G, X) == 0), n, split, x0, Q))
    if n % 3 == 0:
        tri = UniverseSplit.tripartite(n)
        r = 3
        want = g_bruteforce(lambda X: (1 + r) ** _edges_inside(G, X), n, tri, x0, Q)
        assert np.array_equal(PottsG(G, tri, r)(x0, Q), want)


def test_split_shapes():
    s = UniverseSplit.balanced(7)
    assert (len(s.E), len(s.B)) == (4, 3)
    assert s.degree == 3 * 4 and s.target == 7
    assert s.local_masks(0b1010001) == (0b0001, 0b101)
    with pytest.raises(ValueError):
        UniverseSplit.tripartite(4)
    with pytest.raises(ValueError):
        UniverseSplit((0, 1), (1, 2))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.randoms(use_true_random=False))
def test_partition_template_matches_bruteforce(n, t, rng):
    fam = sorted({rng.randrange(0, 1 << n) for _ in range(rng.randrange(1, 10))})
    weights = {X: rng.randrange(1, 4) for X in fam}
    split = UniverseSplit.balanced(n)

    def builder(x0, q):
        return g_bruteforce(lambda X: weights.get(X, 0), n, split, x0, q)

    task = partition_task(builder, split, t, n, 3, "weighted")
    want = oracles.partition_sum_bruteforce(lambda X: weights.get(X, 0), n, t)
    assert solve(task, CFG) == want


def test_set_partitions():
    rng = random.Random(4)
    for _ in range(15):
        n = rng.randrange(1, 7)
        fam = sorted({rng.randrange(1, 1 << n) for _ in range(rng.randrange(1, 10))})
        for t in (1, 2, 3):
            want = oracles.exact_cover_count(fam, n, t)
            assert partition.set_partition_count(fam, n, t, CFG) == want


def test_chromatic_small_cases():
    assert partition.chromatic_polynomial(Graph(0)) == [1]
    assert partition.chromatic_polynomial(Graph(1)) == [0, 1]
    # path on three vertices: t (t-1)^2
    assert partition.chromatic_polynomial(Graph(3, [(0, 1), (1, 2)])) == [0, 1, -2, 1]
    C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    # (t-1)^4 + (t-1)
    assert partition.chromatic_polynomial(C4) == [0, -3, 6, -4, 1]


def test_chromatic_task_counts_colourings():
    rng = random.Random(5)
    for _ in range(10):
        G = rand_graph(rng, rng.randrange(1, 7))
        for t in (1, 2, 3):
            assert solve(partition.chromatic_task(G, t), CFG) == oracles.chromatic_bruteforce(G, t)


def test_potts_task_matches_enumeration():
    rng = random.Random(6)
    for _ in range(8):
        n = rng.randrange(1, 6)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randrange(0, 6))]
        G = Graph(n, edges, multigraph=True)
        for t, r in ((1, 1), (2, 3), (3, 2)):
            assert solve(partition.potts_task(G, t, r), CFG) == oracles.potts_bruteforce(G, t, r)


def test_tutte_known_graphs():
    K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    T = partition.tutte_polynomial(K3)
    assert partition.format_bivariate(T) == "x^2 + x + y"
    loop = Graph(1, [(0, 0)], multigraph=True)
    assert partition.tutte_polynomial(loop) == {(0, 1): 1}
    assert partition.tutte_polynomial(Graph(2, [(0, 1)])) == {(1, 0): 1}
    assert partition.tutte_polynomial(Graph(3)) == {(0, 0): 1}


def test_interpolate_exact():
    xs = list(range(6))
    poly = [3, -1, 0, 4, 0, -2]
    ys = [sum(c * x ** i for i, c in enumerate(poly)) for x in xs]
    assert partition.interpolate_exact(xs, ys) == poly
    assert partition.format_univariate([0, -3, 6, -4, 1]) == "t^4 - 4*t^3 + 6*t^2 - 3*t"


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 7), st.randoms(use_true_random=False))
def test_relabelling_leaves_answers_unchanged(n, rng):
    G = rand_graph(rng, n, 0.6)
    perm = list(range(n))
    rng.shuffle(perm)
    H = Graph(n, [(perm[u], perm[v]) for u, v in G.edges])
    assert partition.chromatic_polynomial(G) == partition.chromatic_polynomial(H)
    assert graphs.count_triangles(G, CFG) == graphs.count_triangles(H, CFG)


# -- cliques and triangles -----------------------------------------------------

def test_cliques_on_complete_graphs():
    from math import comb
    for n in range(6, 10):
        assert solve(graphs.clique_task(Graph.complete(n), 6), CFG) == comb(n, 6)


def test_clique_task_rejects_bad_k():
    with pytest.raises(ValueError):
        graphs.clique_task(Graph(6), 5)


def test_clique_oracle_against_networkx():
    rng = random.Random(8)
    for _ in range(20):
        G = rand_graph(rng, rng.randrange(6, 11), 0.8)
        H = nx.Graph(G.edges)
        H.add_nodes_from(range(G.n))
        want = sum(1 for c in nx.enumerate_all_cliques(H) if len(c) == 6)
        assert graphs.clique_count_oracle(G, 6) == want


def test_triangles_across_components():
    G = Graph(9, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 7)])
    assert graphs.count_triangles(G, CFG) == 2
    assert graphs.triangle_count_sparse_ayz(G) == 2
    assert graphs.triangle_oracle(G) == 2


def test_colex_subsets_order():
    subs = graphs.colex_subsets(4, 2)
    assert subs == [tuple(sorted(s)) for s in sorted(itertools.combinations(range(4), 2),
                                                    key=lambda s: (s[1], s[0]))]
