"""Acceptance criteria 1-11.

Each ``test_criterion_NN`` covers one criterion at its stated size, tolerance
and time limit. A summary line per criterion is printed at the end of the run
(see conftest.py).
"""

import itertools
import math
import random
import time
from contextlib import contextmanager
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from camelot import appendix as ap
from camelot import bench, graphs, io, oracles, partition
from camelot.corpus import read_manifest
from camelot.decomp import kronecker_power, naive_base, strassen_base, term_count
from camelot.engine import NodeConfig, run_pipeline, solve, verify_proof
from camelot.field import Poly, find_prime, poly_from_roots, poly_interpolate, primes_from
from camelot.graphs import Graph
from camelot.linform import ChiFamily, Form62Proof, form62_circuit, form62_direct, form62_np
from camelot.problems import lookup
from camelot.rs import CodewordShare, gao_decode, rs_encode
from camelot.yates import (BaseMatrix, SparseVec, kronecker_dense, yates_classical,
                           yates_poly_extension_eval, yates_split_sparse)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@contextmanager
def within(seconds):
    t0 = time.perf_counter()
    yield
    took = time.perf_counter() - t0
    assert took < seconds, f"took {took:.1f} s, limit {seconds} s"


def rand_graph(rng, n, p=None):
    p = rng.uniform(0.2, 0.9) if p is None else p
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


# -- 1 -----------------------------------------------------------------------

def test_criterion_01_form62_agreement():
    rng = random.Random(1)
    primes = [int(p) for p in primes_from(rng.randrange(1 << 59, 1 << 60), 3)]
    decs = {2: [naive_base(2), strassen_base()],
            4: [naive_base(4), kronecker_power(naive_base(2), 2), kronecker_power(strassen_base(), 2)]}
    with within(60):
        for trial in range(100):
            N = (2, 4)[trial % 2]
            chi = ChiFamily([[[rng.randrange(-5, 6) for _ in range(N)] for _ in range(N)]
                             for _ in range(15)])
            exact = form62_direct(chi)
            for q in primes:
                want = exact % q
                assert form62_np(chi, q) == want
                for dec in decs[N]:
                    assert form62_circuit(chi, dec, q) == want
                    proof = Form62Proof(chi, dec, q)
                    assert sum(proof.many(list(range(1, dec.R + 1)))) % q == want


# -- 2 -----------------------------------------------------------------------

def test_criterion_02_six_cliques():
    cfg = NodeConfig(K=4)
    with within(300):
        # every isomorphism class on at most 6 vertices
        for H in nx.graph_atlas_g():
            if H.number_of_nodes() > 6:
                break
            G = Graph(H.number_of_nodes(), list(H.edges()))
            assert solve(graphs.clique_task(G, 6), cfg) == graphs.clique_count_oracle(G, 6)
        rng = random.Random(2)
        for _ in range(500):
            G = rand_graph(rng, rng.choice([7, 8, 9]), rng.uniform(0.4, 0.95))
            assert solve(graphs.clique_task(G, 6), cfg) == graphs.clique_count_oracle(G, 6)


# -- 3 -----------------------------------------------------------------------

def test_criterion_03_triangles():
    rng = random.Random(3)
    cfg = NodeConfig(K=4)
    with within(120):
        for _ in range(200):
            G = rand_graph(rng, rng.randrange(1, 33), rng.uniform(0.05, 0.7))
            A = G.adjacency().astype(np.int64)
            want = int(np.trace(A @ A @ A)) // 6
            assert graphs.triangle_count_parallel(G) == want
            assert graphs.count_triangles(G, cfg) == want
            assert graphs.triangle_count_sparse_ayz(G) == want


# -- 4 -----------------------------------------------------------------------

def test_criterion_04_reed_solomon():
    q = 101
    rng = random.Random(4)
    with within(60):
        for e, d in ((7, 1), (11, 2), (15, 4)):
            tau = (e - d - 1) // 2
            P = Poly([rng.randrange(q) for _ in range(d + 1)], q)
            clean = rs_encode(P, range(e))
            for w in range(tau + 1):
                for pos in itertools.combinations(range(e), w):
                    # every nonzero offset for single errors, sampled offsets beyond that
                    if w <= 1:
                        offsets = list(itertools.product(range(1, q), repeat=w))
                    else:
                        offsets = [tuple(rng.randrange(1, q) for _ in pos) for _ in range(8)]
                    for off in offsets:
                        recv = list(clean)
                        for x, o in zip(pos, off):
                            s = recv[x]
                            recv[x] = CodewordShare(s.point, (s.value + o) % q, s.origin)
                        res = gao_decode(recv, d, q)
                        assert res.proof == P
                        assert res.error_points == frozenset(pos)


# -- 5 -----------------------------------------------------------------------

class _Fixed:
    """Stands in for random.Random so verify_proof checks a chosen point."""

    def __init__(self, x0):
        self.x0 = x0

    def randrange(self, q):
        return self.x0


def _roots(p: Poly):
    return sum(1 for x in range(p.q) if p(x) == 0)


def test_criterion_05_soundness():
    rng = random.Random(5)
    with within(60):
        q, d = 101, 4
        honest = Poly([rng.randrange(q) for _ in range(d + 1)], q)
        for delta_roots in ([], [3], [7, 50], [1, 2, 3, 4]):
            tampered = honest + poly_from_roots(delta_roots, q) * 17
            accepts = sum(verify_proof(honest, tampered, 1, _Fixed(x)).accepted for x in range(q))
            assert accepts == _roots(tampered - honest) == len(delta_roots)

        # a real task over a ~60-bit prime
        G = rand_graph(rng, 9, 0.6)
        task = graphs.clique_task(G, 6)
        Q = int(find_prime(1 << 60))
        rep = run_pipeline(task, NodeConfig(K=2), primes=[Q])
        assert rep.accepted
        proof = rep.proofs[Q]
        ev = task.evaluator(Q)
        accepts = 0
        for _ in range(10_000):
            coeffs = [rng.randrange(Q) for _ in range(rng.randrange(1, task.d + 2))]
            if not any(coeffs):
                coeffs[0] = 1
            bad = proof + Poly(coeffs, Q)
            accepts += verify_proof(ev, bad, 1, rng).accepted
        assert accepts == 0


# -- 6 -----------------------------------------------------------------------

def test_criterion_06_completeness():
    entries = read_manifest(CORPUS)
    per = {}
    for tag, path in entries:
        per[tag] = per.get(tag, 0) + 1
    assert len(per) == 12 and min(per.values()) >= 20
    for idx, (tag, path) in enumerate(entries):
        prob, params = lookup(tag)
        inst = prob.parse(path.read_text())
        vals = []
        for task in prob.tasks(inst, params):
            rep = run_pipeline(task, NodeConfig(K=4, seed=idx))
            assert rep.accepted and rep.aborted is None, (tag, path)
            assert all(p.honest_match and not p.error_points for p in rep.primes)
            vals.append(rep.answer)
        assert prob.combine(inst, params, vals) == prob.oracle(inst, params, 1e8), (tag, path)


# -- 7 -----------------------------------------------------------------------

def _falling(n):
    p = [1]
    for i in range(n):
        p = [0] + p
        for j in range(len(p) - 1):
            p[j] -= i * p[j + 1]
    return p


def test_criterion_07_chromatic():
    rng = random.Random(7)
    with within(600):
        for _ in range(100):
            G = rand_graph(rng, rng.randrange(1, 9))
            assert partition.chromatic_polynomial(G) == oracles.chromatic_oracle(G)
        for n in range(1, 9):
            assert partition.chromatic_polynomial(Graph(n)) == [0] * n + [1]
            assert partition.chromatic_polynomial(Graph.complete(n)) == _falling(n)


# -- 8 -----------------------------------------------------------------------

def test_criterion_08_tutte():
    rng = random.Random(8)
    loops = parallel = 0
    with within(600):
        for _ in range(50):
            n = rng.randrange(1, 7)
            m = rng.randrange(0, 11)
            edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
            loops += any(u == v for u, v in edges)
            parallel += len({tuple(sorted(e)) for e in edges}) < m
            G = Graph(n, edges, multigraph=True)
            T = partition.tutte_polynomial(G)
            assert T == oracles.tutte_oracle(G)
            assert oracles.eval_bivariate(T, 1, 1) == oracles.maximal_forest_count(G)
            if len(G.components()) == 1:
                assert oracles.eval_bivariate(T, 1, 1) == oracles.spanning_tree_count(G)
            assert oracles.eval_bivariate(T, 2, 2) == 2 ** m
    assert loops and parallel


# -- 9 -----------------------------------------------------------------------

def _bits(rng, n, t, p=0.5):
    return [[int(rng.random() < p) for _ in range(t)] for _ in range(n)]


def test_criterion_09_appendix():
    rng = random.Random(9)
    cfg = NodeConfig(K=4)
    with within(600):
        for _ in range(50):
            A = _bits(rng, rng.randrange(1, 9), t := rng.randrange(1, 7), 0.4)
            B = _bits(rng, rng.randrange(1, 9), t, 0.4)
            assert solve(ap.ov_task(A, B), cfg) == ap.ov_oracle(A, B)

            v = rng.randrange(0, 13)
            clauses = [[rng.choice([1, -1]) * rng.randrange(1, v + 1)
                        for _ in range(rng.randrange(1, 4))] for _ in range(rng.randrange(0, 12))] \
                if v else []
            F = ap.CnfFormula(v, clauses)
            assert solve(ap.cnfsat_task(F), cfg) == ap.cnf_oracle(F)

            A = _bits(rng, rng.randrange(1, 7), t := rng.randrange(1, 6))
            B = _bits(rng, rng.randrange(1, 7), t)
            assert solve(ap.hamming_task(A, B), cfg) == ap.hamming_oracle(A, B)

            n, t = rng.randrange(2, 13), rng.randrange(1, 9)
            arr = [rng.randrange(1 << t) for _ in range(n)]
            c = ap.conv3sum_oracle(arr)
            assert solve(ap.conv3sum_task(arr, t), cfg) == c + [sum(c)]

            n = rng.randrange(1, 7)
            M = [[rng.randrange(-3, 4) for _ in range(n)] for _ in range(n)]
            assert solve(ap.permanent_task(M), cfg) == ap.permanent_oracle(M)

            n = rng.randrange(1, 7)
            fam = [rng.randrange(1, 1 << n) for _ in range(rng.randrange(1, 6))]
            t = rng.randrange(1, 4)
            assert solve(ap.setcover_task(fam, n, t), cfg) == ap.setcover_oracle(fam, n, t)

            cons = []
            for _ in range(rng.randrange(0, 5)):
                u, w = rng.sample(range(6), 2)
                allowed = frozenset(p for p in itertools.product(range(2), repeat=2)
                                    if rng.random() < 0.5)
                cons.append(ap.Constraint(u, w, allowed, rng.randrange(1, 3)))
            inst = ap.Csp2Instance(6, 2, cons)
            assert ap.csp2_enumerate(inst, cfg) == ap.csp_oracle(inst)


# -- 10 ----------------------------------------------------------------------

def test_criterion_10_yates():
    q = 1_000_003
    rng = random.Random(10)
    with within(60):
        for t, s in itertools.product((1, 2, 3), repeat=2):
            A = BaseMatrix([[rng.randrange(-4, 5) for _ in range(s)] for _ in range(t)])
            for k in range(1, 4):
                for density in (1, 2, s ** k):
                    support = rng.sample(range(s ** k), min(density, s ** k))
                    x = SparseVec(s, k, {j: rng.randrange(1, q) for j in support})
                    dense = x.dense(q)
                    y = yates_classical(A, dense, k, q)
                    want = (kronecker_dense(A, k, q).dot(dense.astype(object)) % q)
                    assert [int(v) for v in y] == [int(v) for v in want]
                    for ell in range(k + 1):
                        m = k - ell
                        parts = [yates_split_sparse(A, x, k, p, q, ell) for p in range(t ** m)]
                        stacked = np.stack(parts, axis=1).reshape(-1)
                        assert np.array_equal(stacked, y)
                        for z in range(1, t ** m + 1):
                            ext = yates_poly_extension_eval(A, x, k, ell, z, q)
                            assert np.array_equal(ext, parts[z - 1])
                        # degree in z is at most t^m - 1: t^m + 1 samples lie on one such poly
                        zs = list(range(t ** m + 1, 2 * t ** m + 2))
                        vals = np.stack([yates_poly_extension_eval(A, x, k, ell, z, q)
                                         for z in zs], axis=1)
                        for row in vals:
                            P = poly_interpolate(zs[:-1], [int(v) for v in row[:-1]], q)
                            assert P.degree <= t ** m - 1
                            assert P(zs[-1]) == int(row[-1])


# -- 11 ----------------------------------------------------------------------

def test_criterion_11_scaling():
    G = bench.random_graph(8, 0.7, 11)
    task = graphs.clique_task(G, 6)
    per = bench.per_node_times(task, Ks=(1, 2, 4, 8), e=task.d + 1 + 8)
    ratio = max(per.values()) / min(per.values())
    print(f"per-point seconds by K: {per}; max/min {ratio:.2f}")
    assert ratio <= 2.0

    for t in (4, 5):
        s = term_count(kronecker_power(strassen_base(), t))
        n = term_count(kronecker_power(naive_base(2), t))
        assert (s, n) == (7 ** t, 8 ** t)
        assert math.isclose(s / n, (7 / 8) ** t, rel_tol=1e-12)
