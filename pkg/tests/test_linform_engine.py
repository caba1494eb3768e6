import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camelot.decomp import (NAIVE_MAX, choose_decomposition, kronecker_power, naive_base,
                            strassen_base, term_count, verify_decomposition)
from camelot.engine import (NodeConfig, TaskSpec, assign_points, crt_values, default_e,
                            point_values, run_pipeline, threshold, verify_proof)
from camelot.field import Poly, find_prime
from camelot.linform import ChiFamily, Form62Proof, form62_circuit, form62_direct, form62_np

Q = int(find_prime(1 << 61))


@pytest.mark.parametrize("dec", [strassen_base(), naive_base(1), naive_base(2), naive_base(3),
                                 kronecker_power(strassen_base(), 2),
                                 kronecker_power(strassen_base(), 3)],
                         ids=lambda d: f"{d.name}^{d.t}")
def test_decompositions_are_exact(dec):
    assert verify_decomposition(dec)


def test_broken_decomposition_is_caught():
    s = strassen_base()
    alpha = [list(r) for r in s.alpha0]
    alpha[0][0] = 0
    bad = type(s)(2, 7, 1, tuple(map(tuple, alpha)), s.beta0, s.gamma0, "bad")
    assert not verify_decomposition(bad)


def test_choose_decomposition():
    assert choose_decomposition(2).name == "strassen"
    assert choose_decomposition(5).name == "naive5"
    big = choose_decomposition(NAIVE_MAX + 1)
    assert big.name == "strassen" and big.N >= NAIVE_MAX + 1
    assert term_count(kronecker_power(strassen_base(), 3)) == 343


def _family(rng, N, lo=-3, hi=4):
    return ChiFamily([[[rng.randrange(lo, hi) for _ in range(N)] for _ in range(N)]
                      for _ in range(15)])


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_form62_paths_agree(N, rng):
    chi = _family(rng, N)
    want = form62_direct(chi) % Q
    assert form62_np(chi, Q) == want
    dec = choose_decomposition(N)
    assert form62_circuit(chi, dec, Q) == want
    proof = Form62Proof(chi, dec, Q)
    assert sum(proof.many(list(range(1, dec.R + 1)))) % Q == want


def test_form62_proof_degree_and_batch():
    rng = random.Random(3)
    chi = _family(rng, 2)
    dec = strassen_base()
    proof = Form62Proof(chi, dec, Q)
    assert proof.degree == 3 * (dec.R - 1)
    xs = [rng.randrange(Q) for _ in range(proof.degree + 2)]
    vals = proof.many(xs, chunk=5)
    assert vals == [proof(x) for x in xs]
    # degree bound: d+1 points determine the value at one more
    from camelot.field import poly_interpolate
    P = poly_interpolate(xs[:-1], vals[:-1], Q)
    assert P(xs[-1]) == vals[-1]


def test_chi_family_checks():
    with pytest.raises(ValueError):
        ChiFamily([np.zeros((2, 2))] * 14)
    with pytest.raises(ValueError):
        ChiFamily([np.zeros((2, 2))] * 14 + [np.zeros((3, 3))])
    fam = ChiFamily.single(np.ones((2, 2), dtype=int))
    assert fam.padded(4).N == 4 and form62_direct(fam.padded(4)) == form62_direct(fam)


# -- engine ------------------------------------------------------------------

@given(st.integers(1, 200), st.integers(1, 50))
def test_assign_points_covers(e, K):
    if K > e:
        with pytest.raises(ValueError):
            assign_points(e, K)
        return
    blocks = assign_points(e, K)
    sizes = [hi - lo for _, lo, hi in blocks]
    assert blocks[0][1] == 0 and blocks[-1][2] == e
    assert all(b[2] == c[1] for b, c in zip(blocks, blocks[1:]))
    assert max(sizes) - min(sizes) <= 1


def test_default_e_tolerates_a_tenth():
    for d in range(0, 500, 7):
        e = default_e(d)
        assert threshold(e, d) >= e // 10 - 1


def _poly_task(coeffs, q=None):
    """A task whose proof polynomial is fixed; its answer is P(0)."""
    d = len(coeffs) - 1
    return TaskSpec("toy", d, lambda q: Poly(coeffs, q),
                    lambda proofs: crt_values(proofs, point_values([0]), signed=True)[0],
                    bound=abs(coeffs[0]) + 1, primes=[q] if q else None)


@pytest.mark.parametrize("mode", ["silent", "random-corrupt", "adversarial-consistent"])
def test_pipeline_one_bad_node(mode):
    task = _poly_task([-42, 5, 7, 11])
    task.e = 40
    rep = run_pipeline(task, NodeConfig(K=8, byzantine={3: mode}, seed=1))
    assert rep.accepted and rep.answer == -42
    if mode != "silent":
        assert all(p.culprits == [3] for p in rep.primes)


def test_pipeline_too_many_bad_nodes():
    task = _poly_task([1, 2, 3])
    task.e = 8
    rep = run_pipeline(task, NodeConfig(K=4, byzantine={0: "random-corrupt", 1: "random-corrupt"}))
    assert rep.aborted is not None and rep.answer is None


def test_pipeline_is_deterministic():
    task = _poly_task([9, 8, 7, 6, 5])
    task.e = 30
    cfg = NodeConfig(K=5, byzantine={2: "adversarial-consistent"}, seed=11)
    a = run_pipeline(task, cfg)
    b = run_pipeline(task, cfg)
    assert a.fingerprint() == b.fingerprint()


def test_verify_detects_tamper():
    q = int(find_prime(1 << 60))
    P = Poly([1, 2, 3], q)
    bad = P + Poly([0, 1], q)
    assert verify_proof(P, P, 3, random.Random(0)).accepted
    assert not verify_proof(P, bad, 3, random.Random(0)).accepted


def test_node_config_validation():
    with pytest.raises(ValueError):
        NodeConfig(K=0)
    with pytest.raises(ValueError):
        NodeConfig(K=2, byzantine={5: "silent"})
    with pytest.raises(ValueError):
        NodeConfig(K=2, byzantine={0: "lazy"})
