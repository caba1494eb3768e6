import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camelot.field import (BiPoly, ContractError, FieldElement, Modulus, ModulusTooSmall, Poly,
                           bipoly_mul_trunc, crt_combine, crt_signed, find_prime, is_prime,
                           lagrange_basis_at, poly_from_roots, poly_interpolate, primes_from)
from camelot.rs import CodewordShare, DecodeFailure, gao_decode, rs_encode

Q = 1_000_003


def test_is_prime_small_table():
    sieve = [i for i in range(2, 2000) if all(i % p for p in range(2, int(i ** 0.5) + 1))]
    assert [i for i in range(2000) if is_prime(i)] == sieve


def test_find_prime_and_primes_from():
    assert find_prime(100) == 101
    ps = primes_from(1 << 60, 3)
    assert len(set(ps)) == 3 and all(is_prime(p) and p >= 1 << 60 for p in ps)
    assert sorted(ps) == ps


def test_field_element_ops():
    m = Modulus(101)
    a, b = m.element(7), m.element(99)
    assert int(a + b) == 5 and int(a - b) == 9 and int(a * b) == 7 * 99 % 101
    assert int(a * a.inverse()) == 1
    with pytest.raises(ContractError):
        m.element(0).inverse()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, Q - 1), min_size=1, max_size=10),
       st.lists(st.integers(0, Q - 1), min_size=1, max_size=10))
def test_poly_ring_laws(a, b):
    A, B = Poly(a, Q), Poly(b, Q)
    x = 12345
    assert (A * B)(x) == A(x) * B(x) % Q
    assert (A + B)(x) == (A(x) + B(x)) % Q
    if not B.is_zero():
        quo, rem = divmod(A, B)
        assert quo * B + rem == A
        assert rem.degree < B.degree


def test_poly_trims_leading_zeros():
    assert Poly([1, 2, 0, 0], 7).degree == 1
    assert Poly([0, 0], 7).is_zero() and Poly([7], 7).is_zero()


def test_from_roots_and_interpolate():
    p = poly_from_roots([1, 2, 3], Q)
    assert [p(x) for x in (1, 2, 3)] == [0, 0, 0] and p.degree == 3
    xs = [5, 9, 11, 40]
    ys = [3, 1, 4, 1]
    f = poly_interpolate(xs, ys, Q)
    assert [f(x) for x in xs] == ys


def test_lagrange_basis_at_identity_points():
    R = 6
    for r in range(1, R + 1):
        vals = [int(v) for v in lagrange_basis_at(R, r, Q)]
        assert vals == [int(i == r - 1) for i in range(R)]
    with pytest.raises(ModulusTooSmall):
        lagrange_basis_at(10, 1, 7)


@settings(max_examples=50, deadline=None)
@given(st.integers(-10 ** 30, 10 ** 30))
def test_crt(x):
    ps = [int(p) for p in primes_from(1 << 60, 2)]
    assert crt_signed((x % p, p) for p in ps) == x
    assert crt_combine((abs(x) % p, p) for p in ps) == abs(x)


def test_crt_inconsistent():
    with pytest.raises(ValueError):
        crt_combine([(1, 7), (2, 7)])


def test_bipoly_truncated_product():
    a = BiPoly.monomial((2, 2), 101, 1, 1, 3)
    b = BiPoly.monomial((2, 2), 101, 1, 0, 5)
    c = bipoly_mul_trunc(a, b, (2, 2))
    assert int(c.coeffs[2, 1]) == 15
    assert int(bipoly_mul_trunc(c, b, (2, 2)).coeffs.sum()) == 0  # x^3 truncated away


# -- Reed-Solomon --------------------------------------------------------------

def _corrupt(shares, idx, rng, q):
    out = list(shares)
    for i in idx:
        s = out[i]
        out[i] = CodewordShare(s.point, (s.value + rng.randrange(1, q)) % q, s.origin)
    return out


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 6), st.integers(0, 12), st.randoms(use_true_random=False))
def test_rs_corrects_up_to_half_distance(d, slack, rng):
    q = 10007
    e = d + 1 + slack
    P = Poly([rng.randrange(q) for _ in range(d + 1)], q)
    shares = rs_encode(P, range(e))
    tau = (e - d - 1) // 2
    bad = rng.sample(range(e), rng.randrange(tau + 1))
    res = gao_decode(_corrupt(shares, bad, rng, q), d, q)
    assert res.proof == P
    assert res.error_points == frozenset(bad)


def test_rs_missing_shares_shrink_e():
    q = 101
    P = Poly([3, 1, 4], q)
    shares = rs_encode(P, range(10))
    kept = shares[:3] + shares[6:]
    assert gao_decode(kept, 2, q).proof == P


def test_rs_too_many_errors_fail_or_differ():
    q = 101
    rng = random.Random(0)
    P = Poly([1, 2, 3], q)
    shares = rs_encode(P, range(7))
    failures = 0
    for _ in range(50):
        recv = _corrupt(shares, rng.sample(range(7), 4), rng, q)
        try:
            res = gao_decode(recv, 2, q)
        except DecodeFailure:
            failures += 1
            continue
        assert res.proof != P or not res.error_points
    assert failures


def test_rs_encode_rejects_bad_points():
    with pytest.raises(ValueError):
        rs_encode(Poly([1, 1], 7), [1, 8])
    with pytest.raises(ValueError):
        rs_encode(Poly([1, 1, 1], 7), [1, 2])


def test_field_element_wrong_modulus():
    with pytest.raises(ContractError):
        FieldElement(1, Modulus(7)) + FieldElement(1, Modulus(11))
