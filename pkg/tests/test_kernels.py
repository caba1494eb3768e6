"""Both kernel backends agree with each other and with plain-int references."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camelot import _pykernels, kernels
from camelot.field import find_prime

BACKENDS = kernels.available_backends()
PRIMES = [101, 65537, int(find_prime(1 << 40)), int(find_prime(1 << 61)), int(find_prime((1 << 62) - 200))]

prime = st.sampled_from(PRIMES)


def u64(vals):
    return np.array(vals, dtype=np.uint64)


def vec(q, min_size=0, max_size=20):
    return st.lists(st.integers(0, q - 1), min_size=min_size, max_size=max_size)


def test_cython_backend_builds():
    # the compiled core is the point of the package; the fallback is a fallback
    assert "cython" in BACKENDS
    assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_backend_exports_every_kernel(name):
    for fn in ("horner", "horner_many", "matmul", "hadamard", "yates", "poly_mul", "poly_divmod",
               "interpolate", "lagrange_basis", "bipoly_mul", "sieve_extract", "form62_contract"):
        assert callable(getattr(BACKENDS[name], fn))


@settings(max_examples=60, deadline=None)
@given(prime.flatmap(lambda q: st.tuples(st.just(q), vec(q, 1), vec(q, 1, 8))))
def test_horner(args):
    q, coeffs, xs = args
    want = [sum(c * pow(x, i, q) for i, c in enumerate(coeffs)) % q for x in xs]
    for mod in BACKENDS.values():
        assert mod.horner(u64(coeffs), xs[0], q) == want[0]
        assert mod.horner_many(u64(coeffs), u64(xs), q).tolist() == want


@settings(max_examples=40, deadline=None)
@given(prime, st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.data())
def test_matmul_and_hadamard(q, n, m, p, data):
    A = data.draw(st.lists(vec(q, m, m), min_size=n, max_size=n))
    B = data.draw(st.lists(vec(q, p, p), min_size=m, max_size=m))
    C = data.draw(st.lists(vec(q, m, m), min_size=n, max_size=n))
    want = [[sum(A[i][k] * B[k][j] for k in range(m)) % q for j in range(p)] for i in range(n)]
    had = [[A[i][j] * C[i][j] % q for j in range(m)] for i in range(n)]
    for mod in BACKENDS.values():
        assert mod.matmul(u64(A), u64(B), q).tolist() == want
        assert mod.hadamard(u64(A), u64(C), q).tolist() == had


@settings(max_examples=40, deadline=None)
@given(prime, st.integers(1, 3), st.integers(1, 3), st.integers(0, 3), st.integers(1, 3), st.data())
def test_yates_matches_kronecker(q, t, s, k, lanes, data):
    base = data.draw(st.lists(vec(q, s, s), min_size=t, max_size=t))
    x = data.draw(st.lists(vec(q, lanes, lanes), min_size=s ** k, max_size=s ** k))
    M = np.ones((1, 1), dtype=object)
    for _ in range(k):
        M = np.kron(M, np.array(base, dtype=object))
    want = (M.dot(np.array(x, dtype=object)) % q).tolist()
    for mod in BACKENDS.values():
        assert mod.yates(u64(base), u64(x), k, q).tolist() == want
        assert mod.yates(u64(base), u64([r[0] for r in x]), k, q).tolist() == [r[0] for r in want]


@settings(max_examples=60, deadline=None)
@given(prime.flatmap(lambda q: st.tuples(st.just(q), vec(q, 1, 12), vec(q, 1, 12))))
def test_poly_mul_divmod(args):
    q, a, b = args
    if b[-1] == 0:
        b[-1] = 1
    want = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            want[i + j] = (want[i + j] + x * y) % q
    for mod in BACKENDS.values():
        assert mod.poly_mul(u64(a), u64(b), q).tolist() == want
        quo, rem = mod.poly_divmod(u64(want), u64(b), q)
        back = [0] * len(want)
        for i, x in enumerate(quo.tolist()):
            for j, y in enumerate(b):
                back[i + j] = (back[i + j] + x * y) % q
        for i, r in enumerate(rem.tolist()):
            back[i] = (back[i] + r) % q
        assert back == want
        assert len(rem) < len(b)


@settings(max_examples=40, deadline=None)
@given(prime, st.data())
def test_interpolate_roundtrip(q, data):
    n = data.draw(st.integers(1, min(12, q)))
    xs = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n, unique=True))
    ys = data.draw(vec(q, n, n))
    for mod in BACKENDS.values():
        c = mod.interpolate(u64(xs), u64(ys), q)
        assert mod.horner_many(c, u64(xs), q).tolist() == ys


@settings(max_examples=60, deadline=None)
@given(prime, st.integers(1, 30), st.data())
def test_lagrange_basis(q, R, data):
    if q <= R:
        return
    x0 = data.draw(st.integers(0, q - 1))
    want = []
    for r in range(1, R + 1):
        num = den = 1
        for j in range(1, R + 1):
            if j != r:
                num = num * (x0 - j) % q
                den = den * (r - j) % q
        want.append(num * pow(den, q - 2, q) % q)
    for mod in BACKENDS.values():
        assert mod.lagrange_basis(R, x0, q).tolist() == want


@settings(max_examples=30, deadline=None)
@given(prime, st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.data())
def test_sieve_and_bipoly(q, nE, dE, dB, data):
    shape = (1 << nE, dE + 1, dB + 1)
    g = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=int(np.prod(shape)),
                                    max_size=int(np.prod(shape)))), dtype=np.uint64).reshape(shape)
    t = data.draw(st.integers(0, 4))
    outs = {name: mod.sieve_extract(g, t, q) for name, mod in BACKENDS.items()}
    assert len(set(outs.values())) == 1
    prods = [mod.bipoly_mul(g[0], g[-1], q).tolist() for mod in BACKENDS.values()]
    assert all(p == prods[0] for p in prods)


@settings(max_examples=20, deadline=None)
@given(prime, st.integers(1, 5), st.data())
def test_form62_contract_backends(q, N, data):
    chi = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=15 * N * N,
                                      max_size=15 * N * N)), dtype=np.uint64).reshape(15, N, N)
    abc = [np.array(data.draw(vec(q, N * N, N * N)), dtype=np.uint64).reshape(N, N)
           for _ in range(3)]
    vals = {mod.form62_contract(chi, *abc, q) for mod in BACKENDS.values()}
    assert len(vals) == 1


def test_pure_python_switch(monkeypatch):
    import importlib
    monkeypatch.setenv("CAMELOT_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python" and mod.yates is _pykernels.yates
    finally:
        monkeypatch.delenv("CAMELOT_PURE_PYTHON")
        importlib.reload(kernels)
