"""Pure-Python prime-field kernels.

Mirrors the compiled extension function for function. Arrays come in and go
out as ``numpy.uint64``; the arithmetic runs on Python ints.
"""

import numpy as np

NAME = "python"


def _ints(a):
    return np.asarray(a, dtype=np.uint64).tolist()


def _arr(values, shape=None):
    out = np.array(values, dtype=np.uint64)
    return out.reshape(shape) if shape is not None else out


def horner(coeffs, x, q):
    acc = 0
    for c in reversed(_ints(coeffs)):
        acc = (acc * x + c) % q
    return acc


def horner_many(coeffs, xs, q):
    c = _ints(coeffs)[::-1]
    out = []
    for x in _ints(xs):
        acc = 0
        for v in c:
            acc = (acc * x + v) % q
        out.append(acc)
    return _arr(out)


def matmul(A, B, q):
    a = np.asarray(A, dtype=np.uint64)
    b = np.asarray(B, dtype=np.uint64)
    if a.shape[1] != b.shape[0]:
        raise ValueError("inner dimensions differ")
    prod = a.astype(object).dot(b.astype(object)) if a.size and b.size else np.zeros(
        (a.shape[0], b.shape[1]), dtype=object)
    return (prod % q).astype(np.uint64).reshape(a.shape[0], b.shape[1])


def hadamard(A, B, q):
    a = np.asarray(A, dtype=np.uint64).astype(object)
    b = np.asarray(B, dtype=np.uint64).astype(object)
    return ((a * b) % q).astype(np.uint64)


def yates(base, x, k, q):
    A = _ints(base)
    t, s = len(A), len(A[0])
    xa = np.asarray(x, dtype=np.uint64)
    squeeze = xa.ndim == 1
    if squeeze:
        xa = xa.reshape(-1, 1)
    if xa.shape[0] != s ** k:
        raise ValueError("input length must be s**k")
    W = xa.shape[1]
    cur = xa.reshape(-1).tolist()
    P, S = 1, s ** k * W
    for _ in range(k):
        S //= s
        nxt = [0] * (P * t * S)
        for p in range(P):
            src = p * s * S
            dst = p * t * S
            for i in range(t):
                row = A[i]
                o = dst + i * S
                for j in range(s):
                    a = row[j]
                    if not a:
                        continue
                    off = src + j * S
                    for c in range(S):
                        nxt[o + c] += a * cur[off + c]
        cur = [v % q for v in nxt]
        P *= t
    out = _arr(cur, (t ** k, W))
    return out[:, 0].copy() if squeeze else out


def poly_mul(a, b, q):
    av, bv = _ints(a), _ints(b)
    if not av or not bv:
        return _arr([])
    out = [0] * (len(av) + len(bv) - 1)
    for i, x in enumerate(av):
        if x:
            for j, y in enumerate(bv):
                out[i + j] += x * y
    return _arr([v % q for v in out])


def poly_divmod(a, b, q):
    rem = _ints(a)
    bv = _ints(b)
    if not bv or bv[-1] == 0:
        raise ZeroDivisionError("divisor has zero leading coefficient")
    nb = len(bv)
    if len(rem) < nb:
        return _arr([]), _arr(rem)
    inv = pow(bv[-1], q - 2, q)
    quot = [0] * (len(rem) - nb + 1)
    for i in range(len(rem) - nb, -1, -1):
        coef = rem[i + nb - 1] * inv % q
        quot[i] = coef
        if coef:
            for j in range(nb):
                rem[i + j] = (rem[i + j] - coef * bv[j]) % q
    return _arr(quot), _arr(rem[: nb - 1])


def _batch_inv(vals, q):
    prefix = []
    acc = 1
    for v in vals:
        prefix.append(acc)
        acc = acc * v % q
    inv = pow(acc, q - 2, q)
    out = [0] * len(vals)
    for i in range(len(vals) - 1, -1, -1):
        out[i] = inv * prefix[i] % q
        inv = inv * vals[i] % q
    return out


def interpolate(xs, ys, q):
    x, y = _ints(xs), _ints(ys)
    n = len(x)
    if n == 0:
        return _arr([])
    g = [1]
    for xi in x:
        nxt = [0] * (len(g) + 1)
        for j, c in enumerate(g):
            nxt[j] = (nxt[j] - c * xi) % q
            nxt[j + 1] = (nxt[j + 1] + c) % q
        g = nxt
    den = []
    for i in range(n):
        d = 1
        for j in range(n):
            if j != i:
                d = d * (x[i] - x[j]) % q
        den.append(d)
    w = _batch_inv(den, q)
    out = [0] * n
    for i in range(n):
        wi = w[i] * y[i] % q
        if not wi:
            continue
        carry = 0
        num = [0] * n
        for j in range(n, 0, -1):
            carry = (g[j] + carry * x[i]) % q
            num[j - 1] = carry
        for j in range(n):
            out[j] = (out[j] + wi * num[j]) % q
    return _arr(out)


def lagrange_basis(R, x0, q):
    x0 %= q
    if 1 <= x0 <= R:
        out = [0] * R
        out[x0 - 1] = 1
        return _arr(out)
    fact = [1] * max(R, 1)
    for j in range(1, R):
        fact[j] = fact[j - 1] * j % q
    gamma = 1
    for j in range(1, R + 1):
        gamma = gamma * (x0 - j) % q
    den = []
    for r in range(1, R + 1):
        d = fact[r - 1] * fact[R - r] % q
        if (R - r) & 1:
            d = -d % q
        den.append(d * (x0 - r) % q)
    return _arr([gamma * v % q for v in _batch_inv(den, q)])


def bipoly_mul(a, b, q):
    A, B = _ints(a), _ints(b)
    dE, dB = len(A) - 1, len(A[0]) - 1
    out = [[0] * (dB + 1) for _ in range(dE + 1)]
    for i1, row in enumerate(A):
        for j1, x in enumerate(row):
            if not x:
                continue
            for i2 in range(dE + 1 - i1):
                brow = B[i2]
                orow = out[i1 + i2]
                for j2 in range(dB + 1 - j1):
                    orow[j1 + j2] += x * brow[j2]
    return _arr([[v % q for v in row] for row in out])


def sieve_extract(g, t, q):
    table = np.asarray(g, dtype=np.uint64)
    size = table.shape[0]
    if size & (size - 1):
        raise ValueError("table length must be a power of two")
    nE = size.bit_length() - 1
    one = np.zeros(table.shape[1:], dtype=np.uint64)
    one[0, 0] = 1
    total = 0
    for Y in range(size):
        base, acc, e = table[Y], one, t
        while e:
            if e & 1:
                acc = bipoly_mul(acc, base, q)
            e >>= 1
            if e:
                base = bipoly_mul(base, base, q)
        c = int(acc[-1, -1])
        total += -c if (nE - bin(Y).count("1")) & 1 else c
    return total % q


def form62_contract(chi, alpha, beta, gamma, q):
    c = np.asarray(chi, dtype=np.uint64)

    def mm(X, Y):
        return matmul(X, Y, q)

    def hd(X, Y):
        return hadamard(X, Y, q)

    H = mm(c[3], hd(c[12], alpha).T)
    A = mm(hd(c[2], H), c[6].T)
    K = mm(c[8], hd(beta, c[14]).T)
    B = mm(hd(c[7], K), c[10].T)
    L = mm(c[9], hd(gamma, c[13]))
    C = mm(c[4], hd(c[11], L).T)
    Q = mm(hd(c[1], C), hd(c[5], B).T)
    total = hd(hd(c[0], A), Q).astype(object).sum()
    return int(total) % q
