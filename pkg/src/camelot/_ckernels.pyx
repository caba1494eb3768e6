# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prime-field kernels. Same signatures as :mod:`camelot._pykernels`."""

import numpy as np

from libc.stdint cimport uint64_t, int64_t


cdef extern from "camelot_kernels.h" nogil:
    uint64_t cm_horner(const uint64_t *c, int64_t n, uint64_t x, uint64_t q)
    int cm_matmul(const uint64_t *A, const uint64_t *B, uint64_t *C,
                  int64_t n, int64_t k, int64_t m, uint64_t q)
    int cm_yates(const uint64_t *base, int64_t t, int64_t s, const uint64_t *x,
                  int64_t k, int64_t W, uint64_t *out, uint64_t *buf0,
                  uint64_t *buf1, uint64_t q)
    int cm_poly_mul(const uint64_t *a, int64_t na, const uint64_t *b, int64_t nb,
                    uint64_t *out, uint64_t q)
    void cm_poly_divmod(uint64_t *rem, int64_t na, const uint64_t *b, int64_t nb,
                        uint64_t *quot, uint64_t q)
    int cm_interpolate(const uint64_t *xs, const uint64_t *ys, int64_t n,
                       uint64_t *out, uint64_t q)
    int cm_lagrange_basis(int64_t R, uint64_t x0, uint64_t *out, uint64_t q)
    void cm_bipoly_mul(const uint64_t *a, const uint64_t *b, uint64_t *out,
                       int64_t dE, int64_t dB, uint64_t q)
    int cm_sieve_extract(const uint64_t *g, int64_t nE, int64_t dE, int64_t dB,
                         int64_t t, uint64_t q, uint64_t *result)
    int cm_form62(const uint64_t *chi, const uint64_t *al, const uint64_t *be,
                  const uint64_t *ga, int64_t N, uint64_t q, uint64_t *result)


NAME = "cython"

cdef inline object _u64(object a):
    return np.ascontiguousarray(a, dtype=np.uint64)


def horner(coeffs, x, q):
    cdef const uint64_t[::1] c = _u64(coeffs)
    cdef uint64_t xx = x, qq = q, r
    with nogil:
        r = cm_horner(&c[0] if c.shape[0] else NULL, c.shape[0], xx, qq)
    return int(r)


def horner_many(coeffs, xs, q):
    cdef const uint64_t[::1] c = _u64(coeffs)
    cdef const uint64_t[::1] pts = _u64(xs)
    out = np.empty(pts.shape[0], dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef uint64_t qq = q
    cdef Py_ssize_t i
    cdef const uint64_t *cp = &c[0] if c.shape[0] else NULL
    with nogil:
        for i in range(pts.shape[0]):
            o[i] = cm_horner(cp, c.shape[0], pts[i], qq)
    return out


def matmul(A, B, q):
    cdef const uint64_t[:, ::1] a = _u64(A)
    cdef const uint64_t[:, ::1] b = _u64(B)
    if a.shape[1] != b.shape[0]:
        raise ValueError("inner dimensions differ")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return out
    cdef uint64_t[:, ::1] o = out
    cdef int rc
    cdef uint64_t qq = q
    with nogil:
        rc = cm_matmul(&a[0, 0], &b[0, 0], &o[0, 0],
                       a.shape[0], a.shape[1], b.shape[1], qq)
    if rc:
        raise MemoryError
    return out


def hadamard(A, B, q):
    a = _u64(A)
    b = _u64(B)
    return ((a.astype(object) * b.astype(object)) % q).astype(np.uint64)


def yates(base, x, k, q):
    cdef const uint64_t[:, ::1] bm = _u64(base)
    xa = _u64(x)
    squeeze = xa.ndim == 1
    if squeeze:
        xa = xa.reshape(-1, 1)
    cdef const uint64_t[:, ::1] xv = xa
    cdef int64_t t = bm.shape[0], s = bm.shape[1], W = xv.shape[1], kk = k
    if xv.shape[0] != int(s) ** int(kk):
        raise ValueError("input length must be s**k")
    cdef int64_t big = int(max(t, s)) ** int(kk) * int(W)
    cdef uint64_t qq = q
    out = np.empty((int(t) ** int(kk), W), dtype=np.uint64)
    buf0 = np.empty(big, dtype=np.uint64)
    buf1 = np.empty(big, dtype=np.uint64)
    cdef uint64_t[:, ::1] o = out
    cdef uint64_t[::1] b0 = buf0
    cdef uint64_t[::1] b1 = buf1
    if W == 0:
        return out[:, 0] if squeeze else out
    cdef int rc
    with nogil:
        rc = cm_yates(&bm[0, 0], t, s, &xv[0, 0], kk, W, &o[0, 0], &b0[0], &b1[0], qq)
    if rc:
        raise MemoryError()
    return out[:, 0].copy() if squeeze else out


def poly_mul(a, b, q):
    cdef const uint64_t[::1] av = _u64(a)
    cdef const uint64_t[::1] bv = _u64(b)
    if av.shape[0] == 0 or bv.shape[0] == 0:
        return np.zeros(0, dtype=np.uint64)
    out = np.empty(av.shape[0] + bv.shape[0] - 1, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef int rc
    cdef uint64_t qq = q
    with nogil:
        rc = cm_poly_mul(&av[0], av.shape[0], &bv[0], bv.shape[0], &o[0], qq)
    if rc:
        raise MemoryError
    return out


def poly_divmod(a, b, q):
    """Quotient and remainder; ``b`` must have a nonzero last entry."""
    rem = np.array(a, dtype=np.uint64)
    cdef const uint64_t[::1] bv = _u64(b)
    cdef int64_t na = rem.shape[0], nb = bv.shape[0]
    if nb == 0 or bv[nb - 1] == 0:
        raise ZeroDivisionError("divisor has zero leading coefficient")
    if na < nb:
        return np.zeros(0, dtype=np.uint64), rem
    quot = np.zeros(na - nb + 1, dtype=np.uint64)
    cdef uint64_t[::1] r = rem
    cdef uint64_t[::1] qv = quot
    cdef uint64_t qq = q
    with nogil:
        cm_poly_divmod(&r[0], na, &bv[0], nb, &qv[0], qq)
    return quot, rem[: nb - 1].copy()


def interpolate(xs, ys, q):
    cdef const uint64_t[::1] xv = _u64(xs)
    cdef const uint64_t[::1] yv = _u64(ys)
    cdef int64_t n = xv.shape[0]
    out = np.zeros(n, dtype=np.uint64)
    if n == 0:
        return out
    cdef uint64_t[::1] o = out
    cdef int rc
    cdef uint64_t qq = q
    with nogil:
        rc = cm_interpolate(&xv[0], &yv[0], n, &o[0], qq)
    if rc:
        raise MemoryError
    return out


def lagrange_basis(R, x0, q):
    out = np.empty(R, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef int rc
    cdef int64_t RR = R
    cdef uint64_t qq = q, xx = x0 % q
    if RR == 0:
        return out
    with nogil:
        rc = cm_lagrange_basis(RR, xx, &o[0], qq)
    if rc:
        raise MemoryError
    return out


def bipoly_mul(a, b, q):
    cdef const uint64_t[:, ::1] av = _u64(a)
    cdef const uint64_t[:, ::1] bv = _u64(b)
    if av.shape[0] != bv.shape[0] or av.shape[1] != bv.shape[1]:
        raise ValueError("bivariate operands must share bounds")
    out = np.empty((av.shape[0], av.shape[1]), dtype=np.uint64)
    cdef uint64_t[:, ::1] o = out
    cdef uint64_t qq = q
    with nogil:
        cm_bipoly_mul(&av[0, 0], &bv[0, 0], &o[0, 0], av.shape[0] - 1, av.shape[1] - 1, qq)
    return out


def sieve_extract(g, t, q):
    cdef const uint64_t[:, :, ::1] gv = _u64(g)
    size = int(gv.shape[0])
    if size & (size - 1):
        raise ValueError("table length must be a power of two")
    cdef int64_t nE = size.bit_length() - 1
    cdef uint64_t result = 0, qq = q
    cdef int64_t tt = t
    cdef int rc
    with nogil:
        rc = cm_sieve_extract(&gv[0, 0, 0], nE, gv.shape[1] - 1, gv.shape[2] - 1,
                              tt, qq, &result)
    if rc:
        raise MemoryError
    return int(result)


def form62_contract(chi, alpha, beta, gamma, q):
    cdef const uint64_t[:, :, ::1] cv = _u64(chi)
    cdef const uint64_t[:, ::1] av = _u64(alpha)
    cdef const uint64_t[:, ::1] bv = _u64(beta)
    cdef const uint64_t[:, ::1] gv = _u64(gamma)
    cdef int64_t N = av.shape[0]
    cdef uint64_t result = 0, qq = q
    cdef int rc
    with nogil:
        rc = cm_form62(&cv[0, 0, 0], &av[0, 0], &bv[0, 0], &gv[0, 0], N, qq, &result)
    if rc:
        raise MemoryError
    return int(result)
