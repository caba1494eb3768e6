/* Prime-field kernels for camelot. Residues are uint64 < q < 2^62;
 * products go through unsigned __int128. */
#ifndef CAMELOT_KERNELS_H
#define CAMELOT_KERNELS_H

#include <stdint.h>
#include <stdlib.h>
#include <string.h>

typedef unsigned __int128 cm_u128;

/* q^2 < 2^124, so eight products fit in an accumulator with room to spare */
#define CM_FLUSH 8

static inline uint64_t cm_mul(uint64_t a, uint64_t b, uint64_t q) {
    return (uint64_t)(((cm_u128)a * b) % q);
}

static inline uint64_t cm_add(uint64_t a, uint64_t b, uint64_t q) {
    uint64_t s = a + b;
    return s >= q ? s - q : s;
}

static inline uint64_t cm_sub(uint64_t a, uint64_t b, uint64_t q) {
    return a >= b ? a - b : a + q - b;
}

static inline uint64_t cm_pow(uint64_t a, uint64_t e, uint64_t q) {
    uint64_t r = 1 % q;
    a %= q;
    while (e) {
        if (e & 1) r = cm_mul(r, a, q);
        a = cm_mul(a, a, q);
        e >>= 1;
    }
    return r;
}

static inline uint64_t cm_inv(uint64_t a, uint64_t q) {
    return cm_pow(a, q - 2, q);
}

/* Shoup multiplication by a fixed w < q: wp = floor(w * 2^64 / q) is
 * precomputed once, after which a*w mod q needs no division. */
static inline uint64_t cm_shoup_pre(uint64_t w, uint64_t q) {
    return (uint64_t)(((cm_u128)w << 64) / q);
}

static inline uint64_t cm_mul_shoup(uint64_t a, uint64_t w, uint64_t wp, uint64_t q) {
    uint64_t hi = (uint64_t)(((cm_u128)a * wp) >> 64);
    uint64_t r = a * w - hi * q;
    return r >= q ? r - q : r;
}

static uint64_t cm_horner(const uint64_t *c, int64_t n, uint64_t x, uint64_t q) {
    uint64_t acc = 0;
    x %= q;
    uint64_t xp = cm_shoup_pre(x, q);
    for (int64_t i = n - 1; i >= 0; --i)
        acc = cm_add(cm_mul_shoup(acc, x, xp, q), c[i], q);
    return acc;
}

/* C[n x m] = A[n x k] * B[k x m], row-major. Returns -1 on allocation failure. */
static int cm_matmul(const uint64_t *A, const uint64_t *B, uint64_t *C,
                     int64_t n, int64_t k, int64_t m, uint64_t q) {
    cm_u128 *acc = (cm_u128 *)malloc(sizeof(cm_u128) * (m > 0 ? m : 1));
    if (!acc) return -1;
    for (int64_t i = 0; i < n; ++i) {
        memset(acc, 0, sizeof(cm_u128) * m);
        const uint64_t *arow = A + i * k;
        int pending = 0;
        for (int64_t l = 0; l < k; ++l) {
            uint64_t a = arow[l];
            if (a) {
                const uint64_t *brow = B + l * m;
                for (int64_t j = 0; j < m; ++j) acc[j] += (cm_u128)a * brow[j];
                if (++pending == CM_FLUSH) {
                    for (int64_t j = 0; j < m; ++j) acc[j] %= q;
                    pending = 0;
                }
            }
        }
        uint64_t *crow = C + i * m;
        for (int64_t j = 0; j < m; ++j) crow[j] = (uint64_t)(acc[j] % q);
    }
    free(acc);
    return 0;
}

static void cm_hadamard(const uint64_t *A, const uint64_t *B, uint64_t *C,
                        int64_t n, uint64_t q) {
    for (int64_t i = 0; i < n; ++i) C[i] = cm_mul(A[i], B[i], q);
}

static void cm_transpose(const uint64_t *A, uint64_t *T, int64_t n) {
    for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < n; ++j) T[j * n + i] = A[i * n + j];
}

/* Classical Yates: out[t^k x W] = (base^{(x)k}) x[s^k x W], base is t x s
 * row-major, digit 1 most significant. buf0/buf1 need max(t,s)^k * W slots. */
static int cm_yates(const uint64_t *base, int64_t t, int64_t s,
                    const uint64_t *x, int64_t k, int64_t W,
                    uint64_t *out, uint64_t *buf0, uint64_t *buf1, uint64_t q) {
    if (k == 0) {
        memcpy(out, x, sizeof(uint64_t) * W);
        return 0;
    }
    int64_t S = W;
    for (int64_t l = 0; l < k; ++l) S *= s;
    /* accumulator row of the largest inner block, s^{k-1} * W */
    cm_u128 *acc = (cm_u128 *)malloc(sizeof(cm_u128) * (S / s));
    if (!acc) return -1;
    int64_t P = 1;
    const uint64_t *src = x;
    uint64_t *dst = buf0;
    for (int64_t lvl = 1; lvl <= k; ++lvl) {
        S /= s; /* inner block size s^{k-lvl} * W */
        if (lvl == k) dst = out;
        for (int64_t p = 0; p < P; ++p) {
            const uint64_t *in_blk = src + p * s * S;
            uint64_t *out_blk = dst + p * t * S;
            for (int64_t i = 0; i < t; ++i) {
                const uint64_t *brow = base + i * s;
                int pending = 0;
                memset(acc, 0, sizeof(cm_u128) * S);
                for (int64_t j = 0; j < s; ++j) {
                    uint64_t a = brow[j];
                    if (!a) continue;
                    const uint64_t *in = in_blk + j * S;
                    for (int64_t c = 0; c < S; ++c) acc[c] += (cm_u128)a * in[c];
                    if (++pending == CM_FLUSH) {
                        for (int64_t c = 0; c < S; ++c) acc[c] %= q;
                        pending = 0;
                    }
                }
                uint64_t *o = out_blk + i * S;
                for (int64_t c = 0; c < S; ++c) o[c] = (uint64_t)(acc[c] % q);
            }
        }
        P *= t;
        src = dst;
        dst = (dst == buf0) ? buf1 : buf0;
    }
    free(acc);
    return 0;
}

/* out[0 .. na+nb-2] = a * b */
static int cm_poly_mul(const uint64_t *a, int64_t na, const uint64_t *b, int64_t nb,
                       uint64_t *out, uint64_t q) {
    int64_t no = na + nb - 1;
    cm_u128 *acc = (cm_u128 *)calloc(no, sizeof(cm_u128));
    if (!acc) return -1;
    int pending = 0;
    for (int64_t i = 0; i < na; ++i) {
        uint64_t ai = a[i];
        if (!ai) continue;
        cm_u128 *row = acc + i;
        for (int64_t j = 0; j < nb; ++j) row[j] += (cm_u128)ai * b[j];
        if (++pending == CM_FLUSH) {
            for (int64_t j = 0; j < no; ++j) acc[j] %= q;
            pending = 0;
        }
    }
    for (int64_t j = 0; j < no; ++j) out[j] = (uint64_t)(acc[j] % q);
    free(acc);
    return 0;
}

/* In-place long division: rem holds the dividend (length na) on entry and
 * the remainder in its first nb-1 slots on exit. b[nb-1] must be nonzero. */
static void cm_poly_divmod(uint64_t *rem, int64_t na, const uint64_t *b, int64_t nb,
                           uint64_t *quot, uint64_t q) {
    uint64_t lead_inv = cm_inv(b[nb - 1], q);
    for (int64_t i = na - nb; i >= 0; --i) {
        uint64_t coef = cm_mul(rem[i + nb - 1], lead_inv, q);
        quot[i] = coef;
        if (!coef) continue;
        uint64_t cp = cm_shoup_pre(coef, q);
        for (int64_t j = 0; j < nb; ++j)
            rem[i + j] = cm_sub(rem[i + j], cm_mul_shoup(b[j], coef, cp, q), q);
    }
}

/* Montgomery batch inversion; every vals[i] must be nonzero. */
static int cm_batch_inv(const uint64_t *vals, uint64_t *out, int64_t n, uint64_t q) {
    if (n == 0) return 0;
    uint64_t *pre = (uint64_t *)malloc(sizeof(uint64_t) * n);
    if (!pre) return -1;
    uint64_t acc = 1;
    for (int64_t i = 0; i < n; ++i) { pre[i] = acc; acc = cm_mul(acc, vals[i], q); }
    uint64_t inv = cm_inv(acc, q);
    for (int64_t i = n - 1; i >= 0; --i) {
        out[i] = cm_mul(inv, pre[i], q);
        inv = cm_mul(inv, vals[i], q);
    }
    free(pre);
    return 0;
}

/* Lagrange interpolation through n distinct points, O(n^2). out has n slots. */
static int cm_interpolate(const uint64_t *xs, const uint64_t *ys, int64_t n,
                          uint64_t *out, uint64_t q) {
    uint64_t *g = (uint64_t *)calloc(n + 1, sizeof(uint64_t));
    uint64_t *den = (uint64_t *)malloc(sizeof(uint64_t) * (n > 0 ? n : 1));
    uint64_t *w = (uint64_t *)malloc(sizeof(uint64_t) * (n > 0 ? n : 1));
    uint64_t *num = (uint64_t *)malloc(sizeof(uint64_t) * (n > 0 ? n : 1));
    if (!g || !den || !w || !num) { free(g); free(den); free(w); free(num); return -1; }
    /* g = prod (x - x_i) */
    g[0] = 1;
    for (int64_t i = 0; i < n; ++i) {
        uint64_t neg = cm_sub(0, xs[i] % q, q);
        uint64_t np_ = cm_shoup_pre(neg, q);
        for (int64_t j = i + 1; j >= 1; --j)
            g[j] = cm_add(g[j - 1], cm_mul_shoup(g[j], neg, np_, q), q);
        g[0] = cm_mul_shoup(g[0], neg, np_, q);
    }
    /* den[i] = g'(x_i) = prod_{j != i} (x_i - x_j) */
    for (int64_t i = 0; i < n; ++i) {
        uint64_t xi = xs[i] % q, xp = cm_shoup_pre(xi, q), acc = 0;
        for (int64_t j = n; j >= 1; --j)
            acc = cm_add(cm_mul_shoup(acc, xi, xp, q), cm_mul(g[j], (uint64_t)j % q, q), q);
        den[i] = acc;
    }
    if (cm_batch_inv(den, w, n, q)) { free(g); free(den); free(w); free(num); return -1; }
    memset(out, 0, sizeof(uint64_t) * n);
    for (int64_t i = 0; i < n; ++i) {
        uint64_t wi = cm_mul(w[i], ys[i] % q, q);
        if (!wi) continue;
        uint64_t xi = xs[i] % q, xp = cm_shoup_pre(xi, q), wp = cm_shoup_pre(wi, q);
        /* num = g / (x - x_i), synthetic division from the top */
        uint64_t carry = 0;
        for (int64_t j = n; j >= 1; --j) {
            carry = cm_add(g[j], cm_mul_shoup(carry, xi, xp, q), q);
            num[j - 1] = carry;
        }
        for (int64_t j = 0; j < n; ++j) out[j] = cm_add(out[j], cm_mul_shoup(num[j], wi, wp, q), q);
    }
    free(g); free(den); free(w); free(num);
    return 0;
}

/* Lambda_r(x0) for nodes 1..R into out[0..R-1]; requires q > R. */
static int cm_lagrange_basis(int64_t R, uint64_t x0, uint64_t *out, uint64_t q) {
    x0 %= q;
    if (x0 >= 1 && x0 <= (uint64_t)R) {
        memset(out, 0, sizeof(uint64_t) * R);
        out[x0 - 1] = 1;
        return 0;
    }
    uint64_t *fact = (uint64_t *)malloc(sizeof(uint64_t) * R);
    uint64_t *den = (uint64_t *)malloc(sizeof(uint64_t) * R);
    if (!fact || !den) { free(fact); free(den); return -1; }
    fact[0] = 1;
    for (int64_t j = 1; j < R; ++j) fact[j] = cm_mul(fact[j - 1], (uint64_t)j, q);
    uint64_t gamma = 1;
    for (int64_t j = 1; j <= R; ++j) gamma = cm_mul(gamma, cm_sub(x0, (uint64_t)j, q), q);
    for (int64_t r = 1; r <= R; ++r) {
        uint64_t d = cm_mul(fact[r - 1], fact[R - r], q);
        if ((R - r) & 1) d = cm_sub(0, d, q);
        den[r - 1] = cm_mul(d, cm_sub(x0, (uint64_t)r, q), q);
    }
    int rc = cm_batch_inv(den, out, R, q);
    if (!rc)
        for (int64_t r = 0; r < R; ++r) out[r] = cm_mul(out[r], gamma, q);
    free(fact); free(den);
    return rc;
}

/* Truncated bivariate product; a, b, out are (dE+1) x (dB+1) row-major. */
static void cm_bipoly_mul(const uint64_t *a, const uint64_t *b, uint64_t *out,
                          int64_t dE, int64_t dB, uint64_t q) {
    int64_t wB = dB + 1;
    for (int64_t i = 0; i <= dE; ++i)
        for (int64_t j = 0; j <= dB; ++j) {
            cm_u128 acc = 0;
            int pending = 0;
            for (int64_t i1 = 0; i1 <= i; ++i1)
                for (int64_t j1 = 0; j1 <= j; ++j1) {
                    uint64_t x = a[i1 * wB + j1];
                    if (!x) continue;
                    acc += (cm_u128)x * b[(i - i1) * wB + (j - j1)];
                    if (++pending == CM_FLUSH) { acc %= q; pending = 0; }
                }
            out[i * wB + j] = (uint64_t)(acc % q);
        }
}

/* sum_Y (-1)^{|E|-|Y|} [w_E^dE w_B^dB] g(Y)^t over the 2^nE table g. */
static int cm_sieve_extract(const uint64_t *g, int64_t nE, int64_t dE, int64_t dB,
                            int64_t t, uint64_t q, uint64_t *result) {
    int64_t cell = (dE + 1) * (dB + 1);
    uint64_t *base = (uint64_t *)malloc(sizeof(uint64_t) * cell);
    uint64_t *acc = (uint64_t *)malloc(sizeof(uint64_t) * cell);
    uint64_t *tmp = (uint64_t *)malloc(sizeof(uint64_t) * cell);
    if (!base || !acc || !tmp) { free(base); free(acc); free(tmp); return -1; }
    uint64_t total = 0;
    int64_t M = (int64_t)1 << nE;
    for (int64_t Y = 0; Y < M; ++Y) {
        memcpy(base, g + Y * cell, sizeof(uint64_t) * cell);
        memset(acc, 0, sizeof(uint64_t) * cell);
        acc[0] = 1;
        int64_t e = t;
        while (e) {
            if (e & 1) {
                cm_bipoly_mul(acc, base, tmp, dE, dB, q);
                memcpy(acc, tmp, sizeof(uint64_t) * cell);
            }
            e >>= 1;
            if (e) {
                cm_bipoly_mul(base, base, tmp, dE, dB, q);
                memcpy(base, tmp, sizeof(uint64_t) * cell);
            }
        }
        uint64_t c = acc[cell - 1];
        if ((nE - __builtin_popcountll((unsigned long long)Y)) & 1)
            total = cm_sub(total, c, q);
        else
            total = cm_add(total, c, q);
    }
    free(base); free(acc); free(tmp);
    *result = total;
    return 0;
}

/* The fifteen-factor contraction given coefficient matrices evaluated at a
 * point. chi holds 15 N x N matrices in lexicographic pair order
 * (12,13,14,15,16,23,24,25,26,34,35,36,45,46,56). al/be/ga are N x N. */
static int cm_form62(const uint64_t *chi, const uint64_t *al, const uint64_t *be,
                     const uint64_t *ga, int64_t N, uint64_t q, uint64_t *result) {
    int64_t NN = N * N;
    uint64_t *buf = (uint64_t *)malloc(sizeof(uint64_t) * NN * 6);
    if (!buf) return -1;
    uint64_t *X = buf, *Y = buf + NN, *T = buf + 2 * NN;
    uint64_t *A = buf + 3 * NN, *B = buf + 4 * NN, *C = buf + 5 * NN;
#define CHI(k) (chi + (int64_t)(k) * NN)
    int rc = 0;
    /* H[a,d] = sum_e chi15[a,e] (chi45 o alpha)[d,e] */
    cm_hadamard(CHI(12), al, X, NN, q);
    cm_transpose(X, T, N);
    rc |= cm_matmul(CHI(3), T, Y, N, N, N, q);            /* Y = H */
    /* A = (chi14 o H) chi24^T */
    cm_hadamard(CHI(2), Y, X, NN, q);
    cm_transpose(CHI(6), T, N);
    rc |= cm_matmul(X, T, A, N, N, N, q);
    /* K[b,e] = sum_f chi26[b,f] (beta o chi56)[e,f] */
    cm_hadamard(be, CHI(14), X, NN, q);
    cm_transpose(X, T, N);
    rc |= cm_matmul(CHI(8), T, Y, N, N, N, q);            /* Y = K */
    /* B = (chi25 o K) chi35^T */
    cm_hadamard(CHI(7), Y, X, NN, q);
    cm_transpose(CHI(10), T, N);
    rc |= cm_matmul(X, T, B, N, N, N, q);
    /* L[c,f] = sum_d chi34[c,d] (gamma o chi46)[d,f] */
    cm_hadamard(ga, CHI(13), X, NN, q);
    rc |= cm_matmul(CHI(9), X, Y, N, N, N, q);            /* Y = L */
    /* C = chi16 (chi36 o L)^T */
    cm_hadamard(CHI(11), Y, X, NN, q);
    cm_transpose(X, T, N);
    rc |= cm_matmul(CHI(4), T, C, N, N, N, q);
    /* Q = (chi13 o C) (chi23 o B)^T */
    cm_hadamard(CHI(1), C, X, NN, q);
    cm_hadamard(CHI(5), B, Y, NN, q);
    cm_transpose(Y, T, N);
    rc |= cm_matmul(X, T, Y, N, N, N, q);                 /* Y = Q */
    uint64_t total = 0;
    for (int64_t i = 0; i < NN; ++i)
        total = cm_add(total, cm_mul(cm_mul(CHI(0)[i], A[i], q), Y[i], q), q);
#undef CHI
    free(buf);
    *result = total;
    return rc ? -1 : 0;
}

#endif
