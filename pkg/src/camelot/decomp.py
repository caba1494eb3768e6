"""Kronecker-structured trilinear decompositions of matrix multiplication.

Convention: for N x N matrices u, v, w,

    sum_{d,e,f} u[d,e] v[e,f] w[d,f] = sum_r (alpha(r).u) (beta(r).v) (gamma(r).w)

so gamma(r)[d,f] is the weight of product term r in output entry (d,f).
Base tables have shape (N0*N0, R0) with row index d*N0 + e.

A power-t decomposition indexes r in [R0^t] by base-R0 digits (most
significant first) and matrix rows d in [N0^t] by base-N0 digits; the
coefficient is the product of base coefficients over digit positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels

_WORD = 1 << 63


@dataclass(frozen=True)
class TriDecomp:
    N0: int
    R0: int
    t: int
    alpha0: tuple
    beta0: tuple
    gamma0: tuple
    name: str = "custom"
    _mod_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        for tab in (self.alpha0, self.beta0, self.gamma0):
            if len(tab) != self.N0 * self.N0 or any(len(row) != self.R0 for row in tab):
                raise ValueError("base tables must have shape (N0^2, R0)")
        if self.N0 ** self.t >= _WORD or self.R0 ** self.t >= _WORD:
            raise OverflowError("Kronecker power exceeds a machine word")

    @property
    def N(self) -> int:
        return self.N0 ** self.t

    @property
    def R(self) -> int:
        return self.R0 ** self.t

    @property
    def omega(self) -> float:
        """Effective exponent log R0 / log N0."""
        return 3.0 if self.N0 == 1 else math.log(self.R0) / math.log(self.N0)

    def table(self, which: str) -> tuple:
        return {"alpha": self.alpha0, "beta": self.beta0, "gamma": self.gamma0}[which]

    def coeff(self, which: str, d: int, e: int, r: int) -> int:
        """Integer coefficient of entry (d, e) in term r (r is 0-based)."""
        tab = self.table(which)
        out = 1
        for _ in range(self.t):
            d, dj = divmod(d, self.N0)
            e, ej = divmod(e, self.N0)
            r, rj = divmod(r, self.R0)
            out *= tab[dj * self.N0 + ej][rj]
            if not out:
                break
        return out

    def table_mod(self, which: str, q: int) -> np.ndarray:
        key = (which, q)
        base = self._mod_cache.get(key)
        if base is None:
            base = np.array([[v % q for v in row] for row in self.table(which)], dtype=np.uint64)
            self._mod_cache[key] = base
        return base

    def coeff_matrix(self, which: str, weights, q: int) -> np.ndarray:
        """N x N matrix sum_r weights[r] * which(r) mod q.

        One classical Yates pass over the base table, then a digit
        permutation from (c_1..c_t), c_j = d_j*N0 + e_j, to (d, e).
        """
        base = self.table_mod(which, q)
        flat = kernels.yates(base, np.asarray(weights, dtype=np.uint64), self.t, q)
        return _combined_to_matrix(flat, self.N0, self.t)

    def dense(self, which: str) -> np.ndarray:
        """Integer array of shape (N, N, R) (small t only)."""
        tab = np.array(self.table(which), dtype=np.int64)
        M = np.ones((1, 1), dtype=np.int64)
        for _ in range(self.t):
            M = np.kron(M, tab)
        out = np.empty((self.N, self.N, self.R), dtype=np.int64)
        for r in range(self.R):
            out[:, :, r] = _combined_to_matrix(M[:, r], self.N0, self.t)
        return out


def _combined_to_matrix(flat, N0: int, t: int) -> np.ndarray:
    a = np.asarray(flat).reshape((N0, N0) * t)
    order = list(range(0, 2 * t, 2)) + list(range(1, 2 * t, 2))
    return np.ascontiguousarray(a.transpose(order)).reshape(N0 ** t, N0 ** t)


def strassen_base() -> TriDecomp:
    # rows: a11 a12 a21 a22 (row-major); columns: the seven products
    alpha = ((1, 0, 1, 0, 1, -1, 0),
             (0, 0, 0, 0, 1, 0, 1),
             (0, 1, 0, 0, 0, 1, 0),
             (1, 1, 0, 1, 0, 0, -1))
    beta = ((1, 1, 0, -1, 0, 1, 0),
            (0, 0, 1, 0, 0, 1, 0),
            (0, 0, 0, 1, 0, 0, 1),
            (1, 0, -1, 0, 1, 0, 1))
    gamma = ((1, 0, 0, 1, -1, 0, 1),
             (0, 0, 1, 0, 1, 0, 0),
             (0, 1, 0, 1, 0, 0, 0),
             (1, -1, 1, 0, 0, 1, 0))
    return TriDecomp(2, 7, 1, alpha, beta, gamma, "strassen")


def naive_base(n0: int) -> TriDecomp:
    if n0 < 1:
        raise ValueError("n0 must be positive")
    R0 = n0 ** 3
    alpha = [[0] * R0 for _ in range(n0 * n0)]
    beta = [[0] * R0 for _ in range(n0 * n0)]
    gamma = [[0] * R0 for _ in range(n0 * n0)]
    r = 0
    for i in range(n0):
        for j in range(n0):
            for k in range(n0):
                alpha[i * n0 + j][r] = 1
                beta[j * n0 + k][r] = 1
                gamma[i * n0 + k][r] = 1
                r += 1
    as_t = lambda m: tuple(tuple(row) for row in m)  # noqa: E731
    return TriDecomp(n0, R0, 1, as_t(alpha), as_t(beta), as_t(gamma), f"naive{n0}")


def kronecker_power(base: TriDecomp, t: int) -> TriDecomp:
    if t < 1:
        raise ValueError("power must be >= 1")
    if base.t != 1:
        raise ValueError("expected a base (power-1) decomposition")
    return TriDecomp(base.N0, base.R0, t, base.alpha0, base.beta0, base.gamma0, base.name)


def verify_decomposition(dec: TriDecomp, n: int | None = None) -> bool:
    """Check the trilinear identity on every triple of unit matrices."""
    n = dec.N if n is None else n
    if n != dec.N:
        raise ValueError("n must equal dec.N")
    if n > 8:
        raise ValueError("verification is limited to N <= 8")
    a = dec.dense("alpha").reshape(n * n, -1)
    b = dec.dense("beta").reshape(n * n, -1)
    c = dec.dense("gamma").reshape(n * n, -1)
    T = np.einsum("ar,br,cr->abc", a, b, c)
    want = np.zeros((n,) * 6, dtype=np.int64)
    for d in range(n):
        for e in range(n):
            want[d, e, e, :, d, :] = np.eye(n, dtype=np.int64)
    return bool(np.array_equal(T.reshape((n,) * 6), want))


NAIVE_MAX = 12


def choose_decomposition(N: int) -> TriDecomp:
    """Cheapest (fewest terms) of the Strassen power covering N and, for
    N <= NAIVE_MAX, the naive base of size N (its tables grow as N^5)."""
    N = max(1, N)
    t = max(1, math.ceil(math.log2(N))) if N > 1 else 1
    candidates = [kronecker_power(strassen_base(), t)]
    if N <= NAIVE_MAX:
        candidates.append(naive_base(N))
    return min(candidates, key=lambda d: (d.R, d.N))


def iter_terms(dec: TriDecomp) -> Iterator[tuple[int, ...]]:
    """Digit tuples (r_1, ..., r_t) of every product term, in rank order."""
    for r in range(dec.R):
        out = []
        for _ in range(dec.t):
            r, rj = divmod(r, dec.R0)
            out.append(rj)
        yield tuple(reversed(out))


def term_count(dec: TriDecomp) -> int:
    return sum(1 for _ in iter_terms(dec))
