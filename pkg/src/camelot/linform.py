"""The <6,2>-linear form

    X = sum_{a1..a6} prod_{s<t} chi^{(s,t)}[a_s, a_t]

evaluated four ways: literally, through three N^2 x N^2 matrices, through
the O(N^2)-space circuit driven by a trilinear decomposition, and as the
proof polynomial P(x) whose values at x = 1..R sum to X.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from . import kernels
from .decomp import TriDecomp, _combined_to_matrix
from .field import ModulusTooSmall, _residue

PAIRS = tuple(itertools.combinations(range(1, 7), 2))
PAIR_INDEX = {p: i for i, p in enumerate(PAIRS)}

DIRECT_GUARD = 16


class ChiFamily:
    """Fifteen N x N matrices chi^{(s,t)}, 1 <= s < t <= 6.

    Entries are arbitrary Python ints; they are reduced mod q on use.
    """

    def __init__(self, mats: Sequence):
        if len(mats) != 15:
            raise ValueError("a chi family has exactly 15 members")
        arrs = [np.asarray(m, dtype=object) for m in mats]
        N = arrs[0].shape[0]
        if any(a.shape != (N, N) for a in arrs):
            raise ValueError("all members must be N x N with the same N")
        self.mats = np.stack(arrs)
        self.N = N

    @classmethod
    def single(cls, chi) -> "ChiFamily":
        return cls([chi] * 15)

    def __getitem__(self, pair: tuple[int, int]) -> np.ndarray:
        return self.mats[PAIR_INDEX[pair]]

    def mod(self, q: int) -> np.ndarray:
        return (self.mats % q).astype(np.uint64)

    def padded(self, N: int) -> "ChiFamily":
        if N < self.N:
            raise ValueError("cannot pad to a smaller dimension")
        if N == self.N:
            return self
        out = np.zeros((15, N, N), dtype=object)
        out[:, : self.N, : self.N] = self.mats
        return ChiFamily(list(out))


def form62_direct(chi: ChiFamily, q: int | None = None, guard: int = DIRECT_GUARD) -> int:
    """Literal six-fold sum; exact over Z when q is None."""
    N = chi.N
    if N > guard:
        raise ValueError(f"direct evaluation refused for N={N} > {guard}")
    c = {p: chi[p] for p in PAIRS}
    total = 0
    rng = range(N)
    # the inner triple (a4, a5, a6) is summed as one N^3 tensor
    inner = (c[(4, 5)][:, :, None] * c[(4, 6)][:, None, :] * c[(5, 6)][None, :, :])
    for a1, a2, a3 in itertools.product(rng, rng, rng):
        head = c[(1, 2)][a1, a2] * c[(1, 3)][a1, a3] * c[(2, 3)][a2, a3]
        if not head:
            continue
        u4 = c[(1, 4)][a1] * c[(2, 4)][a2] * c[(3, 4)][a3]
        u5 = c[(1, 5)][a1] * c[(2, 5)][a2] * c[(3, 5)][a3]
        u6 = c[(1, 6)][a1] * c[(2, 6)][a2] * c[(3, 6)][a3]
        total += head * (inner * u4[:, None, None] * u5[None, :, None] * u6[None, None, :]).sum()
    total = int(total)
    return total % q if q is not None else total


def form62_np(chi: ChiFamily, q: int) -> int:
    """Three N^2 x N^2 matrices U, S, T and one product."""
    N = chi.N
    c = chi.mod(q)
    g = lambda s, t: c[PAIR_INDEX[(s, t)]].astype(object)  # noqa: E731

    # U[(a,b),(c,d)], S[(a,b),(e,f)], T[(c,d),(e,f)]
    U = (g(1, 2)[:, :, None, None] * g(1, 3)[:, None, :, None] * g(1, 4)[:, None, None, :]
         * g(2, 3)[None, :, :, None] * g(2, 4)[None, :, None, :])
    S = (g(1, 5)[:, None, :, None] * g(1, 6)[:, None, None, :] * g(2, 5)[None, :, :, None]
         * g(2, 6)[None, :, None, :] * g(5, 6)[None, None, :, :])
    T = (g(3, 4)[:, :, None, None] * g(3, 5)[:, None, :, None] * g(3, 6)[:, None, None, :]
         * g(4, 5)[None, :, :, None] * g(4, 6)[None, :, None, :])
    n2 = N * N
    U = (U.reshape(n2, n2) % q).astype(np.uint64)
    S = (S.reshape(n2, n2) % q).astype(np.uint64)
    T = (T.reshape(n2, n2) % q).astype(np.uint64)
    V = kernels.matmul(S, T.T.copy(), q)
    return int(kernels.hadamard(U, V, q).astype(object).sum()) % q


def _prepare(chi: ChiFamily, dec: TriDecomp) -> ChiFamily:
    if dec.N < chi.N:
        raise ValueError(f"decomposition covers N={dec.N} < {chi.N}")
    return chi.padded(dec.N)


def form62_term(chi_mod: np.ndarray, alpha, beta, gamma, q: int) -> int:
    """P for one set of coefficient matrices (one r, or one x0)."""
    return kernels.form62_contract(chi_mod, alpha, beta, gamma, q)


def form62_circuit(chi: ChiFamily, dec: TriDecomp, q: int) -> int:
    """sum_r P(r), each term in O(N^2) working space."""
    c = _prepare(chi, dec).mod(q)
    total = 0
    unit = np.zeros(dec.R, dtype=np.uint64)
    for r in range(dec.R):
        unit[r] = 1
        total += form62_term(c, dec.coeff_matrix("alpha", unit, q),
                             dec.coeff_matrix("beta", unit, q),
                             dec.coeff_matrix("gamma", unit, q), q)
        unit[r] = 0
    return total % q


class Form62Proof:
    """Evaluator of the proof polynomial P(x) of degree <= 3(R - 1).

    P(r) for r in 1..R is the circuit's r-th term.
    """

    def __init__(self, chi: ChiFamily, dec: TriDecomp, q: int):
        if q < 3 * dec.R + 1:
            raise ModulusTooSmall(f"need q >= 3R+1 = {3 * dec.R + 1}")
        self.dec = dec
        self.q = q
        self.chi = _prepare(chi, dec).mod(q)

    @property
    def degree(self) -> int:
        return 3 * (self.dec.R - 1)

    def __call__(self, x0) -> int:
        q = self.q
        lam = kernels.lagrange_basis(self.dec.R, _residue(x0, q), q)
        return form62_term(self.chi,
                           self.dec.coeff_matrix("alpha", lam, q),
                           self.dec.coeff_matrix("beta", lam, q),
                           self.dec.coeff_matrix("gamma", lam, q), q)

    def many(self, xs: Sequence[int], chunk: int = 64) -> list[int]:
        """Evaluate at several points, pushing them through Yates as lanes."""
        q, dec = self.q, self.dec
        out = []
        for lo in range(0, len(xs), chunk):
            pts = xs[lo: lo + chunk]
            lam = np.stack([kernels.lagrange_basis(dec.R, _residue(x, q), q) for x in pts], axis=1)
            flats = [kernels.yates(dec.table_mod(w, q), lam, dec.t, q)
                     for w in ("alpha", "beta", "gamma")]
            for i in range(len(pts)):
                a, b, c = (_combined_to_matrix(f[:, i], dec.N0, dec.t) for f in flats)
                out.append(form62_term(self.chi, a, b, c, q))
        return out


def form62_proof_eval(chi: ChiFamily, dec: TriDecomp, x0, q: int) -> int:
    return Form62Proof(chi, dec, q)(x0)
