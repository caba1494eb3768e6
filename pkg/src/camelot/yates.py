"""Multiplication by Kronecker powers A^{(x)k}: dense, split/sparse, and the
polynomial extension of the split/sparse outer loop.

Index convention used across the package: an index j in [s^k] is read as
k base-s digits (j_1, ..., j_k) with j_1 the most significant. The first
``ell`` digits form the inner part, the remaining ``k - ell`` the outer part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .field import ModulusTooSmall, _residue


@dataclass(frozen=True)
class BaseMatrix:
    """A small t x s integer matrix; entries are mapped into Z_q on demand."""

    entries: tuple
    _mod_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __init__(self, entries):
        rows = tuple(tuple(int(v) for v in row) for row in entries)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("base matrix must be a nonempty rectangle")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "_mod_cache", {})

    @property
    def t(self) -> int:
        return len(self.entries)

    @property
    def s(self) -> int:
        return len(self.entries[0])

    def mod(self, q: int) -> np.ndarray:
        out = self._mod_cache.get(q)
        if out is None:
            out = np.array([[v % q for v in row] for row in self.entries], dtype=np.uint64)
            self._mod_cache[q] = out
        return out

    def transpose(self) -> "BaseMatrix":
        tr = self._mod_cache.get("T")
        if tr is None:
            tr = BaseMatrix(list(zip(*self.entries)))
            self._mod_cache["T"] = tr
        return tr


@dataclass
class SparseVec:
    """Vector of length s^k given by its nonzero support D."""

    s: int
    k: int
    values: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        n = self.s ** self.k
        clean = {}
        for j, v in self.values.items():
            j = int(j)
            if not 0 <= j < n:
                raise ValueError(f"index {j} outside [0, {n})")
            clean[j] = int(v)
        self.values = clean

    @property
    def support(self) -> list[int]:
        return sorted(self.values)

    def dense(self, q: int) -> np.ndarray:
        out = np.zeros(self.s ** self.k, dtype=np.uint64)
        for j, v in self.values.items():
            out[j] = v % q
        return out

    @classmethod
    def from_dense(cls, x: Sequence[int], s: int, k: int) -> "SparseVec":
        return cls(s, k, {j: int(v) for j, v in enumerate(x) if int(v)})


def digits(j: int, base: int, k: int) -> tuple[int, ...]:
    """Base-``base`` digits of j, most significant first."""
    out = []
    for _ in range(k):
        j, r = divmod(j, base)
        out.append(r)
    return tuple(reversed(out))


def default_ell(t: int, support_size: int, k: int) -> int:
    """ceil(log_t |D|), clipped into [0, k]."""
    if support_size < 1:
        raise ValueError("empty support")
    ell, p = 0, 1
    while p < support_size and ell < k:
        p *= t
        ell += 1
    return ell


def yates_classical(A: BaseMatrix, x, k: int, q: int) -> np.ndarray:
    xa = np.asarray(x, dtype=object)
    if xa.shape[0] != A.s ** k:
        raise ValueError(f"input length {xa.shape[0]} != s^k = {A.s ** k}")
    xa = (xa % q).astype(np.uint64)
    return kernels.yates(A.mod(q), xa, k, q)


def _fold_outer(A: BaseMatrix, x: SparseVec, k: int, ell: int, outer_weights: np.ndarray,
                q: int) -> np.ndarray:
    """Collapse the outer digits of x against a weight per outer column index."""
    outer = A.s ** (k - ell)
    inner = np.zeros(A.s ** ell, dtype=object)
    w = outer_weights.tolist()
    for j, v in x.values.items():
        hi, lo = divmod(j, outer)
        inner[hi] += v * w[lo]
    return (inner % q).astype(np.uint64)


def _check_shape(A: BaseMatrix, x: SparseVec, k: int, ell: int | None):
    if x.s != A.s or x.k != k:
        raise ValueError("sparse vector shape does not match (A.s, k)")
    if not x.values:
        raise ValueError("sparse vector has empty support")
    if ell is None:
        ell = default_ell(A.t, len(x.values), k)
    if not 0 <= ell <= k:
        raise ValueError(f"ell={ell} outside [0, {k}]")
    return ell


def yates_split_sparse(A: BaseMatrix, x: SparseVec, k: int, part: Sequence[int] | int, q: int,
                       ell: int | None = None) -> np.ndarray:
    """Entries y_{i_1..i_ell, part} of A^{(x)k} x for one outer index ``part``.

    ``part`` is either the digit tuple (i_{ell+1}, ..., i_k) or its integer
    rank in [0, t^{k-ell}).
    """
    ell = _check_shape(A, x, k, ell)
    m = k - ell
    if isinstance(part, int):
        if not 0 <= part < A.t ** m:
            raise ValueError(f"part {part} outside [0, {A.t ** m})")
        part = digits(part, A.t, m)
    part = tuple(int(p) for p in part)
    if len(part) != m or any(not 0 <= p < A.t for p in part):
        raise ValueError("part digits out of range")
    # weight of outer column index (j_{ell+1..k}) is prod_m alpha_{i_m j_m}
    unit = np.zeros(A.t ** m, dtype=np.uint64)
    rank = 0
    for p in part:
        rank = rank * A.t + p
    unit[rank] = 1
    weights = kernels.yates(A.transpose().mod(q), unit, m, q)
    return kernels.yates(A.mod(q), _fold_outer(A, x, k, ell, weights, q), ell, q)


def yates_poly_extension_eval(A: BaseMatrix, x: SparseVec, k: int, ell: int | None, z0,
                              q: int) -> np.ndarray:
    """The split/sparse part, as a polynomial in the outer index, evaluated at z0.

    Outer index of rank i corresponds to the field value i + 1, so z0 in
    1..t^{k-ell} reproduces :func:`yates_split_sparse` for part z0 - 1.
    """
    ell = _check_shape(A, x, k, ell)
    m = k - ell
    outer = A.t ** m
    if q <= outer:
        raise ModulusTooSmall(f"need q > t^(k-ell) = {outer}")
    phi = kernels.lagrange_basis(outer, _residue(z0, q), q)
    weights = kernels.yates(A.transpose().mod(q), phi, m, q)
    return kernels.yates(A.mod(q), _fold_outer(A, x, k, ell, weights, q), ell, q)


def kronecker_dense(A: BaseMatrix, k: int, q: int) -> np.ndarray:
    """Explicit A^{(x)k} (test oracle)."""
    M = np.ones((1, 1), dtype=object)
    base = np.array(A.entries, dtype=object)
    for _ in range(k):
        M = np.kron(M, base)
    return M % q
