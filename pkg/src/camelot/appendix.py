"""Proof polynomials built by composing a low-degree evaluation formula with
input-interpolating polynomials: orthogonal vectors, #CNFSAT, Hamming
distance distributions, Convolution3SUM, permanents, small-family set
covers, and weighted 2-CSP enumeration through the <6,2>-linear form.

Every evaluator is vectorised over a batch of points (``many``) so the
engine hands it a whole block at once.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .decomp import TriDecomp, choose_decomposition
from .engine import NodeConfig, TaskSpec, crt_values, point_values, solve, window_sum
from .field import poly_interpolate
from .linform import ChiFamily, Form62Proof
from .partition import interpolate_exact

U64 = np.uint64


class _Arith:
    """Elementwise arithmetic mod q on uint64 arrays."""

    def __init__(self, q: int):
        self.q = q
        self.Q = U64(q)

    def mul(self, a, b):
        return kernels.hadamard(a, b, self.q)

    def add(self, a, b):
        return (a + b) % self.Q

    def sub(self, a, b):
        return (a + (self.Q - b)) % self.Q

    def const(self, c, like):
        return np.full(like.shape, c % self.q, dtype=U64)


class BatchEvaluator:
    """Wraps a vector function xs -> P(xs) as the engine's evaluator."""

    def __init__(self, q: int, fn: Callable[[np.ndarray], np.ndarray]):
        self.q = q
        self.fn = fn

    def __call__(self, x0) -> int:
        return int(self.fn(np.array([int(x0) % self.q], dtype=U64))[0])

    def many(self, xs: Sequence[int]) -> list[int]:
        if not len(xs):
            return []
        return [int(v) for v in self.fn(np.array([int(x) % self.q for x in xs], dtype=U64))]


def _column_polys(points: Sequence[int], columns: np.ndarray, q: int) -> list[np.ndarray]:
    """Coefficient arrays of the interpolants of each column through ``points``."""
    out = []
    for j in range(columns.shape[1]):
        p = poly_interpolate(points, [int(v) for v in columns[:, j]], q)
        out.append(p.to_array() if not p.is_zero() else np.zeros(1, dtype=U64))
    return out


def _eval_cols(polys: list[np.ndarray], xs: np.ndarray, q: int) -> list[np.ndarray]:
    return [kernels.horner_many(c, xs, q) for c in polys]


def _bool_matrix(M) -> np.ndarray:
    a = np.asarray(M, dtype=np.int64)
    if a.ndim != 2 or 0 in a.shape:
        raise ValueError("expected a nonempty 2-D matrix")
    if ((a != 0) & (a != 1)).any():
        raise ValueError("Boolean matrix entries must be 0 or 1")
    return a


# -- orthogonal vectors -------------------------------------------------------

def ov_oracle(A, B) -> list[int]:
    a, b = _bool_matrix(A), _bool_matrix(B)
    return [int(((a[i][None, :] * b).sum(axis=1) == 0).sum()) for i in range(a.shape[0])]


def ov_task(A, B, label: str = "ov") -> TaskSpec:
    """c_i = number of rows of B orthogonal to row i of A, i = 1..n."""
    a, b = _bool_matrix(A), _bool_matrix(B)
    n, t = a.shape
    if b.shape[1] != t:
        raise ValueError("A and B need the same number of columns")
    nb = b.shape[0]
    supports = [np.flatnonzero(b[i]).tolist() for i in range(nb)]
    d = (n - 1) * t

    def evaluator(q):
        ar = _Arith(q)
        cols = _column_polys(range(1, n + 1), a, q)

        def fn(xs):
            z = _eval_cols(cols, xs, q)
            one_minus = [ar.sub(ar.const(1, xs), zj) for zj in z]
            total = np.zeros_like(xs)
            for sup in supports:
                term = ar.const(1, xs)
                for j in sup:
                    term = ar.mul(term, one_minus[j])
                total = ar.add(total, term)
            return total
        return BatchEvaluator(q, fn)

    def extract(proofs):
        return crt_values(proofs, point_values(range(1, n + 1)))

    return TaskSpec(label, d, evaluator, extract, bound=nb, min_modulus=max(n, nb) + 2,
                    meta={"n": n, "t": t})


# -- #CNFSAT ------------------------------------------------------------------

@dataclass
class CnfFormula:
    v: int
    clauses: list = field(default_factory=list)  # lists of nonzero ints, DIMACS style

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("variable count must be nonnegative")
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.v:
                    raise ValueError(f"literal {lit} outside 1..{self.v}")


def cnf_oracle(F: CnfFormula, guard: float = 1 << 22) -> int:
    if 2 ** F.v > guard:
        from .graphs import GuardExceeded
        raise GuardExceeded(f"2^{F.v} assignments exceed the oracle guard")
    count = 0
    for bits in itertools.product((False, True), repeat=F.v):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in F.clauses):
            count += 1
    return count


def _falsifies(assign: dict, clause) -> int:
    """1 iff the partial assignment satisfies no literal of the clause."""
    for lit in clause:
        var = abs(lit)
        if var in assign and assign[var] == (lit > 0):
            return 0
    return 1


def cnf_matrices(F: CnfFormula) -> tuple[np.ndarray, np.ndarray, int]:
    """OV matrices for the two variable halves (big-endian rows) and the pad count."""
    v = F.v + (F.v % 2)
    pad = v - F.v
    h = v // 2
    m = len(F.clauses)
    rows = 1 << h
    A = np.zeros((rows, max(m, 1)), dtype=np.int64)
    B = np.zeros((rows, max(m, 1)), dtype=np.int64)
    for i in range(rows):
        bits = [(i >> (h - 1 - k)) & 1 for k in range(h)]
        first = {k + 1: bool(bits[k]) for k in range(h)}
        second = {h + k + 1: bool(bits[k]) for k in range(h)}
        for j, c in enumerate(F.clauses):
            A[i, j] = _falsifies(first, c)
            B[i, j] = _falsifies(second, c)
    if m == 0:
        A[:] = 0
        B[:] = 0
    return A, B, pad


def cnfsat_task(F: CnfFormula) -> TaskSpec:
    A, B, pad = cnf_matrices(F)
    task = ov_task(A, B, label="cnfsat")
    inner = task.extract

    def extract(proofs):
        total = sum(inner(proofs))
        return total >> pad
    task.extract = extract
    task.bound = A.shape[0]
    task.meta["pad"] = pad
    return task


def cnfsat_count(F: CnfFormula, cfg: NodeConfig | None = None, repeats: int = 2) -> int:
    return solve(cnfsat_task(F), cfg, repeats)


# -- Hamming distance distribution --------------------------------------------

def hamming_oracle(A, B) -> list[list[int]]:
    a, b = _bool_matrix(A), _bool_matrix(B)
    t = a.shape[1]
    out = []
    for i in range(a.shape[0]):
        dist = (a[i][None, :] != b).sum(axis=1)
        out.append([int((dist == h).sum()) for h in range(t + 1)])
    return out


def hamming_root_values(t: int, h: int) -> list[int]:
    """Values of H_1..H_t at a point with offset h: {0..t} minus h, ascending."""
    return [v for v in range(t + 1) if v != h]


def hamming_factor(t: int, h: int) -> int:
    return math.prod(h - l for l in range(t + 1) if l != h)


def hamming_task(A, B) -> TaskSpec:
    """P(i(t+1)+h) = prod_{l != h}(h - l) * c_{ih}."""
    a, b = _bool_matrix(A), _bool_matrix(B)
    n, t = a.shape
    if b.shape[1] != t:
        raise ValueError("A and B need the same number of columns")
    pts = [i * (t + 1) + h for i in range(1, n + 1) for h in range(t + 1)]
    acols = np.array([[a[i - 1, j] for j in range(t)] for i in range(1, n + 1) for _ in range(t + 1)],
                     dtype=np.int64).reshape(len(pts), t)
    hcols = np.array([hamming_root_values(t, h) for _ in range(n) for h in range(t + 1)],
                     dtype=np.int64).reshape(len(pts), t)
    brows = b.tolist()
    d = t * (len(pts) - 1)

    def evaluator(q):
        ar = _Arith(q)
        Ap = _column_polys(pts, acols, q)
        Hp = _column_polys(pts, hcols, q)

        def fn(xs):
            z = _eval_cols(Ap, xs, q)
            w = _eval_cols(Hp, xs, q)
            one = ar.const(1, xs)
            total = np.zeros_like(xs)
            for row in brows:
                dist = np.zeros_like(xs)
                for j, bij in enumerate(row):
                    # (1 - z_j) b_ij + z_j (1 - b_ij)
                    dist = ar.add(dist, ar.sub(one, z[j]) if bij else z[j])
                term = one
                for wl in w:
                    term = ar.mul(term, ar.sub(dist, wl))
                total = ar.add(total, term)
            return total
        return BatchEvaluator(q, fn)

    def extract(proofs):
        vals = crt_values(proofs, point_values(pts), signed=True)
        out = [[0] * (t + 1) for _ in range(n)]
        for k, v in enumerate(vals):
            i, h = divmod(k, t + 1)
            f = hamming_factor(t, h)
            if v % f:
                raise ArithmeticError("point value not a multiple of the root factor")
            out[i][h] = v // f
        return out

    bound = b.shape[0] * max(abs(hamming_factor(t, h)) for h in range(t + 1))
    return TaskSpec("hamming", d, evaluator, extract, bound=bound, min_modulus=max(pts) + t + 2,
                    meta={"n": n, "t": t})


# -- Convolution3SUM ----------------------------------------------------------

def conv3sum_oracle(A: Sequence[int]) -> list[int]:
    """c_i = #{l in [n/2] : A[i] + A[l] = A[i + l]} for i in [n/2] (1-based)."""
    n = len(A)
    half = n // 2
    return [sum(1 for l in range(1, half + 1) if A[i - 1] + A[l - 1] == A[i + l - 1])
            for i in range(1, half + 1)]


def sum_bit(a, b, c, ar: _Arith):
    """(1-a)(1-b)c + (1-a)b(1-c) + a(1-b)(1-c) + abc."""
    one = ar.const(1, a)
    na, nb, nc = ar.sub(one, a), ar.sub(one, b), ar.sub(one, c)
    t1 = ar.mul(ar.mul(na, nb), c)
    t2 = ar.mul(ar.mul(na, b), nc)
    t3 = ar.mul(ar.mul(a, nb), nc)
    t4 = ar.mul(ar.mul(a, b), c)
    return ar.add(ar.add(t1, t2), ar.add(t3, t4))


def majority_bit(a, b, c, ar: _Arith):
    """(1-a)bc + a(1-b)c + ab(1-c) + abc."""
    one = ar.const(1, a)
    na, nb, nc = ar.sub(one, a), ar.sub(one, b), ar.sub(one, c)
    t1 = ar.mul(ar.mul(na, b), c)
    t2 = ar.mul(ar.mul(a, nb), c)
    t3 = ar.mul(ar.mul(a, b), nc)
    t4 = ar.mul(ar.mul(a, b), c)
    return ar.add(ar.add(t1, t2), ar.add(t3, t4))


def adder_indicator(y, z, w, ar: _Arith):
    """[y + z = w] on bit vectors (least significant first), as a polynomial."""
    one = ar.const(1, y[0])
    carry = ar.const(0, y[0])
    out = one
    for yj, zj, wj in zip(y, z, w):
        s = sum_bit(yj, zj, carry, ar)
        out = ar.mul(out, ar.add(ar.mul(ar.sub(one, wj), ar.sub(one, s)), ar.mul(wj, s)))
        carry = majority_bit(yj, zj, carry, ar)
    return ar.mul(out, ar.sub(one, carry))


def conv3sum_degree(n: int, t: int) -> int:
    return (n - 1) * (t * t + 4 * t)


def conv3sum_task(A: Sequence[int], t: int) -> TaskSpec:
    """P(i) = c_i for i in [n/2]; the answer is (c_1..c_{n/2}, total)."""
    arr = [int(v) for v in A]
    n = len(arr)
    if n < 2:
        raise ValueError("need at least two array entries")
    if t < 1 or any(v < 0 or v >= 1 << t for v in arr):
        raise ValueError(f"entries must be {t}-bit nonnegative integers")
    half = n // 2
    bits = np.array([[(v >> j) & 1 for j in range(t)] for v in arr], dtype=np.int64)
    d = conv3sum_degree(n, t)

    def evaluator(q):
        ar = _Arith(q)
        cols = _column_polys(range(1, n + 1), bits, q)

        def fn(xs):
            y = _eval_cols(cols, xs, q)
            total = np.zeros_like(xs)
            for l in range(1, half + 1):
                z = [np.full(xs.shape, bits[l - 1, j], dtype=U64) for j in range(t)]
                w = _eval_cols(cols, (xs + U64(l)) % U64(q), q)
                total = ar.add(total, adder_indicator(y, z, w, ar))
            return total
        return BatchEvaluator(q, fn)

    def extract(proofs):
        c = crt_values(proofs, point_values(range(1, half + 1)))
        return c + [sum(c)]

    return TaskSpec("conv3sum", d, evaluator, extract, bound=half, min_modulus=n + 2,
                    meta={"n": n, "t": t})


# -- digit interpolants shared by the permanent and set covers ----------------

def digit_polys(h: int, q: int) -> list[np.ndarray]:
    """D_j(i) = bit j of i (little-endian) for i = 0..2^h - 1."""
    rows = np.array([[(i >> j) & 1 for j in range(h)] for i in range(1 << h)], dtype=np.int64)
    if h == 0:
        return []
    return _column_polys(range(1 << h), rows, q)


def _subset_bits(k: int) -> np.ndarray:
    """(2^k, k) array whose row s lists the bits of s (little-endian)."""
    s = np.arange(1 << k, dtype=np.int64)
    return ((s[:, None] >> np.arange(k)[None, :]) & 1) if k else np.zeros((1, 0), dtype=np.int64)


# -- permanent ----------------------------------------------------------------

def permanent_oracle(M) -> int:
    """Ryser's formula over the integers, O(2^n n^2)."""
    a = [[int(v) for v in row] for row in M]
    n = len(a)
    if n == 0:
        return 1
    total = 0
    for S in range(1 << n):
        cols = [j for j in range(n) if S >> j & 1]
        prod = 1
        for i in range(n):
            prod *= sum(a[i][j] for j in cols)
            if not prod:
                break
        total += (-1) ** (n - len(cols)) * prod
    return total


def permanent_expand(M) -> int:
    """Naive sum over permutations (second oracle)."""
    a = [[int(v) for v in row] for row in M]
    n = len(a)
    return sum(math.prod(a[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def _pad_square(M) -> list[list[int]]:
    a = [[int(v) for v in row] for row in M]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("permanent needs a square matrix")
    if n % 2:
        a = [r + [0] for r in a] + [[0] * n + [1]]
    return a


def permanent_degree(n: int) -> int:
    h = n // 2
    return (n + h) * ((1 << h) - 1)


def permanent_task(M) -> TaskSpec:
    """per M = sum_{i < 2^{n/2}} P(i); odd n gains a unit diagonal block."""
    a = _pad_square(M)
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    h = n // 2
    amax = max(1, max(abs(v) for r in a for v in r))
    A = np.array(a, dtype=object)
    low = A[:, :h]          # columns fed by D(x)
    zb = _subset_bits(n - h)
    # inner row sums over the enumerated half, one row per assignment
    inner = (zb.astype(object) @ A[:, h:].T) if n - h else np.zeros((1, n), dtype=object)
    signs = [(-1) ** (n + int(zb[s].sum())) for s in range(zb.shape[0])]
    d = permanent_degree(n)

    def evaluator(q):
        ar = _Arith(q)
        D = digit_polys(h, q)
        inner_q = (inner % q).astype(U64)
        low_q = (low % q).astype(U64)
        sign_q = [s % q for s in signs]

        def fn(xs):
            z = _eval_cols(D, xs, q)
            one = ar.const(1, xs)
            pre = one
            for zj in z:
                pre = ar.mul(pre, ar.sub(one, ar.add(zj, zj)))
            base = []
            for i in range(n):
                acc = np.zeros_like(xs)
                for j in range(h):
                    if low_q[i, j]:
                        acc = ar.add(acc, ar.mul(z[j], ar.const(int(low_q[i, j]), xs)))
                base.append(acc)
            total = np.zeros_like(xs)
            for s in range(inner_q.shape[0]):
                prod = ar.const(sign_q[s], xs)
                for i in range(n):
                    prod = ar.mul(prod, ar.add(base[i], U64(inner_q[s, i])))
                total = ar.add(total, prod)
            return ar.mul(total, pre)
        return BatchEvaluator(q, fn)

    def extract(proofs):
        (v,) = crt_values(proofs, window_sum(range(1 << h)), signed=True)
        return v

    bound = math.factorial(n) * amax ** n
    return TaskSpec("permanent", d, evaluator, extract, bound=bound, min_modulus=(1 << h) + 2,
                    meta={"n": n})


# -- set covers (small families) ----------------------------------------------

def setcover_oracle(family: Sequence[int], n: int, t: int) -> int:
    """Ordered t-tuples of family members whose union is [n]."""
    full = (1 << n) - 1
    return sum(1 for tup in itertools.product(list(family), repeat=t)
               if (0 if not tup else _or(tup)) == full)


def _or(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def setcover_degree(n: int, t: int) -> int:
    h = (n + 1) // 2
    return ((1 << h) - 1) * (h + t * h)


def setcover_task(family: Sequence[int], n: int, t: int) -> TaskSpec:
    """c_t = sum_{i < 2^h} P(i) with h = ceil(n/2) digit interpolants."""
    fam = [int(X) for X in family]
    if any(X >> n for X in fam):
        raise ValueError("family member outside the universe")
    if t < 0:
        raise ValueError("t must be nonnegative")
    h = (n + 1) // 2
    rest = n - h
    yb = _subset_bits(rest)
    low_masks = [X & ((1 << h) - 1) for X in fam]
    high_masks = [X >> h for X in fam]
    # for each assignment of the enumerated half: which members survive (all high bits set)
    alive = [[k for k, hm in enumerate(high_masks) if hm & ~s == 0] for s in range(1 << rest)]
    signs = [(-1) ** (n + int(yb[s].sum())) for s in range(1 << rest)]
    d = setcover_degree(n, t)

    def evaluator(q):
        ar = _Arith(q)
        D = digit_polys(h, q)

        def fn(xs):
            y = _eval_cols(D, xs, q)
            one = ar.const(1, xs)
            pre = one
            for yj in y:
                pre = ar.mul(pre, ar.sub(one, ar.add(yj, yj)))
            mono = []
            for lm in low_masks:
                v = one
                for j in range(h):
                    if lm >> j & 1:
                        v = ar.mul(v, y[j])
                mono.append(v)
            total = np.zeros_like(xs)
            for s in range(1 << rest):
                inner = np.zeros_like(xs)
                for k in alive[s]:
                    inner = ar.add(inner, mono[k])
                p = one
                for _ in range(t):
                    p = ar.mul(p, inner)
                total = ar.add(total, p if signs[s] > 0 else ar.sub(np.zeros_like(xs), p))
            return ar.mul(total, pre)
        return BatchEvaluator(q, fn)

    def extract(proofs):
        (v,) = crt_values(proofs, window_sum(range(1 << h)), signed=True)
        return v

    bound = max(1, len(fam)) ** t
    return TaskSpec(f"setcover:t={t}", d, evaluator, extract, bound=bound,
                    min_modulus=(1 << h) + 2, meta={"n": n, "t": t})


# -- 2-CSP enumeration by weight ----------------------------------------------

@dataclass
class Constraint:
    u: int
    v: int
    allowed: frozenset | None = None   # pairs (a_u, a_v); None means always satisfied
    weight: int = 1


@dataclass
class Csp2Instance:
    n: int
    sigma: int
    constraints: list = field(default_factory=list)

    def __post_init__(self):
        if self.n <= 0 or self.n % 6:
            raise ValueError("2-CSP enumeration needs 6 | n")
        if self.sigma < 1:
            raise ValueError("alphabet must be nonempty")
        for c in self.constraints:
            if not (0 <= c.u < self.n and 0 <= c.v < self.n) or c.u == c.v:
                raise ValueError(f"constraint on invalid variables ({c.u},{c.v})")
            if c.weight < 0:
                raise ValueError("weights must be nonnegative")

    @property
    def W(self) -> int:
        return max((c.weight for c in self.constraints), default=1)

    @property
    def max_weight(self) -> int:
        return sum(c.weight for c in self.constraints)

    def satisfied(self, c: Constraint, a: Sequence[int]) -> bool:
        return c.allowed is None or (a[c.u], a[c.v]) in c.allowed


def csp_type(inst: Csp2Instance, c: Constraint) -> tuple[int, int]:
    """Lexicographically least (s, t) with both variables in Z_s u Z_t (1-based groups)."""
    g = inst.n // 6
    gu, gv = c.u // g + 1, c.v // g + 1
    for s, t in itertools.combinations(range(1, 7), 2):
        if gu in (s, t) and gv in (s, t):
            return s, t
    raise AssertionError("unreachable")


def csp_oracle(inst: Csp2Instance, guard: float = 1 << 22) -> list[int]:
    if inst.sigma ** inst.n > guard:
        from .graphs import GuardExceeded
        raise GuardExceeded("assignment enumeration exceeds the oracle guard")
    out = [0] * (len(inst.constraints) * inst.W + 1)
    for a in itertools.product(range(inst.sigma), repeat=inst.n):
        out[sum(c.weight for c in inst.constraints if inst.satisfied(c, a))] += 1
    return out


def _group_assignment(idx: int, sigma: int, g: int) -> list[int]:
    """Values of the g variables of a group, first variable most significant."""
    vals = []
    for _ in range(g):
        idx, r = divmod(idx, sigma)
        vals.append(r)
    return vals[::-1]


def csp_exponents(inst: Csp2Instance) -> list[np.ndarray]:
    """f^{(s,t)}[a_s, a_t] = total weight of satisfied type-(s,t) constraints."""
    g = inst.n // 6
    N = inst.sigma ** g
    groups = [_group_assignment(i, inst.sigma, g) for i in range(N)]
    F = [np.zeros((N, N), dtype=np.int64) for _ in range(15)]
    pairs = list(itertools.combinations(range(1, 7), 2))
    for c in inst.constraints:
        s, t = csp_type(inst, c)
        k = pairs.index((s, t))
        for ia in range(N):
            for ib in range(N):
                full = {}
                for off, val in enumerate(groups[ia]):
                    full[(s - 1) * g + off] = val
                for off, val in enumerate(groups[ib]):
                    full[(t - 1) * g + off] = val
                if c.allowed is None or (full[c.u], full[c.v]) in c.allowed:
                    F[k][ia, ib] += c.weight
    return F


def csp_form_task(inst: Csp2Instance, w0: int, exps=None, dec: TriDecomp | None = None) -> TaskSpec:
    """X(w0) = sum over assignments of w0^{satisfied weight}."""
    exps = exps if exps is not None else csp_exponents(inst)
    N = exps[0].shape[0]
    dec = dec or choose_decomposition(N)
    chi = ChiFamily([np.vectorize(lambda e: w0 ** int(e), otypes=[object])(E) for E in exps])
    R = dec.R

    def extract(proofs):
        (X,) = crt_values(proofs, window_sum(range(1, R + 1)))
        return X

    bound = inst.sigma ** inst.n * max(1, w0) ** inst.max_weight
    return TaskSpec(f"csp2:w0={w0}", 3 * (R - 1), lambda q: Form62Proof(chi, dec, q), extract,
                    bound=bound, min_modulus=3 * R + 1,
                    meta={"N": N, "R": R, "decomposition": dec.name})


def csp2_enumerate(inst: Csp2Instance, cfg: NodeConfig | None = None, repeats: int = 2) -> list[int]:
    """Coefficient k = number of assignments whose satisfied weight is exactly k."""
    exps = csp_exponents(inst)
    top = len(inst.constraints) * inst.W if inst.constraints else 0
    ws = list(range(top + 1))
    vals = [solve(csp_form_task(inst, w0, exps), cfg, repeats) for w0 in ws]
    coeffs = interpolate_exact(ws, vals)
    return coeffs + [0] * (top + 1 - len(coeffs))
