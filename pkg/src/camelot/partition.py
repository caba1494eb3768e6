"""Partitioning sum-products  sum_{(X_1..X_t)} f(X_1)...f(X_t)  over ordered
partitions of a universe U, and their instantiations: exact set partitions,
chromatic polynomials and Tutte polynomials.

The universe is split into an explicit part E (subsets tracked as bitmasks)
and a part B whose i-th element carries weight 2^i. A node evaluating the
proof at x0 builds a table g over subsets of E whose entries are polynomials
in w_E, w_B truncated at degrees (|E|, |B|); the sieve
sum_Y (-1)^{|E \\ Y|} g(Y)^t then yields P(x0) as its top coefficient.
The answer is the proof's coefficient at s* = 2^{|B|} - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .engine import NodeConfig, TaskSpec, crt_values, solve
from .field import ModulusTooSmall
from .graphs import Graph

ZETA = np.array([[1, 0], [1, 1]], dtype=np.uint64)
BUDGET_E = 20


@dataclass(frozen=True)
class UniverseSplit:
    """Elements of U listed in E (bit i of a Y-mask is E[i]) and B (weight 2^i)."""

    E: tuple
    B: tuple

    def __post_init__(self):
        if set(self.E) & set(self.B):
            raise ValueError("E and B must be disjoint")
        if len(self.E) > BUDGET_E:
            raise ValueError(f"|E| = {len(self.E)} exceeds the table budget 2^{BUDGET_E}")

    @classmethod
    def balanced(cls, n: int) -> "UniverseSplit":
        """|E| = ceil(n/2), |B| = floor(n/2)."""
        h = (n + 1) // 2
        return cls(tuple(range(h)), tuple(range(h, n)))

    @classmethod
    def tripartite(cls, n: int) -> "UniverseSplit":
        """|E| = 2|B|; E1 = E[:|B|], E2 = E[|B|:]."""
        if n % 3:
            raise ValueError("tripartite split needs 3 | n")
        b = n // 3
        return cls(tuple(range(2 * b)), tuple(range(2 * b, n)))

    @property
    def degree(self) -> int:
        b = len(self.B)
        return b * (1 << (b - 1)) if b else 0

    @property
    def target(self) -> int:
        return (1 << len(self.B)) - 1

    def local_masks(self, X: int) -> tuple[int, int]:
        """Split a U-bitmask into (E-local mask, B-local mask)."""
        ye = sum(1 << i for i, u in enumerate(self.E) if X >> u & 1)
        yb = sum(1 << i for i, u in enumerate(self.B) if X >> u & 1)
        return ye, yb


def _popcounts(k: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(1 << k)], dtype=np.int64)


def _bit_powers(x0: int, nb: int, q: int) -> np.ndarray:
    """x0^{sum of weights of X} for every X subset of B, weights 2^i."""
    out = [1] * (1 << nb)
    step = x0 % q
    for i in range(nb):
        lo = 1 << i
        for X in range(lo, lo << 1):
            out[X] = out[X - lo] * step % q
        step = step * step % q
    return np.array(out, dtype=np.uint64)


def zeta(table: np.ndarray, k: int, q: int) -> np.ndarray:
    """Subset sums over the leading 2^k axis, every other axis as a lane."""
    shape = table.shape
    flat = np.ascontiguousarray(table.reshape(1 << k, -1))
    return kernels.yates(ZETA, flat, k, q).reshape(shape)


def template_eval(g: np.ndarray, t: int, q: int) -> int:
    """Top coefficient of sum_Y (-1)^{|E\\Y|} g(Y)^t."""
    return kernels.sieve_extract(np.ascontiguousarray(g, dtype=np.uint64), t, q)


# -- node-function builders ---------------------------------------------------

class SetFamilyG:
    """g for f = indicator of a set family (no empty set)."""

    def __init__(self, family: Sequence[int], split: UniverseSplit):
        self.split = split
        self.items = []
        for X in family:
            if X == 0:
                raise ValueError("set family must not contain the empty set")
            ye, yb = split.local_masks(X)
            self.items.append((ye, bin(ye).count("1"), bin(yb).count("1"), yb))

    def __call__(self, x0: int, q: int) -> np.ndarray:
        nE, nB = len(self.split.E), len(self.split.B)
        xw = _bit_powers(x0, nB, q).tolist()
        g0 = np.zeros((1 << nE, nE + 1, nB + 1), dtype=object)
        for ye, ce, cb, yb in self.items:
            g0[ye, ce, cb] += xw[yb]
        return zeta((g0 % q).astype(np.uint64), nE, q)


def _independent_flags(masks: Sequence[int], nbr: Sequence[int]) -> list[bool]:
    out = []
    for X in masks:
        ok = True
        m = X
        while m and ok:
            v = (m & -m).bit_length() - 1
            ok = not (nbr[v] & X)
            m &= m - 1
        out.append(ok)
    return out


class IndependentG:
    """g for f = indicator of independent sets, built across the (E, B) cut."""

    def __init__(self, G: Graph, split: UniverseSplit):
        if set(split.E) | set(split.B) != set(range(G.n)):
            raise ValueError("split must cover the vertex set")
        self.split = split
        nbr = G.neighbor_masks()
        nE, nB = len(split.E), len(split.B)
        to_u = lambda local, elems: sum(1 << u for i, u in enumerate(elems) if local >> i & 1)  # noqa: E731
        self.indep_B = _independent_flags([to_u(X, split.B) for X in range(1 << nB)], nbr)
        self.indep_E = _independent_flags([to_u(X, split.E) for X in range(1 << nE)], nbr)
        # B-local mask of the complement of the B-neighbourhood of each X in E
        bpos = {u: i for i, u in enumerate(split.B)}
        full = (1 << nB) - 1
        self.free_B = []
        for X in range(1 << nE):
            gamma = 0
            for i, u in enumerate(split.E):
                if X >> i & 1:
                    m = nbr[u]
                    while m:
                        v = (m & -m).bit_length() - 1
                        if v in bpos:
                            gamma |= 1 << bpos[v]
                        m &= m - 1
            self.free_B.append(full & ~gamma)
        self.pc_E = _popcounts(nE)
        self.pc_B = _popcounts(nB)

    def __call__(self, x0: int, q: int) -> np.ndarray:
        nE, nB = len(self.split.E), len(self.split.B)
        xw = _bit_powers(x0, nB, q)
        fB = np.zeros((1 << nB, nB + 1), dtype=np.uint64)
        for X in range(1 << nB):
            if self.indep_B[X]:
                fB[X, self.pc_B[X]] = xw[X]
        gB = zeta(fB, nB, q)
        fE = np.zeros((1 << nE, nE + 1, nB + 1), dtype=np.uint64)
        for X in range(1 << nE):
            if self.indep_E[X]:
                fE[X, self.pc_E[X]] = gB[self.free_B[X]]
        return zeta(fE, nE, q)


def _edge_counts(edges, A: Sequence[int], Bm: Sequence[int] | None = None) -> np.ndarray:
    """Edges inside each mask of A (Bm None), or between masks of A and Bm."""
    a = np.array(A, dtype=object)
    if Bm is None:
        out = np.zeros(len(A), dtype=np.int64)
        for u, v in edges:
            out += np.array([(x >> u & 1) & (x >> v & 1) for x in A], dtype=np.int64)
        return out
    out = np.zeros((len(A), len(Bm)), dtype=np.int64)
    for u, v in edges:
        au = np.array([x >> u & 1 for x in a], dtype=np.int64)
        av = np.array([x >> v & 1 for x in a], dtype=np.int64)
        bu = np.array([x >> u & 1 for x in Bm], dtype=np.int64)
        bv = np.array([x >> v & 1 for x in Bm], dtype=np.int64)
        out += np.outer(au, bv) + np.outer(av, bu)
    return out


class PottsG:
    """g for f(X) = (1+r)^{|E(G[X])|} via the E1 / E2 / B matrix product.

    Loops and parallel edges count with multiplicity.
    """

    def __init__(self, G: Graph, split: UniverseSplit, r: int):
        b = len(split.B)
        if len(split.E) != 2 * b:
            raise ValueError("Potts builder needs |E| = 2|B|")
        if set(split.E) | set(split.B) != set(range(G.n)):
            raise ValueError("split must cover the vertex set")
        self.split, self.r = split, r
        E1, E2, Bs = split.E[:b], split.E[b:], split.B
        um = lambda elems: [sum(1 << u for i, u in enumerate(elems) if X >> i & 1)  # noqa: E731
                            for X in range(1 << len(elems))]
        m1, m2, mb = um(E1), um(E2), um(Bs)
        es = G.edges
        # exponents of (1+r) in the three factors
        self.k1 = _edge_counts(es, m1, mb) + _edge_counts(es, mb)[None, :]        # [Y1, X]
        self.k2 = _edge_counts(es, mb, m2) + _edge_counts(es, m2)[None, :]        # [X, Y2]
        self.k12 = _edge_counts(es, m1, m2) + _edge_counts(es, m1)[:, None]       # [Y1, Y2]
        self.pc = _popcounts(b)
        self.b = b
        self.m = G.m

    def __call__(self, x0: int, q: int) -> np.ndarray:
        b = self.b
        pw = [1] * (self.m + 1)
        for i in range(1, self.m + 1):
            pw[i] = pw[i - 1] * (1 + self.r) % q
        pw = np.array(pw, dtype=np.uint64)
        xw = _bit_powers(x0, b, q)
        M1 = kernels.hadamard(pw[self.k1], np.broadcast_to(xw, self.k1.shape).copy(), q)
        M2 = pw[self.k2]
        F12 = pw[self.k12]
        size = 1 << b
        g0 = np.zeros((size, size, 2 * b + 1, b + 1), dtype=np.uint64)
        ce = self.pc[:, None] + self.pc[None, :]
        rows, cols = np.indices((size, size))
        for k in range(b + 1):
            sel = self.pc == k
            T = kernels.matmul(np.ascontiguousarray(M1[:, sel]), np.ascontiguousarray(M2[sel, :]), q)
            g0[rows, cols, ce, k] = kernels.hadamard(F12, T, q)
        # E-mask of (Y1, Y2) is Y1 | Y2 << b, i.e. Y2 is the high half
        g0 = np.ascontiguousarray(g0.transpose(1, 0, 2, 3)).reshape(size * size, 2 * b + 1, b + 1)
        return zeta(g0, 2 * b, q)


def g_bruteforce(f: Callable[[int], int], n: int, split: UniverseSplit, x0: int,
                 q: int) -> np.ndarray:
    """Direct definition of g (test oracle), O(2^n * 2^|E|)."""
    nE, nB = len(split.E), len(split.B)
    xw = _bit_powers(x0, nB, q).tolist()
    g = np.zeros((1 << nE, nE + 1, nB + 1), dtype=object)
    for X in range(1 << n):
        fx = f(X)
        if not fx:
            continue
        ye, yb = split.local_masks(X)
        ce, cb = bin(ye).count("1"), bin(yb).count("1")
        for Y in range(1 << nE):
            if ye & ~Y == 0:
                g[Y, ce, cb] += fx * xw[yb]
    return (g % q).astype(np.uint64)


# -- tasks --------------------------------------------------------------------

def partition_task(builder: Callable[[int, int], np.ndarray], split: UniverseSplit, t: int,
                   n: int, phi: int, label: str) -> TaskSpec:
    """Proof task for one partitioning sum-product; the answer is p_{s*}."""
    if t < 1:
        raise ValueError("need t >= 1")
    d = split.degree
    target = split.target

    def evaluator(q):
        if q <= d:
            raise ModulusTooSmall(f"need q > d = {d}")
        return lambda x0: template_eval(builder(int(x0) % q, q), t, q)

    def extract(proofs):
        def coeff(p, q):
            return [p.coeffs[target] if target < len(p.coeffs) else 0]
        return crt_values(proofs, coeff)[0]

    bound = (1 << (n * t + 1)) * phi ** t
    return TaskSpec(label, d, evaluator, extract, bound=bound, min_modulus=d + 1,
                    meta={"split": split, "t": t, "target": target})


def set_partition_task(family: Sequence[int], n: int, t: int) -> TaskSpec:
    split = UniverseSplit.balanced(n)
    return partition_task(SetFamilyG(family, split), split, t, n, 1, f"setpartition:t={t}")


def set_partition_count(family: Sequence[int], n: int, t: int, cfg: NodeConfig | None = None,
                        ordered: bool = False, repeats: int = 2) -> int:
    """Number of ways to partition [n] into t members of the family.

    ``family`` holds bitmasks over 0..n-1. Ordered tuples are counted when
    ``ordered`` is set; otherwise the count is divided by t!.
    """
    val = solve(set_partition_task(family, n, t), cfg, repeats)
    if ordered:
        return val
    f = math.factorial(t)
    if val % f:
        raise ArithmeticError(f"ordered count {val} not divisible by {t}!")
    return val // f


def _pad_graph(G: Graph, multiple: int) -> tuple[Graph, int]:
    n = max(G.n, multiple)
    pad = (-n) % multiple + (n - G.n)
    return Graph(G.n + pad, list(G.edges), G.multigraph), pad


def _divide_pad(task: TaskSpec, t: int, pad: int) -> TaskSpec:
    """Make the task's answer the unpadded value (padded value / t^pad)."""
    inner = task.extract
    f = t ** pad

    def extract(proofs):
        v = inner(proofs)
        if v % f:
            raise ArithmeticError(f"padded value {v} not divisible by {t}^{pad}")
        return v // f
    task.extract = extract
    task.meta["pad"] = pad
    return task


def chromatic_task(G: Graph, t: int) -> TaskSpec:
    """chi_G(t), computed on G plus isolated padding vertices in E when n is odd."""
    if G.multigraph:
        raise ValueError("chromatic polynomial expects a simple graph")
    H, pad = _pad_graph(G, 2)
    split = UniverseSplit.balanced(H.n)
    if pad:
        # padding vertices carry the largest labels; keep them in E
        extra = tuple(range(G.n, H.n))
        E = extra + tuple(u for u in split.E if u < G.n)
        E = E[:len(split.E)]
        B = tuple(u for u in range(H.n) if u not in E)
        split = UniverseSplit(tuple(sorted(E)), B)
    task = partition_task(IndependentG(H, split), split, t, H.n, 1, f"chromatic:t={t}")
    return _divide_pad(task, t, pad)


def chromatic_tasks(G: Graph) -> list[TaskSpec]:
    """One task per evaluation point t = 1..n+1."""
    return [chromatic_task(G, t) for t in range(1, G.n + 2)]


def chromatic_combine(G: Graph, values: Sequence[int]) -> list[int]:
    return interpolate_exact(list(range(1, G.n + 2)), list(values))


def interpolate_exact(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    """Integer coefficients of the polynomial through (xs, ys) (Newton form)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        nxt = [Fraction(0)] * n
        for k in range(n - 1):
            nxt[k + 1] += poly[k]
        for k in range(n):
            nxt[k] -= poly[k] * xs[i]
        nxt[0] += coef[i]
        poly = nxt
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("interpolant has non-integer coefficients")
        out.append(int(c))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def chromatic_polynomial(G: Graph, cfg: NodeConfig | None = None, repeats: int = 2) -> list[int]:
    """Coefficients c_0..c_n of chi_G(t) = sum c_k t^k."""
    return chromatic_combine(G, [solve(task, cfg, repeats) for task in chromatic_tasks(G)])


def potts_task(G: Graph, t: int, r: int) -> TaskSpec:
    """Z_G(t, r); G is padded with isolated vertices to 3 | n, each worth a factor t."""
    H, pad = _pad_graph(G, 3)
    split = UniverseSplit.tripartite(H.n)
    task = partition_task(PottsG(H, split, r), split, t, H.n, (1 + r) ** G.m,
                          f"potts:t={t},r={r}")
    return _divide_pad(task, t, pad)


def tutte_tasks(G: Graph) -> list[TaskSpec]:
    """Row-major over the grid t = 1..n+1, r = 1..m+1."""
    return [potts_task(G, t, r) for t in range(1, G.n + 2) for r in range(1, G.m + 2)]


def tutte_combine(G: Graph, values: Sequence[int]) -> dict:
    ts = list(range(1, G.n + 2))
    rs = list(range(1, G.m + 2))
    w = len(rs)
    Z = [list(values[i * w:(i + 1) * w]) for i in range(len(ts))]
    z = interpolate_bivariate(ts, rs, Z)
    return potts_to_tutte(z, G.n, len(G.components()))


def interpolate_bivariate(ts: Sequence[int], rs: Sequence[int], Z) -> dict:
    """Coefficients z[(a, b)] of t^a r^b through the grid values Z[i][j]."""
    # along r for each t, then along t for each r-degree
    by_t = [interpolate_exact(rs, row) for row in Z]
    width = max(len(c) for c in by_t)
    out = {}
    for b in range(width):
        col = [c[b] if b < len(c) else 0 for c in by_t]
        for a, v in enumerate(interpolate_exact(ts, col)):
            if v:
                out[(a, b)] = v
    return out


def potts_to_tutte(z: dict, n: int, c: int) -> dict:
    """T(x, y) = sum z_ab (x-1)^{a-c} (y-1)^{a+b-n} expanded in x^i y^j."""
    T: dict = {}
    for (a, b), v in z.items():
        ex, ey = a - c, a + b - n
        if ex < 0 or ey < 0:
            raise ArithmeticError(f"negative exponent from term t^{a} r^{b}")
        for i in range(ex + 1):
            cx = math.comb(ex, i) * (-1) ** (ex - i)
            for j in range(ey + 1):
                cy = math.comb(ey, j) * (-1) ** (ey - j)
                T[(i, j)] = T.get((i, j), 0) + v * cx * cy
    return {k: v for k, v in T.items() if v}


def tutte_polynomial(G: Graph, cfg: NodeConfig | None = None, repeats: int = 2) -> dict:
    """Tutte polynomial as {(i, j): coefficient of x^i y^j}."""
    return tutte_combine(G, [solve(task, cfg, repeats) for task in tutte_tasks(G)])


def format_bivariate(T: dict, xs: str = "x", ys: str = "y") -> str:
    """Human-readable form, highest total degree first, e.g. 'x^2 + x + y'."""
    if not T:
        return "0"
    parts = []
    for (i, j) in sorted(T, key=lambda k: (-(k[0] + k[1]), -k[0])):
        c = T[(i, j)]
        mono = "*".join(([xs if i == 1 else f"{xs}^{i}"] if i else [])
                        + ([ys if j == 1 else f"{ys}^{j}"] if j else []))
        if not mono:
            term = str(abs(c))
        elif abs(c) == 1:
            term = mono
        else:
            term = f"{abs(c)}*{mono}"
        parts.append(("- " if c < 0 else "+ ") + term)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[1:]


def format_univariate(coeffs: Sequence[int], var: str = "t") -> str:
    return format_bivariate({(k, 0): c for k, c in enumerate(coeffs) if c}, var, "_")
