"""Exact reference computations used by tests and the `oracle` subcommand.

Everything here is exponential and guarded; nothing depends on the proof
machinery.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .graphs import Graph, GuardExceeded, ORACLE_GUARD


def _guard(work: float, guard: float, what: str):
    if work > guard:
        raise GuardExceeded(f"{what}: estimated work {work:.3g} exceeds guard {guard:.3g}")


def partition_sum_bruteforce(f: Callable[[int], int], n: int, t: int,
                             guard: float = ORACLE_GUARD) -> int:
    """sum over ordered (X_1..X_t) partitioning [n] (empty parts allowed) of prod f(X_i)."""
    _guard(float(t) ** n, guard, "partition sum")
    total = 0
    for labels in itertools.product(range(t), repeat=n):
        parts = [0] * t
        for v, c in enumerate(labels):
            parts[c] |= 1 << v
        p = 1
        for X in parts:
            p *= f(X)
            if not p:
                break
        total += p
    return total


def exact_cover_count(family: Sequence[int], n: int, t: int) -> int:
    """Unordered partitions of [n] into exactly t members of the family."""
    fam = sorted(set(family))
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def go(rest: int, k: int) -> int:
        if rest == 0:
            return 1 if k == 0 else 0
        if k == 0:
            return 0
        low = rest & -rest
        return sum(go(rest & ~X, k - 1) for X in fam if X & low and X & ~rest == 0)

    return go(full, t)


# -- chromatic and Tutte ------------------------------------------------------

def _poly_add(a: list[int], b: list[int], sign: int = 1) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += sign * c
    return out


def _contract(n: int, edges: tuple, u: int, v: int) -> tuple[int, tuple]:
    """Merge v into u and relabel n-1 -> v."""
    out = []
    for a, b in edges:
        a = u if a == v else a
        b = u if b == v else b
        a = v if a == n - 1 else a
        b = v if b == n - 1 else b
        out.append((min(a, b), max(a, b)))
    return n - 1, tuple(sorted(out))


def chromatic_oracle(G: Graph) -> list[int]:
    """Coefficients of chi_G by deletion-contraction (memoised)."""
    if G.multigraph:
        raise ValueError("simple graph expected")

    @lru_cache(maxsize=None)
    def go(n: int, edges: tuple) -> tuple:
        if not edges:
            return tuple([0] * n + [1])
        if len(edges) == n * (n - 1) // 2:
            # falling factorial t(t-1)...(t-n+1)
            p = [1]
            for i in range(n):
                p = _poly_add([0] + p, [i * c for c in p], -1)
            return tuple(p)
        u, v = edges[-1]
        rest = edges[:-1]
        n2, ce = _contract(n, rest, u, v)
        ce = tuple(sorted(set(ce)))
        return tuple(_poly_add(list(go(n, rest)), list(go(n2, ce)), -1))

    p = list(go(G.n, tuple(sorted(G.edges))))
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _is_bridge(n: int, edges: tuple, idx: int) -> bool:
    u, v = edges[idx]
    adj: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(edges):
        if i != idx:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    seen, stack = {u}, [u]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return v not in seen


def tutte_oracle(G: Graph) -> dict:
    """Tutte polynomial {(i, j): coeff} by deletion-contraction."""

    @lru_cache(maxsize=None)
    def go(n: int, edges: tuple) -> tuple:
        if not edges:
            return (((0, 0), 1),)
        u, v = edges[-1]
        rest = edges[:-1]
        if u == v:
            return tuple(((i, j + 1), c) for (i, j), c in go(n, rest))
        if _is_bridge(n, edges, len(edges) - 1):
            return tuple(((i + 1, j), c) for (i, j), c in go(*_contract(n, rest, u, v)))
        acc: dict = {}
        for part in (go(n, rest), go(*_contract(n, rest, u, v))):
            for k, c in part:
                acc[k] = acc.get(k, 0) + c
        return tuple(sorted((k, c) for k, c in acc.items() if c))

    return dict(go(G.n, tuple(sorted(G.edges))))


def spanning_tree_count(G: Graph) -> int:
    """Kirchhoff: a cofactor of the Laplacian (multi-edges counted, loops ignored).

    For a disconnected graph this is 0, matching T(1,1) only when connected;
    use :func:`maximal_forest_count` for the general identity.
    """
    n = G.n
    if n <= 1:
        return 1
    L = [[Fraction(0)] * n for _ in range(n)]
    for u, v in G.edges:
        if u != v:
            L[u][u] += 1
            L[v][v] += 1
            L[u][v] -= 1
            L[v][u] -= 1
    M = [row[1:] for row in L[1:]]
    return int(_det(M))


def _det(M) -> Fraction:
    M = [list(r) for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return det


def maximal_forest_count(G: Graph) -> int:
    """Product of spanning-tree counts of the components (= T(1,1))."""
    out = 1
    for comp in G.components():
        out *= spanning_tree_count(G.induced(comp))
    return out


def forest_count(G: Graph, guard: float = ORACLE_GUARD) -> int:
    """Acyclic edge subsets (= T(2,1)); loops are never acyclic."""
    _guard(2.0 ** G.m, guard, "forest enumeration")
    total = 0
    for mask in range(1 << G.m):
        parent = list(range(G.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for i, (u, v) in enumerate(G.edges):
            if mask >> i & 1:
                a, b = find(u), find(v)
                if a == b:
                    ok = False
                    break
                parent[a] = b
        total += ok
    return total


def eval_bivariate(T: dict, x, y):
    return sum(c * x ** i * y ** j for (i, j), c in T.items())


def eval_univariate(p: Sequence[int], x):
    return sum(c * x ** k for k, c in enumerate(p))


def chromatic_bruteforce(G: Graph, t: int, guard: float = ORACLE_GUARD) -> int:
    """Proper t-colourings by enumeration."""
    _guard(float(t) ** G.n, guard, "colouring enumeration")
    es = G.simple_edges()
    return sum(all(c[u] != c[v] for u, v in es) for c in itertools.product(range(t), repeat=G.n))


def potts_bruteforce(G: Graph, t: int, r: int, guard: float = ORACLE_GUARD) -> int:
    """sum over maps V -> [t] of prod_edges (1 + r [same colour])."""
    _guard(float(t) ** G.n, guard, "Potts enumeration")
    total = 0
    for c in itertools.product(range(t), repeat=G.n):
        p = 1
        for u, v in G.edges:
            if c[u] == c[v]:
                p *= 1 + r
        total += p
    return total


