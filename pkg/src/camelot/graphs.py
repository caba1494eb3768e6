"""Graph counting tasks: 6k-cliques through the <6,2>-linear form, and
triangles through the trace of a triple matrix product."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .decomp import TriDecomp, choose_decomposition
from .engine import NodeConfig, TaskSpec, crt_values, solve, window_sum
from .field import find_prime
from .linform import ChiFamily, Form62Proof
from .yates import BaseMatrix, SparseVec, yates_poly_extension_eval, yates_split_sparse

ORACLE_GUARD = 5_000_000
CLIQUE_N_LIMIT = 64  # Strassen^6: R = 117649, proof degree ~3.5e5


class GuardExceeded(RuntimeError):
    pass


@dataclass
class Graph:
    """Undirected graph on vertices 0..n-1.

    Simple unless ``multigraph`` is set, in which case loops and repeated
    edges are kept (only the Tutte task accepts those).
    """

    n: int
    edges: list = field(default_factory=list)
    multigraph: bool = False

    def __post_init__(self):
        out = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) outside [0,{self.n})")
            e = (min(u, v), max(u, v))
            if not self.multigraph:
                if u == v:
                    raise ValueError("loops need multigraph mode")
                if e in seen:
                    raise ValueError(f"repeated edge {e} needs multigraph mode")
            seen.add(e)
            out.append(e)
        self.edges = out

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        """0/1 adjacency of the underlying simple graph (loops dropped)."""
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            if u != v:
                A[u, v] = A[v, u] = 1
        return A

    def neighbor_masks(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.edges:
            if u != v:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
        return masks

    def degrees(self) -> list[int]:
        return [bin(m).count("1") for m in self.neighbor_masks()]

    def simple_edges(self) -> list[tuple[int, int]]:
        return sorted({e for e in self.edges if e[0] != e[1]})

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def induced(self, vertices) -> "Graph":
        idx = {v: i for i, v in enumerate(vertices)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph(len(idx), es, self.multigraph)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, list(itertools.combinations(range(n), 2)))


# -- cliques ------------------------------------------------------------------

def colex_subsets(n: int, h: int) -> list[tuple[int, ...]]:
    return sorted(itertools.combinations(range(n), h), key=lambda s: s[::-1])


def _is_clique(mask: int, nbr: list[int]) -> bool:
    m = mask
    while m:
        v = (m & -m).bit_length() - 1
        if (mask & ~(1 << v)) & ~nbr[v]:
            return False
        m &= m - 1
    return True


def clique_chi(G: Graph, h: int) -> np.ndarray:
    """chi[A, B] = [A and B disjoint and A u B a clique], A, B in colex order."""
    subs = colex_subsets(G.n, h)
    nbr = G.neighbor_masks()
    masks = [sum(1 << v for v in s) for s in subs]
    ok = [_is_clique(m, nbr) for m in masks]
    N = len(subs)
    chi = np.zeros((N, N), dtype=object)
    for i in range(N):
        if not ok[i]:
            continue
        for j in range(N):
            if ok[j] and not masks[i] & masks[j] and _is_clique(masks[i] | masks[j], nbr):
                chi[i, j] = 1
    return chi


def clique_count_oracle(G: Graph, k: int, guard: int = ORACLE_GUARD) -> int:
    if math.comb(G.n, k) > guard:
        raise GuardExceeded(f"C({G.n},{k}) exceeds the oracle guard")
    nbr = G.neighbor_masks()
    return sum(1 for s in itertools.combinations(range(G.n), k)
               if _is_clique(sum(1 << v for v in s), nbr))


def clique_multinomial(k: int) -> int:
    h = k // 6
    return math.factorial(k) // math.factorial(h) ** 6


def clique_task(G: Graph, k: int = 6, dec: TriDecomp | None = None) -> TaskSpec:
    if k <= 0 or k % 6:
        raise ValueError("clique size must be a positive multiple of 6")
    h = k // 6
    N = math.comb(G.n, h)
    if N > CLIQUE_N_LIMIT:
        raise GuardExceeded(f"N = C({G.n},{h}) = {N} exceeds {CLIQUE_N_LIMIT}")
    chi = clique_chi(G, h) if N else np.zeros((1, 1), dtype=object)
    N = max(N, 1)
    dec = dec or choose_decomposition(N)
    family = ChiFamily.single(chi)
    mult = clique_multinomial(k)
    R = dec.R

    def evaluator(q):
        return Form62Proof(family, dec, q)

    def extract(proofs):
        (X,) = crt_values(proofs, window_sum(range(1, R + 1)))
        if X % mult:
            raise ArithmeticError(f"form value {X} not divisible by {mult}")
        return X // mult

    return TaskSpec(f"cliques:k={k}", 3 * (R - 1), evaluator, extract, bound=N ** 6,
                    min_modulus=3 * R + 1, meta={"N": N, "R": R, "decomposition": dec.name})


# -- triangles ----------------------------------------------------------------

def triangle_oracle(G: Graph) -> int:
    A = G.adjacency().astype(object)
    return int(np.trace(A.dot(A).dot(A))) // 6


def _combined_index(i: int, j: int, N0: int, t: int) -> int:
    out = 0
    for pos in range(t - 1, -1, -1):
        p = N0 ** pos
        out = out * N0 * N0 + ((i // p) % N0) * N0 + (j // p) % N0
    return out


def _sparse_input(M: np.ndarray, dec: TriDecomp) -> SparseVec:
    rows, cols = np.nonzero(M)
    vals = {_combined_index(int(i), int(j), dec.N0, dec.t): int(M[i, j]) for i, j in zip(rows, cols)}
    return SparseVec(dec.N0 * dec.N0, dec.t, vals)


def _bases(dec: TriDecomp):
    return [BaseMatrix(dec.table(w)).transpose() for w in ("alpha", "beta", "gamma")]


def inner_digits(dec: TriDecomp, support: int) -> int:
    """ell with m' = R0^ell: smallest power of R0 covering the support, in [1, t]."""
    ell, p = 0, 1
    while p < support:
        p *= dec.R0
        ell += 1
    return min(max(ell, 1), dec.t)


@dataclass
class TriangleInstance:
    dec: TriDecomp
    inputs: list  # SparseVec for A, B, C^T
    ell: int

    @classmethod
    def build(cls, a: np.ndarray, b: np.ndarray, c: np.ndarray, dec: TriDecomp | None = None):
        n = a.shape[0]
        dec = dec or choose_decomposition(n)
        pad = lambda M: np.pad(M, (0, dec.N - n))  # noqa: E731
        ins = [_sparse_input(pad(a), dec), _sparse_input(pad(b), dec), _sparse_input(pad(c.T), dec)]
        support = max(len(x.values) for x in ins)
        return cls(dec, ins, inner_digits(dec, support))

    @property
    def m_prime(self) -> int:
        return self.dec.R0 ** self.ell

    @property
    def outer(self) -> int:
        return self.dec.R // self.m_prime


def trace_abc_parallel(inst: TriangleInstance, q: int) -> int:
    """sum_r A_r B_r C_r mod q, produced part by part."""
    if any(not x.values for x in inst.inputs):
        return 0
    bases = _bases(inst.dec)
    total = 0
    for part in range(inst.outer):
        vecs = [yates_split_sparse(B, x, inst.dec.t, part, q, inst.ell)
                for B, x in zip(bases, inst.inputs)]
        prod = kernels.hadamard(kernels.hadamard(vecs[0], vecs[1], q), vecs[2], q)
        total += int(prod.astype(object).sum())
    return total % q


def triangle_count_parallel(G: Graph, dec: TriDecomp | None = None) -> int:
    if G.n < 3 or not G.simple_edges():
        return 0
    A = G.adjacency()
    inst = TriangleInstance.build(A, A, A, dec)
    q = int(find_prime(1 << 61))  # trace <= n^3 fits comfortably
    return trace_abc_parallel(inst, q) // 6


class TriangleProof:
    """P(z) = sum_{r' <= m'} A_r'(z) B_r'(z) C_r'(z); degree <= 3(R/m' - 1)."""

    def __init__(self, inst: TriangleInstance, q: int):
        self.inst = inst
        self.q = q
        self.bases = _bases(inst.dec)

    def __call__(self, z0) -> int:
        q, inst = self.q, self.inst
        vecs = [yates_poly_extension_eval(B, x, inst.dec.t, inst.ell, z0, q)
                for B, x in zip(self.bases, inst.inputs)]
        prod = kernels.hadamard(kernels.hadamard(vecs[0], vecs[1], q), vecs[2], q)
        return int(prod.astype(object).sum()) % q


def trace_task(a, b, c, dec: TriDecomp | None = None, label: str = "trace") -> TaskSpec:
    inst = TriangleInstance.build(np.asarray(a), np.asarray(b), np.asarray(c), dec)
    outer = inst.outer
    n = np.asarray(a).shape[0]
    bound = n ** 3 * int(max(1, np.abs(a).max(), np.abs(b).max(), np.abs(c).max())) ** 3

    def extract(proofs):
        (tr,) = crt_values(proofs, window_sum(range(1, outer + 1)))
        return tr

    return TaskSpec(label, 3 * (outer - 1), lambda q: TriangleProof(inst, q), extract,
                    bound=bound, min_modulus=3 * outer + 1,
                    meta={"R": inst.dec.R, "m_prime": inst.m_prime, "decomposition": inst.dec.name})


def triangle_tasks(G: Graph, dec: TriDecomp | None = None) -> list[TaskSpec]:
    """One task per connected component that has an edge."""
    tasks = []
    for idx, comp in enumerate(G.components()):
        if len(comp) < 3:
            continue
        H = G.induced(comp)
        if not H.simple_edges():
            continue
        A = H.adjacency()
        t = trace_task(A, A, A, dec, label=f"triangles:component={idx}")
        inner = t.extract
        t.extract = lambda proofs, inner=inner: inner(proofs) // 6
        tasks.append(t)
    return tasks


def triangle_task(G: Graph, dec: TriDecomp | None = None) -> TaskSpec:
    """Single task for a graph whose edges lie in one component."""
    tasks = triangle_tasks(G, dec)
    if len(tasks) > 1:
        raise ValueError("graph has several components with edges; use triangle_tasks")
    if not tasks:
        return TaskSpec("triangles", 0, lambda q: (lambda x: 0), lambda proofs: 0, bound=0)
    tasks[0].problem = "triangles"
    return tasks[0]


def count_triangles(G: Graph, cfg: NodeConfig | None = None, repeats: int = 2) -> int:
    return sum(solve(t, cfg, repeats) for t in triangle_tasks(G))


def ayz_threshold(m: int, dec: TriDecomp) -> int:
    w = dec.omega
    return max(1, math.floor(m ** ((w - 1) / (w + 1)))) if m else 1


def triangle_count_sparse_ayz(G: Graph, dec: TriDecomp | None = None) -> int:
    edges = G.simple_edges()
    m = len(edges)
    if m == 0:
        return 0
    deg = G.degrees()
    delta = ayz_threshold(m, dec or choose_decomposition(max(G.n, 1)))
    low = [deg[v] <= delta for v in range(G.n)]

    high = [v for v in range(G.n) if not low[v]]
    total = triangle_count_parallel(G.induced(high), dec) if len(high) >= 3 else 0

    # label the edge ends at each low vertex 1..deg(v)
    label: dict[int, dict[int, int]] = {v: {} for v in range(G.n) if low[v]}
    for v in label:
        nbrs = sorted(u for e in edges for u in e if v in e and u != v)
        for i, u in enumerate(nbrs, 1):
            label[v][i] = u
    adj = set(edges)

    def key(a, b):
        return (a, b) if a < b else (b, a)

    for u in range(1, delta + 1):  # one simulated node per label
        for x0, y0 in edges:
            for x, y in ((x0, y0), (y0, x0)):
                if not low[x]:
                    continue
                z = label[x].get(u)
                if z is None or z == y or key(z, y) not in adj:
                    continue
                tri = (key(x, y), key(x, z), key(y, z))
                lowish = [e for e in tri if low[e[0]] or low[e[1]]]
                if key(x, y) != min(lowish):
                    continue
                if x != min(w for w in (x, y) if low[w]):
                    continue
                total += 1
    return total
