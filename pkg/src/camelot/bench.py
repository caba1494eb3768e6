"""Timing helpers: compiled vs pure-Python kernels, and the scaling checks."""

from __future__ import annotations

import math
import random
import time
from typing import Callable

import numpy as np

from . import kernels
from .decomp import kronecker_power, naive_base, strassen_base, term_count
from .engine import NodeConfig, run_pipeline
from .field import find_prime

Q = int(find_prime(1 << 61))


def _best(fn: Callable[[], object], repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(scale: int, rng: np.random.Generator):
    r = lambda *shape: rng.integers(0, Q, size=shape, dtype=np.uint64)  # noqa: E731
    n = 64 * scale
    coeffs, xs = r(n), r(n)
    A, B = r(n // 2, n // 2), r(n // 2, n // 2)
    base = r(7, 4)
    k = 3 + scale
    yx = r(4 ** k)
    pts = np.arange(1, n + 1, dtype=np.uint64)
    g = r(1 << (4 + scale), 5 + scale, 5 + scale)
    chi = r(15, 8, 8)
    ab = [r(8, 8) for _ in range(3)]
    return {
        "horner_many": (lambda m: m.horner_many(coeffs, xs, Q), f"deg {n - 1}, {n} points"),
        "matmul": (lambda m: m.matmul(A, B, Q), f"{n // 2}x{n // 2}"),
        "yates": (lambda m: m.yates(base, yx, k, Q), f"7x4 base, k={k}"),
        "interpolate": (lambda m: m.interpolate(pts, coeffs, Q), f"{n} points"),
        "sieve_extract": (lambda m: m.sieve_extract(g, 5, Q), f"2^{4 + scale} cells, t=5"),
        "form62_contract": (lambda m: m.form62_contract(chi, *ab, Q), "N=8"),
    }


def kernel_table(scale: int = 1, repeats: int = 3, seed: int = 0) -> list[dict]:
    """Best-of-``repeats`` seconds per kernel and backend, with outputs cross-checked."""
    rng = np.random.default_rng(seed)
    backends = kernels.available_backends()
    rows = []
    for name, (call, size) in _cases(scale, rng).items():
        outs = {}
        row = {"kernel": name, "size": size}
        for bname, mod in backends.items():
            outs[bname] = call(mod)
            row[bname] = _best(lambda: call(mod), repeats)
        vals = list(outs.values())
        row["agree"] = all(np.array_equal(np.asarray(vals[0]), np.asarray(v)) for v in vals[1:])
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"] if row["cython"] else math.inf
        rows.append(row)
    return rows


def format_table(rows: list[dict]) -> list[str]:
    names = [b for b in ("python", "cython") if rows and b in rows[0]]
    head = f"{'kernel':<16} {'size':<22} " + " ".join(f"{b + ' s':>12}" for b in names)
    if "cython" in names:
        head += f" {'speedup':>8}"
    out = [head + "  agree"]
    for r in rows:
        line = f"{r['kernel']:<16} {r['size']:<22} " + " ".join(f"{r[b]:>12.6f}" for b in names)
        if "cython" in names:
            line += f" {r['speedup']:>8.1f}"
        out.append(line + f"  {'yes' if r['agree'] else 'NO'}")
    return out


def per_node_times(task, Ks=(1, 2, 4, 8), e: int | None = None, seed: int = 0,
                   repeats: int = 3) -> dict:
    """Seconds per evaluated point for each K at a fixed e (one prime), best of ``repeats``."""
    if e is not None:
        task.e = e
    q = task.choose_primes(1)[:1]
    out = {}
    for K in Ks:
        best = math.inf
        for _ in range(repeats):
            rep = run_pipeline(task, NodeConfig(K=K, seed=seed, workers=1), verify_repeats=1,
                               primes=q)
            best = min(best, sum(rep.node_seconds.values()) / sum(rep.node_evals.values()))
        out[K] = best
    return out


def term_ratios(ts=(1, 2, 3, 4, 5)) -> dict:
    """Counted product terms of Strassen^t against the naive 2x2 base to the t."""
    out = {}
    for t in ts:
        s = term_count(kronecker_power(strassen_base(), t))
        n = term_count(kronecker_power(naive_base(2), t))
        out[t] = (s, n, s / n)
    return out


def random_graph(n: int, p: float, seed: int):
    from .graphs import Graph
    rng = random.Random(seed)
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
