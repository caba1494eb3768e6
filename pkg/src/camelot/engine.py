"""Simulated distributed preparation, decoding and verification of proofs.

Each prime is processed independently: K simulated nodes evaluate the proof
polynomial on contiguous blocks of the points 0..e-1, byzantine nodes tamper
with (or withhold) their shares, the coordinator decodes the received word,
maps error locations back to nodes, spot-checks the decoded proof at random
points, and finally the per-prime proofs are turned into an exact answer.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from . import kernels
from .field import Poly, crt_combine, crt_signed, primes_from
from .rs import CodewordShare, DecodeFailure, gao_decode

PRIME_FLOOR = 1 << 60
MODES = ("silent", "random-corrupt", "adversarial-consistent")

Evaluator = Callable[[int], int]


@dataclass
class TaskSpec:
    """A counting problem compiled to a proof polynomial.

    ``evaluator(q)`` returns a function x0 -> P(x0) mod q (tables for that
    prime are built once). ``extract`` turns {q: decoded proof} into the
    answer. ``bound`` bounds the absolute value of every CRT-reconstructed
    integer.
    """

    problem: str
    d: int
    evaluator: Callable[[int], Evaluator]
    extract: Callable[[Mapping[int, Poly]], Any]
    bound: int
    min_modulus: int = 2
    primes: list[int] | None = None
    e: int | None = None
    meta: dict = field(default_factory=dict)

    def choose_primes(self, count: int | None = None) -> list[int]:
        if self.primes:
            return list(self.primes)
        start = max(PRIME_FLOOR, self.min_modulus, self.d + 2)
        need = 2 * self.bound + 2
        if count is None:
            count, prod, p = 0, 1, start
            while prod < need:
                p = primes_from(p, 1)[0]
                prod *= p
                p += 1
                count += 1
            count = max(count, 1)
        return [int(p) for p in primes_from(start, count)]

    def points(self, q: int, K: int = 1) -> int:
        e = self.e if self.e is not None else max(default_e(self.d), K)
        if not self.d + 1 <= e <= q:
            raise ValueError(f"need d+1 <= e <= q, got d={self.d}, e={e}, q={q}")
        return e


def default_e(d: int) -> int:
    """e = ceil((d+1)/0.8): about 10% of the shares may be corrupted."""
    return math.ceil((d + 1) * 5 / 4)


def threshold(e: int, d: int) -> int:
    return (e - d - 1) // 2


@dataclass
class NodeConfig:
    K: int = 4
    byzantine: dict = field(default_factory=dict)  # node id -> mode
    seed: int = 0
    workers: int | None = None

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("need at least one node")
        for node, mode in self.byzantine.items():
            if not 0 <= node < self.K:
                raise ValueError(f"byzantine node {node} outside [0, {self.K})")
            if mode not in MODES:
                raise ValueError(f"unknown byzantine mode {mode!r}")


@dataclass
class PrimeRecord:
    q: int
    e: int
    status: str = "pending"
    error_points: list = field(default_factory=list)
    culprits: list = field(default_factory=list)
    checks: list = field(default_factory=list)  # (x0, expected, claimed)
    accepted: bool = False
    honest_match: bool | None = None


@dataclass
class SimReport:
    problem: str
    d: int
    K: int
    blocks: list
    node_seconds: dict = field(default_factory=dict)
    node_evals: dict = field(default_factory=dict)
    primes: list = field(default_factory=list)
    proofs: dict = field(default_factory=dict)
    answer: Any = None
    aborted: str | None = None

    @property
    def decoded(self) -> bool:
        return all(p.status == "ok" for p in self.primes)

    @property
    def accepted(self) -> bool:
        return self.decoded and all(p.accepted for p in self.primes)

    @property
    def culprits(self) -> set:
        return {c for p in self.primes for c in p.culprits}

    def fingerprint(self) -> tuple:
        """Everything except wall-clock timings."""
        return (
            self.problem, self.d, self.K, tuple(self.blocks),
            tuple(sorted(self.node_evals.items())),
            tuple((p.q, p.e, p.status, tuple(p.error_points), tuple(p.culprits),
                   tuple(p.checks), p.accepted, p.honest_match) for p in self.primes),
            tuple((q, pr.coeffs) for q, pr in sorted(self.proofs.items())),
            repr(self.answer), self.aborted,
        )

    def summary_lines(self) -> list[str]:
        out = [f"problem {self.problem}", f"degree {self.d}", f"nodes {self.K}"]
        for node, lo, hi in self.blocks:
            t = self.node_seconds.get(node, 0.0)
            out.append(f"node {node} points [{lo},{hi}) evals {self.node_evals.get(node, 0)} "
                       f"seconds {t:.4f}")
        for p in self.primes:
            out.append(f"prime {p.q} e {p.e} decode {p.status} errors {len(p.error_points)} "
                       f"culprits {sorted(p.culprits)} verify "
                       f"{'accept' if p.accepted else 'reject'}")
            for x0, want, got in p.checks:
                out.append(f"  check x0={x0} expected={want} claimed={got}")
        if self.aborted:
            out.append(f"aborted {self.aborted}")
        else:
            out.append(f"answer {format_answer(self.answer)}")
        return out


def format_answer(ans) -> str:
    if isinstance(ans, (list, tuple)):
        return " ".join(str(a) for a in ans)
    return str(ans)


def assign_points(e: int, K: int) -> list[tuple[int, int, int]]:
    """Contiguous blocks (node, lo, hi) covering 0..e-1, sizes within one."""
    if not 1 <= K <= e:
        raise ValueError(f"need 1 <= K <= e, got K={K}, e={e}")
    base, extra = divmod(e, K)
    out, lo = [], 0
    for node in range(K):
        hi = lo + base + (1 if node < extra else 0)
        out.append((node, lo, hi))
        lo = hi
    return out


@dataclass
class Verdict:
    accepted: bool
    checks: list


def verify_proof(evaluator: Evaluator, proof: Poly, repeats: int,
                 rng: random.Random | None = None) -> Verdict:
    """Compare proof(x0) with a fresh evaluation at ``repeats`` uniform x0."""
    rng = rng or random.Random()
    q = proof.q
    checks = []
    ok = True
    for _ in range(repeats):
        x0 = rng.randrange(q)
        want = int(evaluator(x0)) % q
        got = proof(x0)
        checks.append((x0, want, got))
        ok &= want == got
    return Verdict(ok, checks)


def _corrupt(shares: list[CodewordShare], mode: str, d: int, q: int,
             rng: random.Random) -> list[CodewordShare]:
    if mode == "silent":
        return []
    if mode == "random-corrupt":
        out = []
        for s in shares:
            v = rng.randrange(q - 1)
            out.append(CodewordShare(s.point, v + (v >= s.value), s.origin))
        return out
    # adversarial-consistent: the values of P + Delta with deg Delta <= d
    delta = [rng.randrange(q) for _ in range(d + 1)]
    if not any(delta):
        delta[0] = 1
    dp = Poly(delta, q)
    return [CodewordShare(s.point, (s.value + dp(s.point)) % q, s.origin) for s in shares]


def _evaluate_block(ev: Evaluator, lo: int, hi: int):
    t0 = time.perf_counter()
    many = getattr(ev, "many", None)
    if many is not None:
        vals = [int(v) for v in many(list(range(lo, hi)))]
    else:
        vals = [int(ev(x)) for x in range(lo, hi)]
    return vals, time.perf_counter() - t0


def run_pipeline(task: TaskSpec, cfg: NodeConfig | None = None, verify_repeats: int = 2,
                 primes: Sequence[int] | None = None) -> SimReport:
    cfg = cfg or NodeConfig()
    primes = list(primes) if primes else task.choose_primes()
    report = None
    for q in primes:
        e = task.points(q, cfg.K)
        blocks = assign_points(e, cfg.K)
        if report is None:
            report = SimReport(task.problem, task.d, cfg.K, blocks)
        ev = task.evaluator(q)
        with ThreadPoolExecutor(max_workers=cfg.workers or cfg.K) as pool:
            futs = [pool.submit(_evaluate_block, ev, lo, hi) for _, lo, hi in blocks]
            results = [f.result() for f in futs]
        honest = []
        received = []
        for (node, lo, hi), (vals, secs) in zip(blocks, results):
            report.node_seconds[node] = report.node_seconds.get(node, 0.0) + secs
            report.node_evals[node] = report.node_evals.get(node, 0) + (hi - lo)
            shares = [CodewordShare(x, v, node) for x, v in zip(range(lo, hi), vals)]
            honest.extend(vals)
            if node in cfg.byzantine:
                shares = _corrupt(shares, cfg.byzantine[node], task.d, q,
                                  random.Random(f"{cfg.seed}:{q}:{node}"))
            received.extend(shares)

        rec = PrimeRecord(q, e)
        report.primes.append(rec)
        try:
            res = gao_decode(received, task.d, q)
        except DecodeFailure as exc:
            rec.status = f"failure: {exc}"
            continue
        rec.status = "ok"
        owner = {s.point: s.origin for s in received}
        rec.error_points = sorted(res.error_points)
        rec.culprits = sorted({owner[x] for x in res.error_points})
        if res.proof.is_zero():
            recomputed = [0] * e
        else:
            recomputed = kernels.horner_many(res.proof.to_array(),
                                             np.arange(e, dtype=np.uint64), q).tolist()
        rec.honest_match = [int(v) for v in recomputed] == honest
        verdict = verify_proof(ev, res.proof, verify_repeats,
                               random.Random(f"{cfg.seed}:verify:{q}"))
        rec.checks = verdict.checks
        rec.accepted = verdict.accepted
        report.proofs[q] = res.proof

    if not report.decoded:
        report.aborted = "decode failure"
    elif not report.accepted:
        report.aborted = "verification rejected"
    else:
        report.answer = task.extract(report.proofs)
    return report


# -- answer extraction helpers ------------------------------------------------

def crt_values(proofs: Mapping[int, Poly], residues: Callable[[Poly, int], Sequence[int]],
               signed: bool = False) -> list[int]:
    """Apply ``residues`` to each prime's proof and CRT the results coordinatewise."""
    per_q = {q: list(residues(p, q)) for q, p in proofs.items()}
    n = len(next(iter(per_q.values())))
    combine = crt_signed if signed else crt_combine
    return [combine((vals[i], q) for q, vals in per_q.items()) for i in range(n)]


def window_sum(points: Sequence[int]) -> Callable[[Poly, int], list[int]]:
    pts = np.array(list(points), dtype=np.uint64)

    def residues(p: Poly, q: int) -> list[int]:
        if p.is_zero() or not len(pts):
            return [0]
        vals = kernels.horner_many(p.to_array(), pts % np.uint64(q), q)
        return [int(vals.astype(object).sum()) % q]
    return residues


def point_values(points: Sequence[int]) -> Callable[[Poly, int], list[int]]:
    pts = list(points)

    def residues(p: Poly, q: int) -> list[int]:
        if p.is_zero():
            return [0] * len(pts)
        return [int(v) for v in kernels.horner_many(p.to_array(), np.array(pts, dtype=np.uint64), q)]
    return residues


def solve(task: TaskSpec, cfg: NodeConfig | None = None, verify_repeats: int = 2):
    """Run the pipeline and return the answer, raising if it was aborted."""
    rep = run_pipeline(task, cfg, verify_repeats)
    if rep.aborted:
        raise RuntimeError(f"{task.problem}: {rep.aborted}")
    return rep.answer
