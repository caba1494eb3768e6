"""Deterministic small instances for every problem, as instance-file text.

``write_corpus`` lays them out as ``<dir>/<name>/<idx>.txt`` with a
``MANIFEST`` of ``<tag> <relative path>`` lines.
"""

from __future__ import annotations

import random
from pathlib import Path


def _graph_text(n: int, edges) -> str:
    lines = [f"p edge {n} {len(edges)}"] + [f"e {u + 1} {v + 1}" for u, v in edges]
    return "\n".join(lines) + "\n"


def _rand_edges(rng: random.Random, n: int, p: float):
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def _matrix_text(*mats) -> str:
    return "\n\n".join("\n".join(" ".join(str(v) for v in row) for row in M) for M in mats) + "\n"


def _bool(rng, n, t, p=0.5):
    return [[int(rng.random() < p) for _ in range(t)] for _ in range(n)]


def _family_text(n: int, fam) -> str:
    lines = [f"universe {n}"]
    for X in fam:
        lines.append(" ".join(str(i + 1) for i in range(n) if X >> i & 1))
    return "\n".join(lines) + "\n"


def gen_cliques(rng):
    n = rng.randrange(6, 10)
    return _graph_text(n, _rand_edges(rng, n, rng.choice([0.5, 0.7, 0.9])))


def gen_triangles(rng):
    n = rng.randrange(3, 25)
    return _graph_text(n, _rand_edges(rng, n, rng.uniform(0.1, 0.6)))


def gen_chromatic(rng):
    n = rng.randrange(1, 8)
    return _graph_text(n, _rand_edges(rng, n, rng.uniform(0.2, 0.7)))


def gen_tutte(rng):
    n = rng.randrange(1, 6)
    m = rng.randrange(0, 7)
    edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
    return _graph_text(n, edges)


def _family(rng, n, size):
    return [rng.randrange(1, 1 << n) for _ in range(size)]


def gen_setpartition(rng):
    n = rng.randrange(2, 8)
    fam = set(_family(rng, n, rng.randrange(3, 12)))
    # plant one exact partition so the answer is usually nonzero
    order = list(range(n))
    rng.shuffle(order)
    cut = rng.randrange(1, n)
    fam.add(sum(1 << v for v in order[:cut]))
    fam.add(sum(1 << v for v in order[cut:]))
    return _family_text(n, sorted(fam))


def gen_setcover(rng):
    n = rng.randrange(1, 7)
    return _family_text(n, _family(rng, n, rng.randrange(1, 6)))


def gen_ov(rng):
    n, t = rng.randrange(1, 9), rng.randrange(1, 7)
    return _matrix_text(_bool(rng, n, t, 0.4), _bool(rng, rng.randrange(1, 9), t, 0.4))


def gen_hamming(rng):
    n, t = rng.randrange(1, 7), rng.randrange(1, 5)
    return _matrix_text(_bool(rng, n, t), _bool(rng, rng.randrange(1, 7), t))


def gen_cnfsat(rng):
    v = rng.randrange(1, 11)
    m = rng.randrange(0, 10)
    lines = [f"p cnf {v} {m}"]
    for _ in range(m):
        k = rng.randrange(1, 4)
        lits = [rng.choice([1, -1]) * rng.randrange(1, v + 1) for _ in range(k)]
        lines.append(" ".join(map(str, lits)) + " 0")
    return "\n".join(lines) + "\n"


def gen_conv3sum(rng):
    n = rng.randrange(2, 11)
    t = rng.randrange(1, 6)
    base = [rng.randrange(1 << t) for _ in range(n)]
    # make some entries sums of earlier ones to create solutions
    for i in range(2, n + 1):
        if rng.random() < 0.4:
            a = rng.randrange(1, i)
            s = base[a - 1] + base[i - a - 1]
            if s < 1 << t:
                base[i - 1] = s
    return f"bits {t}\n" + " ".join(map(str, base)) + "\n"


def gen_permanent(rng):
    n = rng.randrange(1, 7)
    lo = rng.choice([0, -2])
    return _matrix_text([[rng.randrange(lo, 3) for _ in range(n)] for _ in range(n)])


def gen_csp2(rng):
    sigma = 2
    m = rng.randrange(0, 4)
    lines = [f"6 {sigma} {m}"]
    for _ in range(m):
        u, v = rng.sample(range(1, 7), 2)
        pairs = [f"{a},{b}" for a in range(sigma) for b in range(sigma) if rng.random() < 0.5]
        w = rng.randrange(1, 3)
        lines.append(" ".join([str(u), str(v)] + pairs + ([f"w={w}"] if w > 1 else [])))
    return "\n".join(lines) + "\n"


GENERATORS = {
    "cliques": ("cliques:k=6", gen_cliques),
    "triangles": ("triangles", gen_triangles),
    "chromatic": ("chromatic", gen_chromatic),
    "tutte": ("tutte", gen_tutte),
    "setpartition": ("setpartition:t=2", gen_setpartition),
    "setcover": ("setcover:t=2", gen_setcover),
    "ov": ("ov", gen_ov),
    "hamming": ("hamming", gen_hamming),
    "cnfsat": ("cnfsat", gen_cnfsat),
    "conv3sum": ("conv3sum", gen_conv3sum),
    "permanent": ("permanent", gen_permanent),
    "csp2": ("csp2", gen_csp2),
}


def instances(name: str, count: int, seed: int = 0) -> list[tuple[str, str]]:
    """(tag, text) pairs for one problem."""
    tag, gen = GENERATORS[name]
    rng = random.Random(f"corpus:{name}:{seed}")
    return [(tag, gen(rng)) for _ in range(count)]


def write_corpus(root, per_problem: int = 20, seed: int = 0) -> list[tuple[str, Path]]:
    root = Path(root)
    manifest = []
    for name in GENERATORS:
        (root / name).mkdir(parents=True, exist_ok=True)
        for i, (tag, text) in enumerate(instances(name, per_problem, seed)):
            rel = Path(name) / f"{i:03d}.txt"
            (root / rel).write_text(text)
            manifest.append((tag, rel))
    (root / "MANIFEST").write_text("".join(f"{tag} {rel.as_posix()}\n" for tag, rel in manifest))
    return manifest


def read_manifest(root) -> list[tuple[str, Path]]:
    root = Path(root)
    out = []
    for line in (root / "MANIFEST").read_text().splitlines():
        if line.strip():
            tag, rel = line.split()
            out.append((tag, root / rel))
    return out
