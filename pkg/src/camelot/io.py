"""Instance parsers, the text proof-file format, and the instance digest.

Formats (``c`` or ``#`` lines are comments everywhere):

graph      ``p edge <n> <m>`` then ``e <u> <v>`` lines, vertices 1-based
cnf        DIMACS: ``p cnf <v> <m>`` then clauses terminated by 0
matrix     whitespace-separated integer rows; two matrices (A then B) are
           separated by a blank line
array      whitespace-separated integers, optional first line ``bits <t>``
setfamily  optional first line ``universe <n>``, then one subset per line as
           space-separated 1-based elements
csp        header ``<n> <sigma> <m>`` then per constraint ``<u> <v>``
           (1-based) followed by allowed pairs ``a,b`` (values 0-based) and an
           optional ``w=<weight>``; a constraint without pairs always holds
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .appendix import CnfFormula, Constraint, Csp2Instance
from .field import Poly
from .graphs import Graph

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = (1 << 64) - 1


class ParseError(ValueError):
    pass


def _lines(text: str, keep_blank: bool = False) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#") or line == "c" or line.startswith("c "):
            continue
        if not line and not keep_blank:
            continue
        out.append(line)
    return out


def _ints(tokens: Iterable[str], where: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"{where}: expected integers ({exc})") from None


def canonical(text: str) -> bytes:
    """Whitespace-normalised instance bytes: single spaces, no trailing blank lines."""
    lines = [" ".join(line.split()) for line in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    while lines and not lines[0]:
        lines.pop(0)
    return ("\n".join(lines) + "\n").encode()


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & MASK64
    return h


def digest(text: str) -> str:
    return f"{fnv1a64(canonical(text)):016x}"


# -- parsers -------------------------------------------------------------------

def parse_graph(text: str, multigraph: bool = False) -> Graph:
    lines = _lines(text)
    if not lines or not lines[0].startswith("p "):
        raise ParseError("graph: first line must be 'p edge <n> <m>'")
    head = lines[0].split()
    if len(head) != 4 or head[1] not in ("edge", "col"):
        raise ParseError("graph: malformed header, expected 'p edge <n> <m>'")
    n, m = _ints(head[2:], "graph header")
    edges = []
    for k, line in enumerate(lines[1:], start=2):
        tok = line.split()
        if tok[0] != "e" or len(tok) != 3:
            raise ParseError(f"graph line {k}: expected 'e <u> <v>'")
        u, v = _ints(tok[1:], f"graph line {k}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"graph line {k}: vertex outside 1..{n}")
        edges.append((u - 1, v - 1))
    if len(edges) != m:
        raise ParseError(f"graph: header announces {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges, multigraph)
    except ValueError as exc:
        raise ParseError(f"graph: {exc}") from None


def parse_cnf(text: str) -> CnfFormula:
    lines = _lines(text)
    if not lines or not lines[0].startswith("p "):
        raise ParseError("cnf: first line must be 'p cnf <v> <m>'")
    head = lines[0].split()
    if len(head) != 4 or head[1] != "cnf":
        raise ParseError("cnf: malformed header")
    v, m = _ints(head[2:], "cnf header")
    lits = _ints(" ".join(lines[1:]).split(), "cnf body")
    clauses, cur = [], []
    for lit in lits:
        if lit == 0:
            clauses.append(cur)
            cur = []
        else:
            cur.append(lit)
    if cur:
        raise ParseError("cnf: last clause not terminated by 0")
    if len(clauses) != m:
        raise ParseError(f"cnf: header announces {m} clauses, found {len(clauses)}")
    try:
        return CnfFormula(v, clauses)
    except ValueError as exc:
        raise ParseError(f"cnf: {exc}") from None


def parse_matrices(text: str, count: int | None = None) -> list[list[list[int]]]:
    blocks, cur = [], []
    for line in _lines(text, keep_blank=True):
        if not line:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append(_ints(line.split(), "matrix row"))
    if cur:
        blocks.append(cur)
    for b in blocks:
        if len({len(r) for r in b}) != 1:
            raise ParseError("matrix: rows of unequal length")
    if count is not None and len(blocks) != count:
        raise ParseError(f"matrix: expected {count} matrix block(s), found {len(blocks)}")
    return blocks


def parse_bool_pair(text: str):
    A, B = parse_matrices(text, 2)
    for M in (A, B):
        if any(v not in (0, 1) for r in M for v in r):
            raise ParseError("matrix: Boolean entries must be 0 or 1")
    if len(A[0]) != len(B[0]):
        raise ParseError("matrix: A and B need the same number of columns")
    return A, B


def parse_square(text: str):
    (M,) = parse_matrices(text, 1)
    if any(len(r) != len(M) for r in M):
        raise ParseError("matrix: permanent needs a square matrix")
    return M


def parse_array(text: str) -> tuple[list[int], int]:
    lines = _lines(text)
    bits = None
    if lines and lines[0].startswith("bits"):
        tok = lines[0].split()
        if len(tok) != 2:
            raise ParseError("array: expected 'bits <t>'")
        (bits,) = _ints(tok[1:], "array header")
        lines = lines[1:]
    arr = _ints(" ".join(lines).split(), "array")
    if len(arr) < 2:
        raise ParseError("array: need at least two entries")
    if any(v < 0 for v in arr):
        raise ParseError("array: entries must be nonnegative")
    if bits is None:
        bits = max(1, max(v.bit_length() for v in arr))
    if any(v >> bits for v in arr):
        raise ParseError(f"array: entry exceeds {bits} bits")
    return arr, bits


def parse_setfamily(text: str) -> tuple[list[int], int]:
    """Returns (bitmasks over 0..n-1, n)."""
    lines = _lines(text)
    n = None
    if lines and lines[0].startswith("universe"):
        tok = lines[0].split()
        if len(tok) != 2:
            raise ParseError("setfamily: expected 'universe <n>'")
        (n,) = _ints(tok[1:], "setfamily header")
        lines = lines[1:]
    fam = []
    for k, line in enumerate(lines, start=1):
        elems = _ints(line.split(), f"setfamily line {k}")
        if any(e < 1 for e in elems):
            raise ParseError(f"setfamily line {k}: elements are 1-based")
        fam.append(sum(1 << (e - 1) for e in set(elems)))
    if n is None:
        n = max((m.bit_length() for m in fam), default=0)
    if any(m >> n for m in fam):
        raise ParseError(f"setfamily: element outside universe 1..{n}")
    return fam, n


def parse_csp(text: str) -> Csp2Instance:
    lines = _lines(text)
    if not lines:
        raise ParseError("csp: empty input")
    head = _ints(lines[0].split(), "csp header")
    if len(head) != 3:
        raise ParseError("csp: header must be '<n> <sigma> <m>'")
    n, sigma, m = head
    cons = []
    for k, line in enumerate(lines[1:], start=2):
        tok = line.split()
        if len(tok) < 2:
            raise ParseError(f"csp line {k}: expected '<u> <v> ...'")
        u, v = _ints(tok[:2], f"csp line {k}")
        pairs, weight = set(), 1
        for item in tok[2:]:
            if item.startswith("w="):
                (weight,) = _ints([item[2:]], f"csp line {k}")
            else:
                parts = item.split(",")
                if len(parts) != 2:
                    raise ParseError(f"csp line {k}: bad pair {item!r}")
                a, b = _ints(parts, f"csp line {k}")
                if not (0 <= a < sigma and 0 <= b < sigma):
                    raise ParseError(f"csp line {k}: value outside 0..{sigma - 1}")
                pairs.add((a, b))
        has_pairs = any(not it.startswith("w=") for it in tok[2:])
        cons.append(Constraint(u - 1, v - 1, frozenset(pairs) if has_pairs else None, weight))
    if len(cons) != m:
        raise ParseError(f"csp: header announces {m} constraints, found {len(cons)}")
    try:
        return Csp2Instance(n, sigma, cons)
    except ValueError as exc:
        raise ParseError(f"csp: {exc}") from None


# -- proof files -----------------------------------------------------------------

@dataclass
class ProofFile:
    problem: str
    digest: str
    q: int
    d: int
    e: int
    coeffs: list

    def poly(self) -> Poly:
        return Poly(self.coeffs, self.q)

    def dumps(self) -> str:
        head = ["cpf 1", f"problem {self.problem}", f"digest {self.digest}",
                f"q {self.q}", f"d {self.d}", f"e {self.e}"]
        return "\n".join(head + [str(c) for c in self.coeffs]) + "\n"

    @classmethod
    def from_proof(cls, problem: str, dig: str, q: int, d: int, e: int, proof: Poly) -> "ProofFile":
        coeffs = list(proof.coeffs) + [0] * (d + 1 - len(proof.coeffs))
        return cls(problem, dig, q, d, e, coeffs)

    @classmethod
    def loads(cls, text: str) -> "ProofFile":
        lines = text.splitlines()
        if len(lines) < 6 or lines[0].strip() != "cpf 1":
            raise ParseError("proof file: missing 'cpf 1' header")
        fields = {}
        for key, line in zip(("problem", "digest", "q", "d", "e"), lines[1:6]):
            tok = line.split(maxsplit=1)
            if len(tok) != 2 or tok[0] != key:
                raise ParseError(f"proof file: expected '{key} ...', got {line!r}")
            fields[key] = tok[1].strip()
        q, d, e = _ints([fields["q"], fields["d"], fields["e"]], "proof header")
        coeffs = _ints([ln for ln in lines[6:] if ln.strip()], "proof payload")
        if len(coeffs) != d + 1:
            raise ParseError(f"proof file: payload has {len(coeffs)} values, expected {d + 1}")
        if any(not 0 <= c < q for c in coeffs):
            raise ParseError("proof file: payload value outside [0, q)")
        return cls(fields["problem"], fields["digest"], q, d, e, coeffs)

    @classmethod
    def read(cls, path) -> "ProofFile":
        return cls.loads(Path(path).read_text())
