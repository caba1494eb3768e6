"""Problem registry: tag -> parser, proof tasks, answer assembly, oracle.

A tag is a problem name with optional parameters, e.g. ``cliques:k=6`` or
``setpartition:t=3,ordered=1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from . import appendix as ap
from . import graphs as gr
from . import io
from . import oracles as orc
from . import partition as pt
from .graphs import GuardExceeded


@dataclass
class Problem:
    name: str
    kind: str                                     # input format name
    parse: Callable[[str], Any]
    tasks: Callable[[Any, dict], list]
    combine: Callable[[Any, dict, list], Any]
    oracle: Callable[[Any, dict, float], Any]
    fmt: Callable[[Any], str]
    defaults: dict


def parse_tag(tag: str) -> tuple[str, dict]:
    name, _, rest = tag.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r} in problem tag")
        try:
            params[key.strip()] = int(val)
        except ValueError:
            raise ValueError(f"parameter {key} must be an integer") from None
    return name.strip(), params


def _vec(ans) -> str:
    return " ".join(str(v) for v in ans)


def _mat(ans) -> str:
    return " | ".join(_vec(r) for r in ans)


def _sum(_inst, _p, vals):
    return sum(vals)


def _single(_inst, _p, vals):
    (v,) = vals
    return v


def _guarded(work: float, guard: float, what: str):
    if work > guard:
        raise GuardExceeded(f"{what}: estimated work {work:.3g} exceeds guard {guard:.3g}")


def _clique_oracle(G, p, guard):
    return gr.clique_count_oracle(G, p["k"], int(guard))


def _triangle_oracle(G, p, guard):
    _guarded(float(G.n) ** 3, guard, "trace(A^3)")
    return gr.triangle_oracle(G)


def _chromatic_oracle(G, p, guard):
    # memoised recursion visits roughly e^n distinct minors
    _guarded(math.e ** G.n * max(G.m, 1), guard, "deletion-contraction")
    return orc.chromatic_oracle(G)


def _tutte_oracle(G, p, guard):
    _guarded(2.0 ** min(G.m, 60), guard, "deletion-contraction")
    return orc.tutte_oracle(G)


def _setpartition_tasks(inst, p):
    fam, n = inst
    return [pt.set_partition_task(fam, n, p["t"])]


def _setpartition_combine(inst, p, vals):
    (v,) = vals
    if p["ordered"]:
        return v
    return v // math.factorial(p["t"])


def _setpartition_oracle(inst, p, guard):
    fam, n = inst
    _guarded(float(len(set(fam))) ** min(p["t"], n + 1), guard, "exact cover search")
    c = orc.exact_cover_count(fam, n, p["t"])
    return c * math.factorial(p["t"]) if p["ordered"] else c


def _setcover_oracle(inst, p, guard):
    fam, n = inst
    _guarded(float(len(fam)) ** p["t"], guard, "tuple enumeration")
    return ap.setcover_oracle(fam, n, p["t"])


def _cnf_oracle(F, p, guard):
    return ap.cnf_oracle(F, guard)


def _perm_oracle(M, p, guard):
    _guarded(2.0 ** len(M) * len(M) ** 2, guard, "Ryser")
    return ap.permanent_oracle(M)


def _csp_tasks(inst, p):
    exps = ap.csp_exponents(inst)
    top = len(inst.constraints) * inst.W if inst.constraints else 0
    return [ap.csp_form_task(inst, w0, exps) for w0 in range(top + 1)]


def _csp_combine(inst, p, vals):
    coeffs = pt.interpolate_exact(list(range(len(vals))), list(vals))
    return coeffs + [0] * (len(vals) - len(coeffs))


def _csp_oracle(inst, p, guard):
    return ap.csp_oracle(inst, guard)


REGISTRY: dict[str, Problem] = {}


def _reg(p: Problem):
    REGISTRY[p.name] = p


_reg(Problem("cliques", "graph", io.parse_graph,
             lambda G, p: [gr.clique_task(G, p["k"])], _single, _clique_oracle, str, {"k": 6}))
_reg(Problem("triangles", "graph", io.parse_graph,
             lambda G, p: gr.triangle_tasks(G), _sum, _triangle_oracle, str, {}))
_reg(Problem("chromatic", "graph", io.parse_graph,
             lambda G, p: pt.chromatic_tasks(G), lambda G, p, v: pt.chromatic_combine(G, v),
             _chromatic_oracle, pt.format_univariate, {}))
_reg(Problem("tutte", "graph", lambda s: io.parse_graph(s, multigraph=True),
             lambda G, p: pt.tutte_tasks(G), lambda G, p, v: pt.tutte_combine(G, v),
             _tutte_oracle, pt.format_bivariate, {}))
_reg(Problem("setpartition", "setfamily", io.parse_setfamily, _setpartition_tasks,
             _setpartition_combine, _setpartition_oracle, str, {"t": 2, "ordered": 0}))
_reg(Problem("setcover", "setfamily", io.parse_setfamily,
             lambda inst, p: [ap.setcover_task(inst[0], inst[1], p["t"])], _single,
             _setcover_oracle, str, {"t": 2}))
_reg(Problem("ov", "matrix", io.parse_bool_pair,
             lambda inst, p: [ap.ov_task(*inst)], _single,
             lambda inst, p, g: ap.ov_oracle(*inst), _vec, {}))
_reg(Problem("cnfsat", "cnf", io.parse_cnf, lambda F, p: [ap.cnfsat_task(F)], _single,
             _cnf_oracle, str, {}))
_reg(Problem("hamming", "matrix", io.parse_bool_pair,
             lambda inst, p: [ap.hamming_task(*inst)], _single,
             lambda inst, p, g: ap.hamming_oracle(*inst), _mat, {}))
_reg(Problem("conv3sum", "array", io.parse_array,
             lambda inst, p: [ap.conv3sum_task(*inst)], _single,
             lambda inst, p, g: (lambda c: c + [sum(c)])(ap.conv3sum_oracle(inst[0])), _vec, {}))
_reg(Problem("permanent", "matrix", io.parse_square,
             lambda M, p: [ap.permanent_task(M)], _single, _perm_oracle, str, {}))
_reg(Problem("csp2", "csp", io.parse_csp, _csp_tasks, _csp_combine, _csp_oracle, _vec, {}))


def lookup(tag: str) -> tuple[Problem, dict]:
    name, params = parse_tag(tag)
    if name not in REGISTRY:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(sorted(REGISTRY))}")
    prob = REGISTRY[name]
    unknown = set(params) - set(prob.defaults)
    if unknown:
        raise ValueError(f"unknown parameter(s) {sorted(unknown)} for {name}")
    return prob, {**prob.defaults, **params}
