"""Quick end-to-end run of every problem against its oracle (``camelot selftest``)."""

from __future__ import annotations

from typing import Callable

from .corpus import GENERATORS, instances
from .engine import NodeConfig, solve
from .problems import lookup


def run(emit: Callable[[str], None] = print, per_problem: int = 2, seed: int = 7) -> bool:
    ok_all = True
    cfg = NodeConfig(K=4, byzantine={1: "random-corrupt"}, seed=seed)
    for name in GENERATORS:
        for tag, text in instances(name, per_problem, seed):
            prob, params = lookup(tag)
            inst = prob.parse(text)
            try:
                tasks = prob.tasks(inst, params)
                for t in tasks:
                    # enough slack that one corrupt node out of four stays decodable
                    t.e = 2 * (t.d + 1) + cfg.K
                got = prob.combine(inst, params, [solve(t, cfg) for t in tasks])
                want = prob.oracle(inst, params, 5e6)
                ok = got == want
                detail = prob.fmt(got)
            except Exception as exc:  # report and keep going
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            ok_all &= ok
            emit(f"{'PASS' if ok else 'FAIL'} {tag:<18} {detail[:60]}")
    emit("selftest " + ("passed" if ok_all else "FAILED"))
    return ok_all
