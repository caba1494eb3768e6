"""camelot: prove, verify, oracle, bench, selftest.

Exit codes: 0 ok, 1 selftest failure, 2 parse/usage error, 3 decode failure,
4 verification rejected, 5 digest mismatch, 6 oracle or size guard exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import kernels
from .engine import MODES, NodeConfig, format_answer, run_pipeline, verify_proof
from .graphs import ORACLE_GUARD, GuardExceeded
from .io import ParseError, ProofFile, digest
from .problems import REGISTRY, lookup

EXIT_OK, EXIT_SELFTEST, EXIT_PARSE, EXIT_DECODE, EXIT_REJECT, EXIT_DIGEST, EXIT_GUARD = range(7)


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def parse_byzantine(specs: list[str] | None, K: int) -> dict:
    """'ids:mode' items, ids comma-separated, e.g. '0,3:random-corrupt'."""
    out = {}
    for spec in specs or []:
        ids, sep, mode = spec.partition(":")
        if not sep or mode not in MODES:
            raise CliError(EXIT_PARSE, f"bad --byzantine {spec!r}; modes: {', '.join(MODES)}")
        try:
            nodes = [int(x) for x in ids.split(",") if x]
        except ValueError:
            raise CliError(EXIT_PARSE, f"bad node id list in {spec!r}") from None
        for node in nodes:
            if not 0 <= node < K:
                raise CliError(EXIT_PARSE, f"byzantine node {node} outside [0, {K})")
            out[node] = mode
    return out


def _load(args):
    try:
        prob, params = lookup(args.problem)
    except (KeyError, ValueError) as exc:
        raise CliError(EXIT_PARSE, str(exc).strip("'\"")) from None
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {args.input}: {exc.strerror}") from None
    try:
        inst = prob.parse(text)
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"{args.input}: {exc}") from None
    return prob, params, inst, text


def _tasks(prob, params, inst):
    try:
        return prob.tasks(inst, params)
    except GuardExceeded as exc:
        raise CliError(EXIT_GUARD, str(exc)) from None
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None


def _primes(arg: str | None):
    if not arg:
        return None
    try:
        return [int(p) for p in arg.split(",") if p]
    except ValueError:
        raise CliError(EXIT_PARSE, "--primes expects a comma-separated list of primes") from None


def _print(lines, out=None):
    for line in lines:
        print(line)
        if out is not None:
            out.append(line)


def cmd_prove(args) -> int:
    prob, params, inst, text = _load(args)
    tasks = _tasks(prob, params, inst)
    cfg = NodeConfig(K=args.nodes, byzantine=parse_byzantine(args.byzantine, args.nodes),
                     seed=args.seed)
    primes = _primes(args.primes)
    dig = digest(text)
    outdir = Path(args.out) if args.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    report, answers, worst = [], [], EXIT_OK
    _print([f"instance {args.input} digest {dig}", f"backend {kernels.BACKEND}",
            f"tasks {len(tasks)}"], report)
    for i, task in enumerate(tasks):
        if args.points is not None:
            task.e = args.points
        try:
            rep = run_pipeline(task, cfg, args.repeats, primes)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, f"task {i}: {exc}") from None
        _print([f"-- task {i}"] + rep.summary_lines(), report)
        if outdir:
            for j, (q, proof) in enumerate(sorted(rep.proofs.items())):
                rec = next(p for p in rep.primes if p.q == q)
                pf = ProofFile.from_proof(f"{args.problem}#{i}", dig, q, task.d, rec.e, proof)
                (outdir / f"task{i:04d}-p{j}.cpf").write_text(pf.dumps())
        if rep.aborted == "decode failure":
            worst = max(worst, EXIT_DECODE)
        elif rep.aborted:
            worst = EXIT_REJECT if worst != EXIT_DECODE else worst
        else:
            answers.append(rep.answer)
    if worst == EXIT_OK:
        ans = prob.combine(inst, params, answers)
        _print([f"answer {prob.fmt(ans)}"], report)
    else:
        _print(["answer unavailable"], report)
    if outdir:
        (outdir / "report.txt").write_text("\n".join(report) + "\n")
    return worst


def _proof_paths(items: list[str]) -> list[Path]:
    out = []
    for item in items:
        p = Path(item)
        out.extend(sorted(p.glob("*.cpf")) if p.is_dir() else [p])
    return out


def cmd_verify(args) -> int:
    prob, params, inst, text = _load(args)
    dig = digest(text)
    paths = _proof_paths(args.proof)
    if not paths:
        raise CliError(EXIT_PARSE, "no proof files given")
    proofs = []
    for path in paths:
        try:
            proofs.append((path, ProofFile.read(path)))
        except (OSError, ParseError) as exc:
            raise CliError(EXIT_PARSE, f"{path}: {exc}") from None
    for path, pf in proofs:
        if pf.digest != dig:
            print(f"{path}: digest {pf.digest} does not match instance digest {dig}")
            return EXIT_DIGEST
    tasks = _tasks(prob, params, inst)
    by_task: dict[int, dict] = {}
    status = EXIT_OK
    for path, pf in proofs:
        tag, _, idx = pf.problem.rpartition("#")
        if lookup(tag)[1] != params or lookup(tag)[0] is not prob or not idx.isdigit() \
                or int(idx) >= len(tasks):
            print(f"{path}: proof is for {pf.problem!r}, not for {args.problem!r}")
            return EXIT_DIGEST
        i = int(idx)
        task = tasks[i]
        if pf.d != task.d:
            print(f"{path}: degree {pf.d} differs from the task's {task.d}: reject")
            status = EXIT_REJECT
            continue
        rng = random.Random(f"{args.seed}:verify:{pf.q}:{i}")
        verdict = verify_proof(task.evaluator(pf.q), pf.poly(), args.repeats, rng)
        for x0, want, got in verdict.checks:
            flag = "ok" if want == got else "MISMATCH"
            print(f"{path.name}: q={pf.q} x0={x0} expected={want} claimed={got} {flag}")
        if not verdict.accepted:
            status = EXIT_REJECT
            continue
        by_task.setdefault(i, {})[pf.q] = pf.poly()
    if status != EXIT_OK:
        print("verdict reject")
        return status
    print("verdict accept")
    if len(by_task) == len(tasks):
        try:
            answers = []
            for i, task in enumerate(tasks):
                prod = 1
                for q in by_task[i]:
                    prod *= q
                if prod <= 2 * task.bound + 1:
                    raise ArithmeticError(f"task {i}: primes do not cover the magnitude bound")
                answers.append(task.extract(by_task[i]))
            print(f"answer {prob.fmt(prob.combine(inst, params, answers))}")
        except ArithmeticError as exc:
            print(f"answer unavailable ({exc})")
    else:
        print(f"answer unavailable (proofs for {len(by_task)} of {len(tasks)} tasks)")
    return EXIT_OK


def cmd_oracle(args) -> int:
    prob, params, inst, _ = _load(args)
    guard = args.oracle_guard_override or ORACLE_GUARD
    try:
        ans = prob.oracle(inst, params, guard)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    print(prob.fmt(ans))
    return EXIT_OK


def cmd_bench(args) -> int:
    from . import bench
    rows = bench.kernel_table(scale=args.scale, repeats=args.repeats)
    for line in bench.format_table(rows):
        print(line)
    print()
    for t, (s, n, r) in bench.term_ratios().items():
        print(f"terms t={t}: strassen {s} naive {n} ratio {r:.5f} (7/8)^t {(7 / 8) ** t:.5f}")
    return EXIT_OK if all(r["agree"] for r in rows) else EXIT_SELFTEST


def cmd_selftest(args) -> int:
    from . import selftest
    ok = selftest.run(print)
    return EXIT_OK if ok else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="camelot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    names = ", ".join(sorted(REGISTRY))

    def common(p):
        p.add_argument("--problem", required=True, help=f"problem tag, one of: {names}")
        p.add_argument("--input", required=True, help="instance file")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("prove", help="run the simulated pipeline and write proof files")
    common(p)
    p.add_argument("--nodes", type=int, default=4, help="simulated node count K (default 4)")
    p.add_argument("--points", type=int, default=None,
                   help="evaluation points e (default ceil((d+1)/0.8))")
    p.add_argument("--byzantine", action="append", metavar="IDS:MODE",
                   help="e.g. 0,2:random-corrupt; repeatable")
    p.add_argument("--repeats", type=int, default=2, help="verification repeats (default 2)")
    p.add_argument("--primes", default=None, help="comma-separated primes (default: automatic)")
    p.add_argument("--out", default=None, help="directory for proof files and report.txt")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("verify", help="check proof files against an instance")
    common(p)
    p.add_argument("--proof", action="append", required=True,
                   help="proof file or directory of .cpf files; repeatable")
    p.add_argument("--repeats", type=int, default=2)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force answer")
    common(p)
    p.add_argument("--oracle-guard-override", type=float, default=None,
                   help=f"raise the work guard (default {ORACLE_GUARD:.0e})")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("bench", help="compiled vs pure-Python kernel timings")
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("selftest", help="small end-to-end checks against oracles")
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE
    if getattr(args, "nodes", 1) < 1:
        print("error: --nodes must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
