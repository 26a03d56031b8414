"""Command-line front end: ``mcsatres {solve,translate,check,gen,bench}``.

Exit codes: 10 SAT, 20 UNSAT, 0 proof accepted or translation done,
1 proof rejected / UNKNOWN / translation failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import generators, textio
from .engine import Mcsat, ReplayError, RuleError, StepAccount
from .proofcore import ClauseSet, format_number
from .resstar import RES_STAR_T, RES_T, check, proof_length
from .theory import LRATheory, Mode
from .translate import TranslationError, mcsat_to_res, proof_account, res_bound, res_to_mcsat

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SAT = 10
EXIT_UNSAT = 20


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _account(acc: StepAccount) -> str:
    return f"total={acc.total} theory={acc.theory} non_theory={acc.non_theory}"


def cmd_solve(args) -> int:
    inst = textio.parse_instance(_read(args.instance))
    engine = Mcsat(LRATheory(Mode(args.mode)))
    result = engine.solve(inst.clauses, max_steps=args.max_steps)
    if args.trace:
        _write(args.trace, textio.dump_trace(result.trace))
    if result.status == "sat":
        print("SAT")
        model = result.model
        for name in inst.bools or sorted(model.booleans):
            print(f"{name} = {str(model.booleans.get(name, False)).lower()}")
        for name in inst.reals or sorted(model.theory):
            print(f"{name} = {format_number(model.theory.get(name, 0))}")
        code = EXIT_SAT
    elif result.status == "unsat":
        print("UNSAT")
        code = EXIT_UNSAT
    else:
        print(f"UNKNOWN(limit {args.max_steps})")
        code = EXIT_FAIL
    print(f"c mcsat steps: {_account(result.trace.account)}")
    if args.proof and result.status == "unsat":
        proof, acc = mcsat_to_res(result.trace, engine)
        _write(args.proof, textio.dump_proof(proof))
        print(f"c proof steps: {_account(acc)}")
    return code


def _detect(text: str) -> str:
    first = text.lstrip().split("\n", 1)[0]
    if f'"{textio.PROOF_FORMAT}"' in first:
        return "res-to-mcsat"
    if f'"{textio.TRACE_FORMAT}"' in first:
        return "mcsat-to-res"
    raise UsageError("input is neither a trace nor a proof file; pass --direction")


def cmd_translate(args) -> int:
    text = _read(args.input)
    direction = args.direction or _detect(text)
    if direction == "res-to-mcsat":
        proof = textio.load_proof(text)
        inputs = textio.parse_instance(_read(args.instance)).clauses if args.instance else None
        try:
            trace, acc = res_to_mcsat(proof, inputs)
        except (TranslationError, RuleError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"proof: {_account(proof_account(proof))} bound={res_bound(proof)}")
        print(f"mcsat: {_account(acc)}")
        out = textio.dump_trace(trace)
    else:
        trace = textio.load_trace(text)
        try:
            proof, acc = mcsat_to_res(trace, Mcsat(LRATheory(trace.mode)))
        except ReplayError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"mcsat: {_account(trace.account)}")
        print(f"proof: {_account(acc)}")
        out = textio.dump_proof(proof)
    if args.out:
        _write(args.out, out)
    return EXIT_OK


def cmd_check(args) -> int:
    proof = textio.load_proof(_read(args.proof))
    inputs = textio.parse_instance(_read(args.instance)).clauses if args.instance else proof.inputs()
    result = check(proof, inputs, args.system)
    print(result)
    return EXIT_OK if result else EXIT_FAIL


def _generate(family: str, n: int, seed: int | None) -> ClauseSet:
    if family in generators.FAMILIES:
        return generators.FAMILIES[family](n)
    if family == "random-cnf":
        return generators.random_cnf(seed, max_vars=n)
    if family == "random-lra":
        return generators.random_lra(seed, max_vars=n)
    return generators.random_mixed(seed, max_bools=n, max_vars=n)


GEN_FAMILIES = sorted(generators.FAMILIES) + ["random-cnf", "random-lra", "random-mixed"]


def cmd_gen(args) -> int:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    clauses = _generate(args.family, args.n, args.seed)
    text = textio.format_instance(clauses, f"{args.family} {args.n}")
    _write(args.out or "-", text)
    return EXIT_OK


def bench_rows(mode: Mode, max_size: int, max_steps: int):
    """Yield one row per family instance: name, status, trace and proof accounts."""
    engine = Mcsat(LRATheory(mode))
    limits = {"chain": 6, "pigeonhole": 3, "lra-diamond": 4}
    for family, fn in sorted(generators.FAMILIES.items()):
        for n in range(1, min(max_size, limits[family]) + 1):
            start = time.perf_counter()
            result = engine.solve(fn(n), max_steps=max_steps)
            proof_acc = None
            if result.status == "unsat":
                proof, proof_acc = mcsat_to_res(result.trace, engine)
            yield (f"{family}({n})", result.status, result.trace.account, proof_acc,
                   time.perf_counter() - start)


def cmd_bench(args) -> int:
    header = ("instance", "status", "mcsat", "m.theory", "m.other", "proof", "p.theory", "p.other", "sec")
    fmt = "{:<16} {:<7} {:>6} {:>8} {:>7} {:>6} {:>8} {:>7} {:>6}"
    print(fmt.format(*header))
    for name, status, acc, pacc, secs in bench_rows(Mode(args.mode), args.max_size, args.max_steps):
        p = (pacc.total, pacc.theory, pacc.non_theory) if pacc else ("-", "-", "-")
        print(fmt.format(name, status, acc.total, acc.theory, acc.non_theory, *p, f"{secs:.2f}"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcsatres", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def mode_flags(p):
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.COMPLETE.value)
        p.add_argument("--max-steps", type=int, default=200_000, metavar="N")

    p = sub.add_parser("solve", help="decide an instance file")
    p.add_argument("instance")
    mode_flags(p)
    p.add_argument("--trace", metavar="PATH", help="write the rule trace (JSON lines)")
    p.add_argument("--proof", metavar="PATH", help="on UNSAT, write the Res*(T) refutation")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("translate", help="trace -> proof or proof -> trace")
    p.add_argument("input")
    p.add_argument("--direction", choices=["res-to-mcsat", "mcsat-to-res"])
    p.add_argument("--instance", metavar="PATH", help="input clauses for a proof (default: its input steps)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("check", help="check a Res(T) / Res*(T) proof")
    p.add_argument("proof")
    p.add_argument("--instance", metavar="PATH", help="input clauses (default: the proof's input steps)")
    p.add_argument("--system", choices=[RES_T, RES_STAR_T], default=RES_STAR_T)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="step accounts for the generated families")
    mode_flags(p)
    p.add_argument("--max-size", type=int, default=3, metavar="N")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except textio.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


__all__ = ["main", "build_parser", "bench_rows", "proof_length"]
