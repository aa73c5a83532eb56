"""Command-line entry point: ``fracjump <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors (non-transitive input,
nothing found, bad files) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .arith import FactoredInteger
from .compiler import FORMAT_VERSION, compile_program, deserialize, serialize
from .errors import FracJumpError, InvalidInputError, NotFoundError
from .field import (
    GF,
    STRATEGIES,
    is_irreducible,
    is_projectively_primitive,
    iter_projectively_primitive,
    make_primitive,
    parse_poly,
    projective_group_order,
)
from .generator import (
    CompoundGenerator,
    FJState,
    ForcedJumpConfig,
    ForcedJumpState,
    SecretPrimeConfig,
    encode_stream,
)
from .oracle import absolute_jump_index, bench, format_report, program_orbit, verify_full_orbit
from .projective import companion_matrix, parse_matrix

SEED_ENV = "FRACJUMP_SEED"


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _hint(args, p: int, degree: int) -> FactoredInteger | None:
    if not getattr(args, "hint_factors", None):
        return None
    primes = [int(t) for t in args.hint_factors.split(",") if t]
    return FactoredInteger.from_primes(projective_group_order(p, degree), primes)


def _poly(args):
    return parse_poly(args.poly, GF(args.p))


def _matrix(args):
    if args.matrix:
        return parse_matrix(args.matrix, GF(args.p))
    if args.poly:
        return companion_matrix(_poly(args))
    raise InvalidInputError("give --poly or --matrix")


def _point(text: str | None, modulus: int, n: int):
    if text is None:
        return (0,) * n
    try:
        vals = tuple(int(t) % modulus for t in text.split(","))
    except ValueError as exc:
        raise InvalidInputError(f"bad point {text!r}") from exc
    if len(vals) != n:
        raise InvalidInputError(f"start point needs {n} coordinates")
    return vals


def _load_program(path):
    return deserialize(Path(path).read_bytes())


def _emit(args, points, modulus):
    data = encode_stream(points, modulus, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
    elif args.format == "raw":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        sys.stdout.write(data.decode())


def cmd_search_poly(args):
    found = iter_projectively_primitive(args.p, args.degree, args.strategy, seed=args.seed,
                                        max_tries=args.max_tries, hint=_hint(args, args.p, args.degree))
    polys = list(found) if args.all else [next(found, None)]
    if not polys or polys[0] is None:
        raise NotFoundError(f"no projectively primitive polynomial of degree {args.degree} over F_{args.p}")
    for f in polys:
        print(f"{f.to_csv()}\t{f}")
    return 0


def cmd_check_poly(args):
    f = _poly(args)
    irr = is_irreducible(f)
    print(f"polynomial: {f}")
    print(f"irreducible: {_bool(irr)}")
    pp = irr and is_projectively_primitive(f.monic(), _hint(args, f.p, f.degree))
    print(f"projectively_primitive: {_bool(pp)}")
    return 0


def cmd_make_primitive(args):
    f = _poly(args)
    lam, g = make_primitive(f, _hint(args, f.p, f.degree))
    print(f"lambda: {lam.value}")
    print(f"primitive: {g.to_csv()}")
    print(f"polynomial: {g}")
    return 0


def cmd_compile(args):
    M = _matrix(args)
    prog = compile_program(M, assume_transitive=args.assume_transitive,
                           hint=_hint(args, M.p, M.n + 1))
    data = serialize(prog)
    Path(args.out).write_bytes(data)
    print(prog.describe())
    print(f"bytes: {len(data)}")
    return 0


def cmd_gen(args):
    prog = _load_program(args.program)
    state = FJState(prog, _point(args.start, prog.p, prog.n))
    _emit(args, state.next(args.count), prog.p)
    return 0


def _write_report(args, d: dict):
    sys.stdout.write(format_report(d))
    if args.json:
        Path(args.json).write_text(json.dumps(d, indent=2) + "\n")


def cmd_verify_orbit(args):
    prog = _load_program(args.program)
    report = program_orbit(prog, _point(args.start, prog.p, prog.n))
    _write_report(args, {"p": prog.p, "n": prog.n, **report.to_dict()})
    if args.plot:
        from .plotting import plot_branch_histogram
        plot_branch_histogram(report, args.plot, prog.p, prog.n)
    return 0 if report.is_full_cycle else 1


def cmd_jump_index(args):
    M = _matrix(args)
    print(f"absolute_jump_index: {absolute_jump_index(M)}")
    return 0


def cmd_compound(args):
    programs = [_load_program(path) for path in args.program]
    G = CompoundGenerator(programs)
    G.current = _point(args.start, G.N, G.n)
    if args.verify:
        N, n = G.N, G.n

        def index(x):
            r = 0
            for c in reversed(x):
                r = r * N + c
            return r

        report = verify_full_orbit(G, G.current, N**n, index=index)
        _write_report(args, {"N": N, "u": G.u, "orbit_length": report.orbit_length,
                             "is_full_cycle": report.is_full_cycle})
        return 0 if report.is_full_cycle else 1
    _emit(args, G.next(args.count), G.N)
    return 0


def cmd_harden(args):
    prog = _load_program(args.program)
    start = _point(args.start, prog.p, prog.n)
    if args.mode == "secret-prime":
        if args.out_modulus is None:
            raise InvalidInputError("secret-prime needs --out-modulus")
        cfg = SecretPrimeConfig(FJState(prog, start), args.out_modulus)
        points = [cfg.next() for _ in range(args.count)]
        modulus = cfg.out_modulus
    else:
        cfg = ForcedJumpConfig(prog, args.threshold)
        points = ForcedJumpState(cfg, start).next(args.count)
        modulus = prog.p
    _emit(args, points, modulus)
    return 0


def cmd_bench(args):
    if args.program:
        prog = _load_program(args.program)
    else:
        M = _matrix(args)
        prog = compile_program(M, assume_transitive=args.assume_transitive,
                               hint=_hint(args, M.p, M.n + 1))
    report = bench(prog, (args.icg_a, args.icg_b), args.iterations, args.runs)
    _write_report(args, report.to_dict())
    if args.plot:
        from .plotting import plot_bench
        plot_bench(report, args.plot)
    return 0


def _add_field_inputs(sp, matrix=True):
    sp.add_argument("--p", type=int, required=True, help="prime modulus (decimal)")
    sp.add_argument("--poly", required=not matrix, help='polynomial: "3,3,0,1" or "x^3+3*x+3"')
    if matrix:
        sp.add_argument("--matrix", help='matrix rows: "0,0,3;4,0,3;0,4,0"')
    sp.add_argument("--hint-factors",
                    help="comma-separated primes factoring (p^m-1)/(p-1), bypasses factoring")


def _add_stream_outputs(sp):
    sp.add_argument("--start", help="start point, comma-separated (default zero vector)")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--format", choices=("dec", "raw"), default="dec")
    sp.add_argument("--out", help="write the stream to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracjump", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"fracjump {__version__} (FJMP format {FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("search-poly", help="find projectively primitive polynomials")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--strategy", choices=STRATEGIES, default="exhaustive-lex")
    default_seed = os.environ.get(SEED_ENV)
    sp.add_argument("--seed", type=int, default=int(default_seed) if default_seed else 0)
    sp.add_argument("--max-tries", type=int, default=100_000)
    sp.add_argument("--all", action="store_true", help="list every hit instead of the first")
    sp.add_argument("--hint-factors")
    sp.set_defaults(func=cmd_search_poly)

    sp = sub.add_parser("check-poly", help="irreducibility and projective primitivity")
    _add_field_inputs(sp, matrix=False)
    sp.set_defaults(func=cmd_check_poly)

    sp = sub.add_parser("make-primitive", help="rescale into a primitive polynomial")
    _add_field_inputs(sp, matrix=False)
    sp.set_defaults(func=cmd_make_primitive)

    sp = sub.add_parser("compile", help="compile a transitive map to an .fjp program")
    _add_field_inputs(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--assume-transitive", action="store_true")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("gen", help="stream points of a compiled program")
    sp.add_argument("--program", required=True)
    _add_stream_outputs(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify-orbit", help="exhaustive full-orbit check")
    sp.add_argument("--program", required=True)
    sp.add_argument("--start")
    sp.add_argument("--json", help="also write the report as JSON")
    sp.add_argument("--plot", help="write a branch histogram figure")
    sp.set_defaults(func=cmd_verify_orbit)

    sp = sub.add_parser("jump-index", help="brute-force absolute jump index")
    _add_field_inputs(sp)
    sp.set_defaults(func=cmd_jump_index)

    sp = sub.add_parser("compound", help="CRT compound of programs over distinct primes")
    sp.add_argument("--program", action="append", required=True)
    _add_stream_outputs(sp)
    sp.add_argument("--verify", action="store_true", help="check the full N^n cycle instead")
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_compound)

    sp = sub.add_parser("harden", help="secret-prime or forced-jump wrapping")
    sp.add_argument("--mode", choices=("secret-prime", "forced-jump"), required=True)
    sp.add_argument("--program", required=True)
    sp.add_argument("--out-modulus", type=int)
    sp.add_argument("--threshold", type=int)
    _add_stream_outputs(sp)
    sp.set_defaults(func=cmd_harden)

    sp = sub.add_parser("bench", help="time FJ against an ICG baseline")
    sp.add_argument("--p", type=int)
    sp.add_argument("--poly")
    sp.add_argument("--matrix")
    sp.add_argument("--hint-factors")
    sp.add_argument("--program")
    sp.add_argument("--assume-transitive", action="store_true")
    sp.add_argument("--iterations", type=int, default=10_000)
    sp.add_argument("--runs", type=int, default=5)
    sp.add_argument("--icg-a", type=int, default=1)
    sp.add_argument("--icg-b", type=int, default=1)
    sp.add_argument("--json")
    sp.add_argument("--plot")
    sp.set_defaults(func=cmd_bench)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "bench" and not args.program and args.p is None:
            parser.error("bench needs --program or --p with --poly/--matrix")
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except FracJumpError as exc:
        print(f"error[{exc.name}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
