"""Command-line front end: ``postulate {check,sweep,tables,trace,oracle}``.

Exit codes: 0 when every case is Good (or the trace Verified), 1 on usage
or precondition errors, 2 when a case is Defective or a check fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, replace
from fractions import Fraction
from pathlib import Path

from postulate.gfp import DEFAULT_PRIME, is_prime
from postulate.induction import MIN_DEGREE, Status, run_induction
from postulate.interpolation import (
    DEFAULT_TRIALS,
    ORACLE_MAX_COLUMNS,
    assign_integer_supports,
    check_postulation,
    oracle_check,
)
from postulate.schemes import (
    FatPointComponent,
    FatPointScheme,
    boundary_triples,
    parse_signature,
)
from postulate.survey import (
    CaseRecord,
    SweepConfig,
    Summary,
    print_progress,
    records_to_csv,
    report_json,
    resolve_jobs,
    run_sweep,
    run_tables,
    verify_boundary,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_support_file(path: Path, n: int) -> list[FatPointComponent]:
    """Explicit components, one per line: ``m: x0 x1 ... xn``.

    Coordinates are integers or fractions such as ``-3/4``; blank lines and
    ``#`` comments are ignored.
    """
    comps = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            m_text, coords_text = line.split(":", 1)
            m = int(m_text)
            coords = tuple(Fraction(c) for c in coords_text.split())
            coords = tuple(int(c) if c.denominator == 1 else c for c in coords)
            if len(coords) != n + 1:
                raise ValueError(f"expected {n + 1} coordinates, got {len(coords)}")
            comps.append(FatPointComponent(m, coords))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return comps


def _scheme_from_args(args) -> FatPointScheme:
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    try:
        sig = parse_signature(args.points or "")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    scheme = FatPointScheme.general(args.n, sig)
    if args.support_file:
        scheme = scheme.union(read_support_file(args.support_file, args.n))
    return scheme


def _check_prime(prime: int, d_max: int):
    if not is_prime(prime):
        raise UsageError(f"--prime {prime} is not prime")
    if prime <= d_max:
        raise UsageError(f"--prime {prime} must exceed the degree {d_max}")


def _emit(args, config: dict, records: list[CaseRecord], warnings=()):
    if args.format == "json":
        sys.stdout.write(report_json(config, records, warnings))
    else:
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        sys.stdout.write(records_to_csv(records))


def cmd_check(args) -> int:
    scheme = _scheme_from_args(args)
    _check_prime(args.prime, args.d)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.d < 0:
        raise UsageError("--d must be >= 0")
    if scheme.max_multiplicity >= args.prime:
        raise UsageError(f"--prime must exceed the multiplicity {scheme.max_multiplicity}")
    start = time.perf_counter()
    report = check_postulation(scheme, args.d, prime=args.prime, trials=args.trials, seed=args.seed)
    ms = (time.perf_counter() - start) * 1e3 if args.timing else None
    record = CaseRecord.from_report(report, ms=ms)
    config = {"n": args.n, "d": args.d, "points": args.points, "prime": args.prime,
              "trials": args.trials, "seed": args.seed}
    _emit(args, config, [record])
    return EXIT_OK if record.good else EXIT_FAIL


def _degree_range(args) -> tuple[int, int]:
    if args.d is not None:
        if args.d_min is not None or args.d_max is not None:
            raise UsageError("give either --d or --d-min/--d-max")
        return args.d, args.d
    if args.d_min is None or args.d_max is None:
        raise UsageError("sweep needs --d or both --d-min and --d-max")
    return args.d_min, args.d_max


def cmd_sweep(args) -> int:
    if args.n != 3:
        raise UsageError("boundary sweeps are defined for --n 3 only")
    d_min, d_max = _degree_range(args)
    try:
        config = SweepConfig(d_min, d_max, args.prime, args.trials, args.seed,
                             resolve_jobs(args.jobs), args.format, args.cache, args.timing)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records, warnings = run_sweep(config)
    _emit(args, config.to_dict(), records, warnings)
    summary = Summary.of(records)
    print(f"summary: total={summary.total} good={summary.good} defective={summary.defective} "
          f"ms={summary.ms:.1f}", file=sys.stderr)
    return EXIT_OK if summary.defective == 0 else EXIT_FAIL


def cmd_tables(args) -> int:
    _check_prime(args.prime, 10)
    rows = run_tables(args.prime, args.trials, args.seed, resolve_jobs(args.jobs))
    if args.format == "json":
        out = [{"label": r.label, "expected": "yes" if r.expected_good else "no",
                "got": "yes" if r.record.good else "no", "match": r.matches,
                "record": asdict(r.record)} for r in rows]
        print(json.dumps(out, indent=2))
    else:
        print("case,expected,got,rank,defect,match")
        for r in rows:
            print(f"{r.label},{'yes' if r.expected_good else 'no'},{'yes' if r.record.good else 'no'},"
                  f"{r.record.rank},{r.record.defect},{'ok' if r.matches else 'MISMATCH'}")
    bad = [r.label for r in rows if not r.matches]
    for label in bad:
        print(f"mismatch: {label}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_trace(args) -> int:
    if args.d is None:
        raise UsageError("trace needs --d")
    given = [v is not None for v in (args.x, args.y, args.z)]
    if any(given) and not all(given):
        raise UsageError("give all of --x --y --z, or none to trace every boundary triple")
    if args.d < MIN_DEGREE:
        raise UsageError(f"traces need d >= {MIN_DEGREE}")
    if not any(given):
        return _trace_all(args)
    try:
        trace = run_induction(args.d, args.x, args.y, args.z)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        print(trace.to_json(indent=2))
    else:
        sys.stdout.write(trace.to_text())
    if trace.status is not Status.VERIFIED:
        t, name = trace.failure
        where = f"t={t}" if t is not None else "global"
        print(f"failed check: {name} ({where})", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _trace_all(args) -> int:
    triples = boundary_triples(args.d)
    if args.sample is not None:
        triples = random.Random(args.seed).sample(triples, min(args.sample, len(triples)))
    summary = verify_boundary(args.d, triples, resolve_jobs(args.jobs),
                              print_progress if args.progress else None)
    out = {"d": summary.d, "total": summary.total, "verified": summary.verified,
           "failures": [list(f) for f in summary.failures], "max_ms": round(summary.max_ms, 3)}
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"d={summary.d} total={summary.total} verified={summary.verified} "
              f"failed={len(summary.failures)} max_ms={summary.max_ms:.3f}")
        for x, y, z, name in summary.failures:
            print(f"failed x={x} y={y} z={z} check={name}")
    return EXIT_OK if summary.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    scheme = _scheme_from_args(args)
    if args.d < 0:
        raise UsageError("--d must be >= 0")
    scheme = assign_integer_supports(scheme, args.seed)
    try:
        report = oracle_check(scheme, args.d, args.max_columns)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    record = replace(CaseRecord.from_report(report), seed=args.seed)
    config = {"n": args.n, "d": args.d, "points": args.points, "seed": args.seed, "oracle": "rational"}
    _emit(args, config, [record])
    return EXIT_OK if record.good else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="postulate", description="Postulation of fat point schemes in P^n.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $POSTULATE_JOBS or 1)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--no-timing", dest="timing", action="store_false",
                        help="leave the ms column empty so output is byte-for-byte reproducible")

    scheme = _Parser(add_help=False)
    scheme.add_argument("--n", type=int, default=3, help="ambient dimension")
    scheme.add_argument("--points", nargs="?", const="", default="", help="m:count[,m:count...], e.g. 4:9 or 5:3,4:7")
    scheme.add_argument("--support-file", type=Path, help="explicit components, lines 'm: x0 ... xn'")

    p = sub.add_parser("check", parents=[common, scheme], help="decide one scheme over GF(p)")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", parents=[common], help="every boundary triple of a degree range")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int)
    p.add_argument("--d-min", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--cache", type=Path, help="JSON-lines result cache to resume from")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tables", parents=[common], help="recompute the multiplicity-5 tables")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("trace", help="run the Horace descent tracer")
    p.add_argument("--d", type=int)
    p.add_argument("--x", type=int, help="4-points")
    p.add_argument("--y", type=int, help="3-points")
    p.add_argument("--z", type=int, help="2-points")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--sample", type=int, help="trace this many random boundary triples instead of all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("oracle", parents=[scheme], help="exact rational check on random integer supports")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-columns", type=int, default=ORACLE_MAX_COLUMNS)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"postulate {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # preconditions raised deeper in the library
        print(f"postulate {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
