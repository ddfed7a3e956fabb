"""Command line entry point (``pfaffgrass``)."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .census import CensusError, SamplingError, check_q
from .ffield import FieldError
from .harness import VerificationReport, WFileError, load_W, run_numeric, run_symbolic, save_W
from .motivic import ArithmeticOverflow

EXIT_OK, EXIT_FAILED, EXIT_SAMPLING, EXIT_OVERFLOW, EXIT_USAGE = 0, 1, 2, 3, 4
LONG_Q = 7  # q at or above this needs --long

log = logging.getLogger("pfaffgrass")


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    v = int(text)
    if not (0 <= v < 1 << 64):
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfaffgrass", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run symbolic or numeric checks")
    vsub = verify.add_subparsers(dest="mode", required=True)
    sym = vsub.add_parser("symbolic", help="S1-S4 in Z[L]")
    sym.add_argument("--out", type=Path)
    sym.add_argument("--timing", action="store_true", help="record per-phase wall time")

    num = vsub.add_parser("numeric", help="N1-N8 over F_q for a sampled W")
    num.add_argument("--q", type=int, required=True)
    num.add_argument("--seed", type=_u64, required=True)
    num.add_argument("--level", choices=("fast", "full"), default="fast")
    num.add_argument("--workers", type=_positive, default=1)
    num.add_argument("--max-retries", type=_positive, default=100)
    num.add_argument("--save-w", type=Path)
    num.add_argument("--out", type=Path)
    num.add_argument("--timing", action="store_true", help="record per-phase wall time")
    num.add_argument("--long", action="store_true", help=f"allow q >= {LONG_Q}")

    count = sub.add_parser("count", help="counts and fast checks for a saved W")
    count.add_argument("--q", type=int, required=True)
    count.add_argument("--w", type=Path, required=True)
    count.add_argument("--workers", type=_positive, default=1)
    count.add_argument("--out", type=Path)
    count.add_argument("--timing", action="store_true")
    count.add_argument("--long", action="store_true", help=f"allow q >= {LONG_Q}")
    return parser


def _check_q_arg(q: int, long: bool) -> None:
    try:
        check_q(q)
    except (FieldError, CensusError) as exc:
        raise UsageError(str(exc)) from None
    if q >= LONG_Q and not long:
        raise UsageError(f"q={q} is a long run; pass --long")


def _emit(report: VerificationReport, out: Path | None) -> None:
    text = report.to_json()
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)
    for c in report.checks:
        log.info("%s %s", c.name, "pass" if c.passed else "FAIL")


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "verify" and args.mode == "symbolic":
        report = run_symbolic(timing=args.timing)
    elif args.command == "verify":
        _check_q_arg(args.q, args.long)
        report, W = run_numeric(
            args.q, args.seed, args.level, args.workers, args.max_retries, timing=args.timing
        )
        if args.save_w:
            save_W(W, args.save_w)
    else:
        _check_q_arg(args.q, args.long)
        W = load_W(args.w)
        if W.q != args.q:
            raise UsageError(f"--q {args.q} does not match q={W.q} in {args.w}")
        report, _ = run_numeric(W.q, W.seed, "fast", args.workers, W=W, timing=args.timing)
    _emit(report, args.out)
    return EXIT_OK if report.verdict else EXIT_FAILED


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _dispatch(args)
    except SamplingError as exc:
        log.error("%s", exc)
        return EXIT_SAMPLING
    except ArithmeticOverflow as exc:
        log.error("overflow: %s", exc)
        return EXIT_OVERFLOW
    except (UsageError, WFileError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
