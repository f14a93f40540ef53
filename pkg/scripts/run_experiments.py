#!/usr/bin/env python3
"""
Run the divisor-sum experiments from the command line.

Usage:
    divisor-l1 tables
    divisor-l1 lemma1 --x-grid 1e4,1e5,1e6,1e7
    divisor-l1 lemma2 --x-grid 1e4,1e5,1e6,1e7 --delta 2
    divisor-l1 lemma3 --x-grid 1e4,1e5,1e6
    divisor-l1 theorem --x-grid 2^10..2^18 --multiplier 16 --format csv
    divisor-l1 identities --x-grid 1e3,1e4,1e5 --q-max 100

Exit status is 0 when every check passes, 1 when a check fails and 2 on
bad arguments or runtime errors.
"""

import argparse
import dataclasses
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional

from arith import build_divisor_table
from experiments import (
    configure_logging,
    load_config,
    run_identities,
    run_lemma1,
    run_lemma2,
    run_lemma3,
    run_tables,
    run_theorem,
)

logger = logging.getLogger(__name__)

DEFAULT_GRIDS = {
    "lemma1": "1e4,1e5,1e6,1e7",
    "lemma2": "1e4,1e5,1e6,1e7",
    "lemma3": "1e4,1e5,1e6",
    "theorem": "2^10..2^18",
    "identities": "1e3,1e4,1e5",
}

_POWER = re.compile(r"^(\d+)\^(\d+)$")


def _parse_point(token: str) -> int:
    match = _POWER.match(token)
    if match:
        return int(match.group(1)) ** int(match.group(2))
    value = float(token)
    if not value.is_integer():
        raise ValueError(f"x must be an integer, got {token!r}")
    return int(value)


def parse_x_grid(text: str) -> List[int]:
    """Parse "1e4,1e5", "1000,2000" or a power range "2^10..2^18"."""
    points: List[int] = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if ".." in token:
            low, high = token.split("..", 1)
            low_match, high_match = _POWER.match(low), _POWER.match(high)
            if not (low_match and high_match and low_match.group(1) == high_match.group(1)):
                raise ValueError(f"range {token!r} must look like b^i..b^j")
            base = int(low_match.group(1))
            points.extend(
                base**k for k in range(int(low_match.group(2)), int(high_match.group(2)) + 1)
            )
        else:
            points.append(_parse_point(token))
    if not points:
        raise ValueError(f"empty x grid: {text!r}")
    return sorted(set(points))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Numerical experiments for the L1 norm of the divisor exponential sum"
    )
    parser.add_argument(
        "command",
        choices=["lemma1", "lemma2", "lemma3", "theorem", "tables", "identities"],
        help="Experiment to run",
    )
    parser.add_argument("--x-grid", help="Comma-separated x values or a range like 2^10..2^18")
    parser.add_argument(
        "--delta", type=float, default=2.0, help="Dissection exponent, γ = x^(1/Δ) (default: 2)"
    )
    parser.add_argument(
        "--multiplier", type=int, help="Grid size M = multiplier·x for the L1 sampling"
    )
    parser.add_argument(
        "--q-max", type=int, default=100, help="Largest modulus for identities (default: 100)"
    )
    parser.add_argument(
        "--q-strategy",
        choices=["primes", "composites", "mixed"],
        default="mixed",
        help="Moduli swept by lemma3 (default: mixed)",
    )
    parser.add_argument("--out", "-o", help="Report path (default: <output dir>/<command>.<fmt>)")
    parser.add_argument(
        "--format", "-f", choices=["json", "csv"], default="json", help="Report format"
    )
    parser.add_argument("--precision", type=int, help="mpmath digits for numeric constants")
    return parser


def _sieve_limit(command: str, xs: List[int], delta: float) -> int:
    if command == "lemma2":
        return max(int(max(xs) ** (1.0 / delta) + 1e-9), 1)
    return max(xs)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the experiment harness."""
    args = build_parser().parse_args(argv)

    try:
        config = load_config()
    except RuntimeError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2
    overrides = {}
    if args.multiplier is not None:
        overrides["multiplier"] = args.multiplier
    if args.precision is not None:
        overrides["precision"] = args.precision
    config = dataclasses.replace(config, **overrides)
    configure_logging(config.log_level, config.log_format)

    if not 1 <= config.precision <= 30:
        logger.error(f"--precision must be in [1, 30], got {config.precision}")
        return 2

    out = Path(args.out) if args.out else config.output_dir / f"{args.command}.{args.format}"

    try:
        if args.command == "tables":
            report = run_tables()
            print(report.text)
            if args.format != "json":
                logger.warning("tables are written as JSON only")
            report.write(out.with_suffix(".json") if not args.out else out)
            return 0 if report.passed else 1

        xs = parse_x_grid(args.x_grid or DEFAULT_GRIDS[args.command])
        limit = _sieve_limit(args.command, xs, args.delta)
        if limit > config.sieve_ceiling:
            raise ValueError(
                f"x grid needs a sieve up to {limit}, above the ceiling {config.sieve_ceiling}"
            )
        logger.info(f"Running {args.command} over x = {xs}")
        table = build_divisor_table(limit, config.sieve_ceiling)

        if args.command == "lemma1":
            report = run_lemma1(xs, table, precision=config.precision)
        elif args.command == "lemma2":
            report = run_lemma2(
                xs, args.delta, table, precision=config.precision, seed=config.seed
            )
        elif args.command == "lemma3":
            report = run_lemma3(xs, table, args.q_strategy)
        elif args.command == "theorem":
            report = run_theorem(xs, config.multiplier, table, delta=args.delta)
        else:
            report = run_identities(xs, args.q_max, table)
        report.write(out, args.format)
    except (ValueError, MemoryError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 2

    for label, ok in report.checks.items():
        logger.info(f"{report.name}: {label} {'ok' if ok else 'FAILED'}")
    if not report.passed:
        logger.error(f"{report.name}: acceptance checks failed")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
