"""Arithmetic primitives: sieved d, φ, μ, divisor lists and Ramanujan sums."""

from arith.ramanujan import ramanujan_sum
from arith.sieve import (
    DivisorTable,
    build_divisor_table,
    divisors,
    hyperbola_divisor_sum,
    mertens_check,
)

__all__ = [
    "DivisorTable",
    "build_divisor_table",
    "divisors",
    "hyperbola_divisor_sum",
    "mertens_check",
    "ramanujan_sum",
]
