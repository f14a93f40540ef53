"""Numeric values for the formal symbols, from mpmath.

a_k come from the Stieltjes constants, ζ(s) = 1/(s−1) + Σ_n (−1)^n γ_n (s−1)^n/n!,
and F_K, G_K are numerical derivatives of 1/ζ(2s) and 1/ζ(s+1) at s = 1.
"""

import logging
from typing import Dict, NamedTuple

import mpmath

from symbolic.series import DEFAULT_ORDER
from symbolic.tables import residue_divisor_square


logger = logging.getLogger(__name__)

MAX_PRECISION = 30


def _check_precision(precision: int) -> None:
    if not 1 <= precision <= MAX_PRECISION:
        raise ValueError(f"precision must be in [1, {MAX_PRECISION}] digits, got {precision}")


def numeric_constants(precision: int = MAX_PRECISION) -> Dict[str, mpmath.mpf]:
    """a1..a3, ζ(2), ζ′(2), ζ″(2), F0..F3 and G0..G3 to ``precision`` digits.

    Values are computed with 10 guard digits and returned as mpf numbers.

    Raises:
        ValueError: If precision is outside [1, 30].
    """
    _check_precision(precision)
    with mpmath.workdps(precision + 10):
        values = {
            "a1": +mpmath.euler,
            "a2": -mpmath.stieltjes(1),
            "a3": mpmath.stieltjes(2) / 2,
            "zeta2": mpmath.zeta(2),
            "zeta2_prime": mpmath.zeta(2, 1, 1),
            "zeta2_second": mpmath.zeta(2, 1, 2),
        }
        for k in range(4):
            values[f"F{k}"] = mpmath.diff(lambda s: 1 / mpmath.zeta(2 * s), 1, k)
            values[f"G{k}"] = mpmath.diff(lambda s: 1 / mpmath.zeta(s + 1), 1, k)
    logger.debug(f"Computed {len(values)} constants at {precision} digits")
    return values


class ResidueCheck(NamedTuple):
    symbolic: float
    numeric: float
    relative_gap: float


def numeric_residue_check(
    x: float, precision: int = MAX_PRECISION, order: int = DEFAULT_ORDER
) -> ResidueCheck:
    """The Σd² residue polynomial at L = log x against an mpmath Taylor oracle.

    The oracle is the u³ Taylor coefficient of u⁴ζ(s)⁴x^{s−1}/(ζ(2s)s) at
    s = 1, taken with ``singular=True`` so s = 1 itself is never evaluated.
    """
    _check_precision(precision)
    constants = numeric_constants(precision)
    with mpmath.workdps(precision + 10):
        log_x = mpmath.log(x)
        symbolic = residue_divisor_square(order).evaluate({**constants, "L": log_x})

        def regular_part(s):
            pole_free = (s - 1) ** 4 * mpmath.zeta(s) ** 4 / mpmath.zeta(2 * s)
            return pole_free * mpmath.exp((s - 1) * log_x) / s

        numeric = mpmath.taylor(regular_part, 1, 3, singular=True)[3]
        gap = abs(symbolic - numeric) / max(abs(numeric), 1)
    return ResidueCheck(float(symbolic), float(numeric), float(gap))
