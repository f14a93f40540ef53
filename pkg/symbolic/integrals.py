"""Closed forms and sieve sums that feed the weighted-square coefficients."""

import logging
import math
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import mpmath
import numpy as np

from arith import DivisorTable
from symbolic.series import DEFAULT_ORDER, derivative_series, exp_series, zeta_laurent
from symbolic.sympoly import ZERO, SymPoly


logger = logging.getLogger(__name__)

MAX_LOG_POWER = 6
MAX_PHI_WEIGHT = 2
MIN_PHI_CUTOFF = 10
RATIONAL_CUTOFF = 200


def log_moment_polynomial(n: int) -> SymPoly:
    """m_n(L) = Σ_{r=0}^n n!(−1)^r L^{n−r}/(n−r)!, so ∫₁ˣ(log t)^n dt = x·m_n(log x) − (−1)^n n!."""
    if not 0 <= n <= MAX_LOG_POWER:
        raise ValueError(f"log power must be in [0, {MAX_LOG_POWER}], got {n}")
    L = SymPoly.symbol("L")
    total = ZERO
    for r in range(n + 1):
        total = total + L ** (n - r) * Fraction((-1) ** r * math.factorial(n), math.factorial(n - r))
    return total


class LogMoment(NamedTuple):
    value: float
    polynomial: SymPoly
    boundary: int


def log_moment_integral(n: int, x: float) -> LogMoment:
    """∫₁ˣ (log t)^n dt, with the ±n! boundary constant kept.

    Raises:
        ValueError: If n is outside [0, 6] or x < 1.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    polynomial = log_moment_polynomial(n)
    boundary = -((-1) ** n) * math.factorial(n)
    value = x * float(polynomial.evaluate({"L": math.log(x)})) + boundary
    return LogMoment(value=value, polynomial=polynomial, boundary=boundary)


class PhiLogweight(NamedTuple):
    exact: float
    exact_rational: Optional[Fraction]
    predicted: float
    gap: float


def phi_logweight_residue(Q: int, order: int = DEFAULT_ORDER) -> SymPoly:
    """Res_{s=1} 𝒜^{(Q)}(s)e^{(s−1)L}/(s−1) with 𝒜 = ζ(s)/ζ(s+1), L standing for log γ."""
    if not 0 <= Q <= MAX_PHI_WEIGHT:
        raise ValueError(f"log weight must be in [0, {MAX_PHI_WEIGHT}], got {Q}")
    dirichlet = zeta_laurent(order) * derivative_series("G", order)
    return (dirichlet.derivative_n(Q) * exp_series(SymPoly.symbol("L"), order)).shift(-1).residue()


def phi_logweight_sum(
    Q: int, gamma: float, table: DivisorTable, constants: dict, order: int = DEFAULT_ORDER
) -> PhiLogweight:
    """Σ_{q≤γ} φ(q)(−log q)^Q/q² from the sieve against its residue prediction.

    ``constants`` is the output of ``numeric_constants``. The sum is also
    returned as an exact rational when Q = 0 and γ is small.

    Raises:
        ValueError: If Q is outside [0, 2], γ < 10 or γ beyond the sieve.
    """
    if gamma < MIN_PHI_CUTOFF:
        raise ValueError(f"gamma must be >= {MIN_PHI_CUTOFF}, got {gamma}")
    cutoff = int(math.floor(gamma))
    if cutoff > table.limit:
        raise ValueError(f"gamma={gamma} outside sieve range [1, {table.limit}]")
    residue = phi_logweight_residue(Q, order)

    q = np.arange(1, cutoff + 1, dtype=np.float64)
    phi = table.phi[1 : cutoff + 1].astype(np.float64)
    exact = float(np.sum(phi * (-np.log(q)) ** Q / q**2))
    rational = None
    if Q == 0 and cutoff <= RATIONAL_CUTOFF:
        rational = sum(
            (Fraction(table.phi_of(k), k * k) for k in range(1, cutoff + 1)), Fraction(0)
        )

    predicted = float(residue.evaluate({**constants, "L": mpmath.log(gamma)}))
    logger.debug(f"φ-weighted sum Q={Q} γ={gamma}: exact={exact:.12g} predicted={predicted:.12g}")
    return PhiLogweight(exact, rational, predicted, exact - predicted)


def weighted_square_sum(
    alphas: Sequence[float], x: float, gamma: float, table: DivisorTable
) -> float:
    """(1/x) Σ_{q≤γ} (φ(q)/q²) ∫₁ˣ g_q(t)² dt for g_q = (α00+α01) + α10·log q + α01·log t.

    Each integral is exact: with g = A + B·log t it is A²I₀ + 2AB·I₁ + B²I₂.
    """
    alpha00, alpha01, alpha10 = (float(a) for a in alphas)
    cutoff = int(math.floor(gamma))
    if not 1 <= cutoff <= table.limit:
        raise ValueError(f"gamma={gamma} outside sieve range [1, {table.limit}]")
    moments = [log_moment_integral(n, x).value for n in range(3)]
    q = np.arange(1, cutoff + 1, dtype=np.float64)
    phi = table.phi[1 : cutoff + 1].astype(np.float64)
    A = alpha00 + alpha01 + alpha10 * np.log(q)
    B = alpha01
    integrals = A * A * moments[0] + 2.0 * A * B * moments[1] + B * B * moments[2]
    return float(np.sum(phi / q**2 * integrals)) / x
