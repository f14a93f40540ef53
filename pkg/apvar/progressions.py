"""Divisor sums in arithmetic progressions and their Ramanujan-sum main terms.

The main term comes in two conventions. ``"classical"`` is

    𝓜_x(q,a) = (x/q) Σ_{r|q} (c_r(a)/r)(log(x/r²) + 2γ_E − 1) = (1/q) Σ_{r|q} c_r(a) F(r),

and ``"exact"`` replaces F(r) by F_exact(r) = I_r(0)/r, which keeps the t=1
boundary term. Either way Σ_a 𝓜(q,a)e(ab/q) equals F(q/(q,b)) in the same
convention, which is what makes the finite Fourier identities exact.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Literal, NamedTuple, Tuple

import numpy as np
from sympy import divisors as _sympy_divisors
from sympy import mobius

from arith import DivisorTable, ramanujan_sum
from expsum import eval_S_direct
from majorarc import EULER_GAMMA, F, F_exact


logger = logging.getLogger(__name__)

Convention = Literal["classical", "exact"]


@lru_cache(maxsize=4096)
def _divisors(n: int) -> Tuple[int, ...]:
    return tuple(int(k) for k in _sympy_divisors(n))


@lru_cache(maxsize=4096)
def _mobius(n: int) -> int:
    return int(mobius(n))


def _star_value(q: int, x: float, convention: Convention) -> float:
    if convention == "classical":
        return F(q, x)
    if convention == "exact":
        return F_exact(q, x)
    raise ValueError(f"unknown main-term convention: {convention!r}")


@dataclass(frozen=True)
class ProgressionDecomposition:
    """Σ_{n≤x, n≡a (q)} d(n) split into main term and error, for a = 1..q.

    Index a−1 of each array holds residue class a (class q is n ≡ 0).
    """

    q: int
    x: int
    convention: str
    raw: np.ndarray  # int64, exact
    main: np.ndarray
    err: np.ndarray


def main_term(q: int, a: int, x: float, convention: Convention = "classical") -> float:
    """𝓜_x(q,a) as a finite Ramanujan-sum expansion over r | q.

    Raises:
        ValueError: If q < 1, a outside [1, q] or x < 1.
    """
    if q < 1 or not 1 <= a <= q:
        raise ValueError(f"need q >= 1 and 1 <= a <= q, got q={q}, a={a}")
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    terms = []
    for r in _divisors(q):
        c = ramanujan_sum(r, a)
        if c:
            terms.append(c * _star_value(r, x, convention))
    return math.fsum(terms) / q


def decompose(
    q: int, x: int, table: DivisorTable, convention: Convention = "classical"
) -> ProgressionDecomposition:
    """Residue-class sums of d(n), n ≤ x, with main terms and errors.

    Raises:
        ValueError: If x is outside the sieve range or q < 1.
    """
    if not 1 <= x <= table.limit:
        raise ValueError(f"x={x} outside sieve range [1, {table.limit}]")
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    rows = -(-x // q)
    padded = np.zeros(rows * q, dtype=np.int64)
    padded[:x] = table.d[1 : x + 1]
    # position n−1 holds d(n), so column j collects n ≡ j+1 (mod q)
    raw = padded.reshape(rows, q).sum(axis=0)
    main = np.array([main_term(q, a, x, convention) for a in range(1, q + 1)])
    err = raw - main
    for array in (raw, main, err):
        array.setflags(write=False)
    return ProgressionDecomposition(
        q=q, x=x, convention=convention, raw=raw, main=main, err=err
    )


def variance(q: int, x: int, table: DivisorTable, convention: Convention = "classical") -> float:
    """Σ_{a=1}^q E_x(q,a)². Meant for q ≤ √x; larger q is logged, not refused."""
    if q * q > x:
        logger.warning(f"variance requested beyond q <= sqrt(x): q={q}, x={x}")
    err = decompose(q, x, table, convention).err
    return float(np.dot(err, err))


class DftIdentity(NamedTuple):
    lhs: float
    rhs: float
    relative_gap: float
    mixed_gap: float


def _relative_gap(left: float, right: float) -> float:
    scale = max(abs(left), abs(right))
    return abs(left - right) / scale if scale else 0.0


def dft_identity_sides(
    q: int, x: int, table: DivisorTable, convention: Convention = "exact"
) -> DftIdentity:
    """Both sides of Σ_b |Δ_x(b/q)|² = q·Σ_a E_x(q,a)².

    Δ_x(b/q) = S_x(b/q) − S*(b/q) with S* taken in ``convention``; the right
    side uses E in the same convention. ``mixed_gap`` keeps the exact S* on
    the left but the classical main term on the right, which exposes the
    O(1)-per-point boundary discrepancy.
    """
    star = np.array(
        [_star_value(q // math.gcd(q, b), x, convention) for b in range(1, q + 1)]
    )
    sums = np.array([eval_S_direct(x, Fraction(b, q), table) for b in range(1, q + 1)])
    lhs = float(np.sum(np.abs(sums - star) ** 2))

    err = decompose(q, x, table, convention).err
    rhs = q * float(np.dot(err, err))

    exact_star = np.array([F_exact(q // math.gcd(q, b), x) for b in range(1, q + 1)])
    exact_lhs = float(np.sum(np.abs(sums - exact_star) ** 2))
    classical_err = decompose(q, x, table, "classical").err
    mixed_rhs = q * float(np.dot(classical_err, classical_err))

    return DftIdentity(lhs, rhs, _relative_gap(lhs, rhs), _relative_gap(exact_lhs, mixed_rhs))


def dft_identity_gap(q: int, x: int, table: DivisorTable) -> float:
    """Relative gap of the finite Parseval identity in the exact convention."""
    return dft_identity_sides(q, x, table, "exact").relative_gap


def twisted_main_identity_gap(
    q: int, b: int, x: float, convention: Convention = "exact"
) -> float:
    """|Σ_a 𝓜(q,a)e(ab/q) − S*(b/q)| relative to |S*(b/q)| (floored at 1)."""
    if not 1 <= b <= q:
        raise ValueError(f"need 1 <= b <= q, got b={b}, q={q}")
    twisted = sum(
        main_term(q, a, x, convention) * cmath.exp(2j * math.pi * ((a * b) % q) / q)
        for a in range(1, q + 1)
    )
    target = _star_value(q // math.gcd(q, b), x, convention)
    return abs(twisted - target) / max(abs(target), 1.0)


def lauzhao_main_term(q: int, a: int, x: float) -> float:
    """The progression main term written with φ(q/r) and the Möbius–log correction.

    (x/q)[Σ_{r|(q,a)} (φ(q/r)/(q/r))(log(x/r²) + 2γ_E − 1) − 2Σ_{r|(q,a)} Σ_{d|q/r} μ(d)log d/d]
    """
    constant = 2.0 * EULER_GAMMA - 1.0
    leading: List[float] = []
    correction: List[float] = []
    for r in _divisors(math.gcd(q, a)):
        m = q // r
        totient_ratio = sum(_mobius(k) / k for k in _divisors(m))
        leading.append(totient_ratio * (math.log(x / r**2) + constant))
        correction.extend(_mobius(k) * math.log(k) / k for k in _divisors(m) if k > 1)
    return (x / q) * (math.fsum(leading) - 2.0 * math.fsum(correction))


def lauzhao_equivalence_gap(q: int, a: int, x: float) -> float:
    """|ours − theirs| / max(|ours|, |theirs|, 1) for the two main-term forms."""
    ours = main_term(q, a, x, "classical")
    theirs = lauzhao_main_term(q, a, x)
    return abs(ours - theirs) / max(abs(ours), abs(theirs), 1.0)


def divisor_identity_sides(q: int, a: int) -> Tuple[Fraction, Fraction]:
    """Σ_{dr|q, r|a} μ(d)/d and Σ_{d|q} c_d(a)/d, exactly."""
    left = sum(
        (
            Fraction(_mobius(d), d)
            for r in _divisors(math.gcd(q, a))
            for d in _divisors(q // r)
        ),
        Fraction(0),
    )
    right = sum((Fraction(ramanujan_sum(d, a), d) for d in _divisors(q)), Fraction(0))
    return left, right
