"""Sieved multiplicative functions for the divisor sums.

Builds d(n), φ(n) and μ(n) for every n up to a limit together with the exact
prefix sums of d and d². Everything downstream (exponential sums, progression
sums, the Σd² experiments) reads from one immutable ``DivisorTable``.

Memory: roughly 25 bytes per entry (d int32, φ uint32, μ int8, two int64
prefix arrays), so the default ceiling of 10^8 entries needs about 2.5 GB.
"""

import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np
from sympy import divisors as _sympy_divisors


logger = logging.getLogger(__name__)

DEFAULT_SIEVE_CEILING = 10**8


@dataclass(frozen=True)
class DivisorTable:
    """Sieved d, φ, μ up to ``limit`` plus prefix sums of d and d².

    Arrays are indexed by n directly; index 0 is a zero placeholder so that
    ``table.d[n]`` is d(n) and ``table.prefix_d[t]`` is Σ_{n≤t} d(n).
    """

    limit: int
    d: np.ndarray  # int32
    phi: np.ndarray  # uint32
    mu: np.ndarray  # int8
    prefix_d: np.ndarray  # int64
    prefix_d2: np.ndarray  # int64, exact below the ceiling

    def d_of(self, n: int) -> int:
        self._check_index(n)
        return int(self.d[n])

    def phi_of(self, n: int) -> int:
        self._check_index(n)
        return int(self.phi[n])

    def mu_of(self, n: int) -> int:
        self._check_index(n)
        return int(self.mu[n])

    def primes(self) -> np.ndarray:
        """Primes up to the limit (the n with d(n) = 2)."""
        return np.nonzero(self.d == 2)[0]

    def _check_index(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range [1, {self.limit}]")


def _prime_sieve(limit: int) -> np.ndarray:
    """Eratosthenes sieve returning the primes up to ``limit``."""
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.nonzero(is_prime)[0]


def build_divisor_table(limit: int, ceiling: int = DEFAULT_SIEVE_CEILING) -> DivisorTable:
    """Sieve d, φ, μ and the divisor-moment prefix sums up to ``limit``.

    Primes up to √limit are applied one at a time (prime powers included).
    A prime p > √limit divides n ≤ limit at most once and only with a
    cofactor m < p, so those primes are applied in batches indexed by m.

    Args:
        limit: Largest n to sieve (inclusive).
        ceiling: Refuse limits above this; the harness passes
            ``ExperimentConfig.sieve_ceiling``.

    Returns:
        The populated, immutable DivisorTable.

    Raises:
        ValueError: If limit < 1 or limit exceeds ``ceiling``.
        MemoryError: If the arrays cannot be allocated.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if limit > ceiling:
        raise ValueError(
            f"limit={limit} exceeds sieve ceiling {ceiling} "
            "(raise DIVISOR_L1_SIEVE_CEILING if memory allows)"
        )

    try:
        d = np.ones(limit + 1, dtype=np.int32)
        phi = np.arange(limit + 1, dtype=np.uint32)
        mu = np.ones(limit + 1, dtype=np.int8)
    except MemoryError as e:
        raise MemoryError(f"cannot allocate divisor table with {limit + 1} entries") from e

    primes = _prime_sieve(limit)
    root = math.isqrt(limit)
    small = primes[primes <= root]
    large = primes[primes > root]

    for p in small.tolist():
        phi[p::p] -= phi[p::p] // p
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
        # multiples of p^k currently carry the factor k from v_p; swap it for k+1
        pk, k = p, 1
        while pk <= limit:
            d[pk::pk] = d[pk::pk] // k * (k + 1)
            pk *= p
            k += 1

    for m in range(1, limit // (root + 1) + 1):
        batch = large[: np.searchsorted(large, limit // m, side="right")]
        if batch.size == 0:
            break
        idx = batch * m
        d[idx] *= 2
        phi[idx] -= phi[idx] // batch.astype(np.uint32)
        mu[idx] *= -1

    d[0] = 0
    phi[0] = 0
    mu[0] = 0

    try:
        prefix_d = np.cumsum(d, dtype=np.int64)
        prefix_d2 = np.cumsum(d.astype(np.int64) ** 2, dtype=np.int64)
    except MemoryError as e:
        raise MemoryError(f"cannot allocate prefix sums with {limit + 1} entries") from e

    logger.info(
        f"Sieved divisor table up to {limit}: {primes.size} primes, "
        f"Σd={int(prefix_d[-1])}, Σd²={int(prefix_d2[-1])}"
    )
    for array in (d, phi, mu, prefix_d, prefix_d2):
        array.setflags(write=False)
    return DivisorTable(
        limit=limit, d=d, phi=phi, mu=mu, prefix_d=prefix_d, prefix_d2=prefix_d2
    )


def divisors(n: int, table: DivisorTable) -> List[int]:
    """Return the divisors of n in increasing order.

    Raises:
        ValueError: If n is outside the sieved range.
    """
    if not 1 <= n <= table.limit:
        raise ValueError(f"n={n} outside sieve range [1, {table.limit}]")
    result = [int(k) for k in _sympy_divisors(n)]
    if len(result) != table.d[n]:
        raise RuntimeError(f"divisor count mismatch at n={n}: {len(result)} vs {table.d[n]}")
    return result


def mertens_check(table: DivisorTable) -> int:
    """Σ_{n≤limit} μ(n)·⌊limit/n⌋, which equals 1 for a correct μ."""
    n = np.arange(1, table.limit + 1, dtype=np.int64)
    return int(np.dot(table.mu[1:].astype(np.int64), table.limit // n))


def hyperbola_divisor_sum(x: int) -> int:
    """Σ_{n≤x} d(n) by Dirichlet's hyperbola method: 2Σ_{m≤√x}⌊x/m⌋ − ⌊√x⌋²."""
    if x < 1:
        return 0
    root = math.isqrt(x)
    m = np.arange(1, root + 1, dtype=np.int64)
    return int(2 * np.sum(x // m) - root * root)
