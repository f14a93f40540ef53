"""Ramanujan sums c_q(a) in closed form."""

import math
from functools import lru_cache

from sympy import mobius, totient


@lru_cache(maxsize=4096)
def _totient(n: int) -> int:
    return int(totient(n))


@lru_cache(maxsize=4096)
def _mobius(n: int) -> int:
    return int(mobius(n))


def ramanujan_sum(q: int, a: int) -> int:
    """Exact c_q(a) = Σ_{k mod q, (k,q)=1} e(ka/q).

    Uses c_q(a) = μ(q/(q,a))·φ(q)/φ(q/(q,a)); never sums roots of unity.

    Raises:
        ValueError: If q < 1.
    """
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    m = q // math.gcd(q, a)
    return _mobius(m) * _totient(q) // _totient(m)
