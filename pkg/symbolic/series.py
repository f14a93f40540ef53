"""Truncated Laurent series in u = s − 1 with SymPoly coefficients.

A series knows its coefficients exactly for exponents lead .. precision − 1
and is O(u^precision) beyond. Every operation propagates the precision, so
asking for a coefficient that the inputs cannot determine raises
``TruncationError`` instead of silently returning zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

from symbolic.sympoly import ONE, ZERO, Scalar, SymPoly


# ζ's expansion is modelled through a3 only
ZETA_SYMBOLS = ("a1", "a2", "a3")
DERIVATIVE_SYMBOLS = 4
DEFAULT_ORDER = 8


class TruncationError(ValueError):
    """A coefficient beyond the known precision of a truncated series was requested."""


def _as_poly(value: Union[SymPoly, Scalar]) -> SymPoly:
    return value if isinstance(value, SymPoly) else SymPoly.constant(value)


@dataclass(frozen=True)
class LaurentSeries:
    """Σ_k coeffs[k]·u^(lead+k) + O(u^(lead+len(coeffs))).

    Leading zero coefficients are stripped on construction, so coeffs[0] is
    nonzero unless the known part vanishes entirely.
    """

    lead: int
    coeffs: Tuple[SymPoly, ...]

    def __post_init__(self):
        coeffs = tuple(_as_poly(c) for c in self.coeffs)
        skip = 0
        while skip < len(coeffs) and coeffs[skip].is_zero():
            skip += 1
        object.__setattr__(self, "lead", self.lead + skip)
        object.__setattr__(self, "coeffs", coeffs[skip:])

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def precision(self) -> int:
        """First exponent whose coefficient is unknown."""
        return self.lead + len(self.coeffs)

    def coefficient(self, exponent: int) -> SymPoly:
        if exponent >= self.precision:
            raise TruncationError(
                f"coefficient of u^{exponent} requested, series known below u^{self.precision}"
            )
        if exponent < self.lead:
            return ZERO
        return self.coeffs[exponent - self.lead]

    def residue(self) -> SymPoly:
        return self.coefficient(-1)

    @staticmethod
    def _span(lead: int, precision: int, coefficient) -> "LaurentSeries":
        return LaurentSeries(lead, tuple(coefficient(e) for e in range(lead, precision)))

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        lead = min(self.lead, other.lead)
        precision = min(self.precision, other.precision)
        return self._span(
            lead, precision, lambda e: self.coefficient(e) + other.coefficient(e)
        )

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lead, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            factor = _as_poly(other)
            return LaurentSeries(self.lead, tuple(c * factor for c in self.coeffs))
        lead = self.lead + other.lead
        precision = min(self.precision + other.lead, other.precision + self.lead)

        def convolve(e: int) -> SymPoly:
            total = ZERO
            for i, c in enumerate(self.coeffs):
                j = e - (self.lead + i) - other.lead
                if 0 <= j < other.order:
                    total = total + c * other.coeffs[j]
            return total

        return self._span(lead, precision, convolve)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentSeries":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = constant_series(1, self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by u^k."""
        return LaurentSeries(self.lead + k, self.coeffs)

    def inverse(self) -> "LaurentSeries":
        """1/f by the recursive division, keeping the relative precision.

        Raises:
            ValueError: If the leading coefficient is not a nonzero rational.
        """
        if not self.coeffs:
            raise ValueError("cannot invert a series with no known nonzero coefficient")
        head = self.coeffs[0]
        if not head.is_constant():
            raise ValueError(f"leading coefficient {head} is not a rational constant")
        scale = 1 / head.constant_value()
        out = [ONE * scale]
        for k in range(1, self.order):
            acc = ZERO
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(acc * scale))
        return LaurentSeries(-self.lead, tuple(out))

    def derivative(self) -> "LaurentSeries":
        """d/du, which equals d/ds."""
        return LaurentSeries(
            self.lead - 1,
            tuple(c * (self.lead + k) for k, c in enumerate(self.coeffs)),
        )

    def derivative_n(self, n: int) -> "LaurentSeries":
        series = self
        for _ in range(n):
            series = series.derivative()
        return series

    def __str__(self) -> str:
        terms = [f"({c})·u^{self.lead + k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(terms + [f"O(u^{self.precision})"])


def constant_series(value: Union[SymPoly, Scalar], order: int = DEFAULT_ORDER) -> LaurentSeries:
    return LaurentSeries(0, (_as_poly(value),) + (ZERO,) * (order - 1))


def _check_order(order: int, minimum: int = 1) -> None:
    if order < minimum:
        raise ValueError(f"series order must be >= {minimum}, got {order}")


def zeta_laurent(order: int = DEFAULT_ORDER) -> LaurentSeries:
    """ζ(s) = 1/u + a1 + a2·u + a3·u² + O(u³).

    Coefficients past a3 are not modelled, so orders above 4 are capped there.

    Raises:
        ValueError: If order < 2.
    """
    _check_order(order, 2)
    coeffs = [ONE] + [SymPoly.symbol(name) for name in ZETA_SYMBOLS]
    return LaurentSeries(-1, tuple(coeffs[: min(order, len(coeffs))]))


def derivative_series(prefix: str, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """Σ_K P_K u^K/K! for a function with formal derivatives P_K = P^(K)(1).

    ``prefix`` is ``"F"`` for 1/ζ(2s) or ``"G"`` for 1/ζ(s+1); symbols stop at
    P3, so orders above 4 are capped.
    """
    _check_order(order)
    if prefix not in ("F", "G"):
        raise ValueError(f"derivative symbols exist for F and G only, got {prefix!r}")
    count = min(order, DERIVATIVE_SYMBOLS)
    return LaurentSeries(
        0, tuple(SymPoly.symbol(f"{prefix}{k}") / math.factorial(k) for k in range(count))
    )


def exp_series(rate: Union[SymPoly, Scalar], order: int = DEFAULT_ORDER) -> LaurentSeries:
    """e^{rate·u}; with rate = L this is x^{s−1}."""
    _check_order(order)
    rate = _as_poly(rate)
    return LaurentSeries(
        0, tuple(rate**k / math.factorial(k) for k in range(order))
    )


def reciprocal_s(order: int = DEFAULT_ORDER) -> LaurentSeries:
    """1/s = 1/(1 + u) = Σ (−u)^k."""
    _check_order(order)
    return LaurentSeries(0, tuple(SymPoly.constant((-1) ** k) for k in range(order)))

