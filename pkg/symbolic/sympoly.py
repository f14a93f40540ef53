"""Exact multivariate polynomials over a fixed set of formal symbols.

A thin immutable wrapper over a sympy sparse polynomial ring with rational
coefficients. The symbols are inert: a1..a3 are the Laurent coefficients of ζ
at 1, F0..F3 and G0..G3 the derivatives at 1 of 1/ζ(2s) and 1/ζ(s+1),
``inv_delta`` is 1/Δ, ``L`` is log x, and alpha00/alpha01/alpha10 are the
free weights of the generic weighted-square identity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, FrozenSet, Mapping, Tuple, Union

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring


SYMBOLS: Tuple[str, ...] = (
    "a1",
    "a2",
    "a3",
    "F0",
    "F1",
    "F2",
    "F3",
    "G0",
    "G1",
    "G2",
    "G3",
    "inv_delta",
    "L",
    "alpha00",
    "alpha01",
    "alpha10",
)

_RING, *_GENS = ring(",".join(SYMBOLS), QQ)
_INDEX: Dict[str, int] = {name: i for i, name in enumerate(SYMBOLS)}

Scalar = Union[int, Fraction]


def _check_symbol(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown symbol {name!r}; known: {', '.join(SYMBOLS)}") from None


def _lift(value: Union["SymPoly", Scalar]) -> PolyElement:
    if isinstance(value, SymPoly):
        return value.poly
    if isinstance(value, bool):
        raise TypeError("booleans are not polynomial coefficients")
    if isinstance(value, int):
        return _RING.ground_new(QQ(value))
    if isinstance(value, Fraction):
        return _RING.ground_new(QQ(value.numerator, value.denominator))
    raise TypeError(f"cannot use {type(value).__name__} as a polynomial coefficient")


def _to_fraction(coefficient) -> Fraction:
    return Fraction(int(coefficient.numerator), int(coefficient.denominator))


class SymPoly:
    """Immutable polynomial with rational coefficients in ``SYMBOLS``.

    Equality is structural: two values are equal exactly when they have the
    same monomials with the same coefficients (zero terms are never stored).
    """

    __slots__ = ("_poly",)

    def __init__(self, poly: PolyElement | None = None):
        self._poly = poly if poly is not None else _RING.zero

    @classmethod
    def symbol(cls, name: str) -> "SymPoly":
        return cls(_GENS[_check_symbol(name)])

    @classmethod
    def constant(cls, value: Scalar) -> "SymPoly":
        return cls(_lift(value))

    @property
    def poly(self) -> PolyElement:
        return self._poly

    # arithmetic; unknown operands return NotImplemented so LaurentSeries can take over

    def __add__(self, other):
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        return SymPoly(self._poly + _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        return SymPoly(self._poly - _lift(other))

    def __rsub__(self, other):
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        return SymPoly(_lift(other) - self._poly)

    def __neg__(self):
        return SymPoly(-self._poly)

    def __mul__(self, other):
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        return SymPoly(self._poly * _lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar):
        if isinstance(other, SymPoly):
            raise TypeError("division is only defined by rational scalars")
        if other == 0:
            raise ZeroDivisionError("division of a SymPoly by zero")
        return SymPoly(self._poly * _lift(1 / Fraction(other)))

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        return SymPoly(self._poly**exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SymPoly):
            return self._poly == other._poly
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._poly == _lift(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._poly.terms())))

    # inspection

    def is_zero(self) -> bool:
        return not self._poly

    def is_constant(self) -> bool:
        return all(not any(monom) for monom in self._poly.keys())

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial.

        Raises:
            ValueError: If the polynomial involves any symbol.
        """
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return _to_fraction(self._poly.get(_RING.zero_monom, QQ.zero))

    def free_symbols(self) -> FrozenSet[str]:
        used = set()
        for monom in self._poly.keys():
            used.update(SYMBOLS[i] for i, e in enumerate(monom) if e)
        return frozenset(used)

    def degree(self, name: str) -> int:
        index = _check_symbol(name)
        return max((monom[index] for monom in self._poly.keys()), default=0)

    def coeff(self, **powers: int) -> "SymPoly":
        """Coefficient of Π name^power, as a polynomial in the remaining symbols.

        ``p.coeff(L=1, F0=1)`` collects every term whose L-degree and F0-degree
        are exactly one.
        """
        fixed = {_check_symbol(name): power for name, power in powers.items()}
        collected = {}
        for monom, coefficient in self._poly.terms():
            if all(monom[i] == power for i, power in fixed.items()):
                rest = tuple(0 if i in fixed else e for i, e in enumerate(monom))
                collected[rest] = coefficient
        return SymPoly(_RING.from_dict(collected)) if collected else SymPoly()

    # transformation

    def subs(self, values: Mapping[str, Union["SymPoly", Scalar]]) -> "SymPoly":
        """Replace symbols by rationals or by other polynomials, simultaneously."""
        if not values:
            return self
        replacements = [(_GENS[_check_symbol(name)], _lift(v)) for name, v in values.items()]
        return SymPoly(self._poly.compose(replacements))

    def evaluate(self, values: Mapping[str, Any]):
        """Numeric value with mpmath arithmetic at the current working precision.

        Raises:
            ValueError: If a symbol in use has no value.
        """
        missing = self.free_symbols() - set(values)
        if missing:
            raise ValueError(f"no numeric value for {', '.join(sorted(missing))}")
        total = mpmath.mpf(0)
        for monom, coefficient in self._poly.terms():
            term = mpmath.mpf(int(coefficient.numerator)) / int(coefficient.denominator)
            for i, e in enumerate(monom):
                if e:
                    term *= mpmath.mpmathify(values[SYMBOLS[i]]) ** e
            total += term
        return total

    # display

    def __str__(self) -> str:
        return str(self._poly.as_expr()) if self._poly else "0"

    def __repr__(self) -> str:
        return f"SymPoly({self})"


_OPERANDS = (SymPoly, int, Fraction)


def symbols(*names: str) -> Tuple[SymPoly, ...]:
    """SymPoly generators for the given names, in order."""
    return tuple(SymPoly.symbol(name) for name in names)


ZERO = SymPoly()
ONE = SymPoly.constant(1)
