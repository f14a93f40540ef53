"""Main-term coefficient tables for Σd(n)² and for the weighted major-arc square sum.

c_{J,K} is the coefficient of (log x)^J·F_K in Res_{s=1} ζ(s)⁴𝓕(s)x^{s−1}/s,
where 𝓕 = 1/ζ(2s). d_{J,K} is the coefficient of (log x)^J·G_K in

    (1/x) Σ_{q≤γ} (φ(q)/q²) ∫₁ˣ g_q(t)² dt,    γ = x^{1/Δ},  𝒢 = 1/ζ(s+1),

obtained two ways: through the combinatorial weights μ, γ*, S and t of the
generic weighted-square identity, and directly from residues of ζ(s)𝒢(s)
(``d_coefficient_oracle``). The two agree for arbitrary weights α.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

from symbolic.integrals import log_moment_polynomial
from symbolic.series import (
    DEFAULT_ORDER,
    derivative_series,
    exp_series,
    reciprocal_s,
    zeta_laurent,
)
from symbolic.sympoly import ONE, ZERO, Scalar, SymPoly, symbols


logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Alphas = Tuple[Union[SymPoly, Scalar], Union[SymPoly, Scalar], Union[SymPoly, Scalar]]

MAX_TOTAL_DEGREE = 3
PAIRS: Tuple[Pair, ...] = tuple(
    (J, K) for J in range(MAX_TOTAL_DEGREE, -1, -1) for K in range(MAX_TOTAL_DEGREE - J + 1)
)
# (Q*, X): Q* counts log q factors plus one, X counts log t factors
WEIGHT_INDICES: Tuple[Pair, ...] = tuple(
    (Qs, X) for Qs in range(MAX_TOTAL_DEGREE, 0, -1) for X in range(MAX_TOTAL_DEGREE - Qs + 1)
)

_a1, _a2, _inv_delta = symbols("a1", "a2", "inv_delta")

# g_q(t) = log(t/q²) + 2γ_E = (α00 + α01) + α10·log q + α01·log t
DIVISOR_ALPHAS: Alphas = (2 * _a1 - 1, 1, -2)

LISTED_C_COEFFS: Dict[Pair, SymPoly] = {
    (3, 0): ONE / 6,
    (2, 1): ONE / 2,
    (2, 0): 2 * _a1 - Fraction(1, 2),
    (1, 2): ONE / 2,
    (1, 1): 4 * _a1 - 1,
    (1, 0): 4 * _a2 + 6 * _a1**2 - 4 * _a1 + 1,
}

LISTED_D_COEFFS: Dict[Pair, SymPoly] = {
    (3, 0): Fraction(4, 3) * _inv_delta**3 - 2 * _inv_delta**2 + _inv_delta,
    (2, 1): ONE,
    (2, 0): _a1 + 2 * (2 * _a1 - 1) * (1 - _inv_delta) * _inv_delta,
    (1, 2): 2 * ONE,
    (1, 1): 8 * _a1 - 2,
    (1, 0): 4 * _a2 + 4 * _a1**2 - 2 * _a1 + (4 * _a1**2 - 4 * _a1 + 2) * _inv_delta,
}


class CoefficientMismatchError(ValueError):
    """Assembled coefficients disagree with the expected ones.

    ``diff`` maps each offending (J, K) to assembled − expected.
    """

    def __init__(self, name: str, diff: Mapping[Pair, SymPoly]):
        self.diff = dict(diff)
        detail = "; ".join(f"{pair}: {value}" for pair, value in sorted(self.diff.items()))
        super().__init__(f"{name} coefficients mismatch at {detail}")


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients keyed by (J, K), plus the K-free family keyed by J.

    ``weight`` names the derivative symbols (``"F"`` or ``"G"``) that the
    (J, K) entries multiply; the K-free entries multiply weight0.
    """

    name: str
    weight: str
    entries: Mapping[Pair, SymPoly]
    singles: Mapping[int, SymPoly] = field(default_factory=dict)

    def __getitem__(self, pair: Pair) -> SymPoly:
        return self.entries[pair]

    def pairs(self) -> List[Pair]:
        return sorted(self.entries, key=lambda pair: (-pair[0], -pair[1]))

    def diff(self, expected: Mapping[Pair, SymPoly]) -> Dict[Pair, SymPoly]:
        """Nonzero entry − expected differences over the expected keys."""
        out = {}
        for pair, value in expected.items():
            gap = self.entries.get(pair, ZERO) - value
            if not gap.is_zero():
                out[pair] = gap
        return out

    def subs(self, values: Mapping[str, Union[SymPoly, Scalar]]) -> "CoeffTable":
        return CoeffTable(
            name=self.name,
            weight=self.weight,
            entries={pair: value.subs(values) for pair, value in self.entries.items()},
            singles={J: value.subs(values) for J, value in self.singles.items()},
        )

    def free_symbols(self) -> frozenset:
        used = set()
        for value in list(self.entries.values()) + list(self.singles.values()):
            used |= value.free_symbols()
        return frozenset(used)

    def evaluate(self, values: Mapping[str, object]):
        """Σ L^J·P_K·entry(J,K) + P_0·Σ L^J·single(J) with mpmath numbers."""
        log_x = values["L"]
        total = 0
        for (J, K), value in self.entries.items():
            total += log_x**J * values[f"{self.weight}{K}"] * value.evaluate(values)
        for J, value in self.singles.items():
            total += log_x**J * values[f"{self.weight}0"] * value.evaluate(values)
        return total

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "weight": self.weight,
            "entries": {f"{J},{K}": str(self.entries[(J, K)]) for J, K in self.pairs()},
            "singles": {str(J): str(v) for J, v in sorted(self.singles.items(), reverse=True)},
        }


def _lift(value: Union[SymPoly, Scalar]) -> SymPoly:
    return value if isinstance(value, SymPoly) else SymPoly.constant(value)


def _zeta_coefficient(k: int) -> SymPoly:
    return ONE if k == 0 else SymPoly.symbol(f"a{k}")


# --- Σ d(n)² -----------------------------------------------------------------


def residue_divisor_square(order: int = DEFAULT_ORDER) -> SymPoly:
    """Res_{s=1} ζ(s)⁴𝓕(s)x^s/s divided by x, as a polynomial in L = log x.

    x^s/s is expanded as x·e^{uL}·Σ(−u)^k with u = s − 1.

    Raises:
        TruncationError: If ``order`` is too small to reach the u^{−1} term.
    """
    series = (
        zeta_laurent(order) ** 4
        * derivative_series("F", order)
        * exp_series(SymPoly.symbol("L"), order)
        * reciprocal_s(order)
    )
    residue = series.residue()
    logger.debug(f"Σd² residue at order {order}: {residue}")
    return residue


def divisor_square_coeffs(order: int = DEFAULT_ORDER) -> CoeffTable:
    """c_{J,K} for J + K ≤ 3, the J = 0 row included."""
    residue = residue_divisor_square(order)
    entries = {(J, K): residue.coeff(L=J, **{f"F{K}": 1}) for J, K in PAIRS}
    return CoeffTable(name="c", weight="F", entries=entries)


# --- the weighted-square combinatorics -----------------------------------------


def _generic_alphas() -> Alphas:
    return symbols("alpha00", "alpha01", "alpha10")


def _square_coefficients(alphas: Alphas) -> Dict[Pair, SymPoly]:
    """Coefficients of (log q)^i (log t)^j in g_q(t)², keyed by (i, j)."""
    alpha00, alpha01, alpha10 = (_lift(a) for a in alphas)
    weights = {(0, 0): alpha00 + alpha01, (1, 0): alpha10, (0, 1): alpha01}
    square: Dict[Pair, SymPoly] = {}
    for (i1, j1), w1 in weights.items():
        for (i2, j2), w2 in weights.items():
            key = (i1 + i2, j1 + j2)
            square[key] = square.get(key, ZERO) + w1 * w2
    return square


def weighted_square_table(alphas: Optional[Alphas] = None) -> Dict[Pair, SymPoly]:
    """S(Q*, X) for 1 ≤ Q* + X ≤ 3: the (log q)^{Q*−1}(log t)^X coefficient of g²."""
    square = _square_coefficients(alphas or _generic_alphas())
    return {(Qs, X): square.get((Qs - 1, X), ZERO) for Qs, X in WEIGHT_INDICES}


def mu_coefficient(Qs: int, X: int, J: int, K: int) -> SymPoly:
    """μ_{Q*,X} = −a_{Q*−K}(−1)^{J+Q*+X}(Q*−1)!X!/(J!K!), with a_0 = 1."""
    if not 0 <= Qs - K <= 3 or Qs < 1:
        raise ValueError(f"mu needs 1 <= Q* and 0 <= Q*-K <= 3, got Q*={Qs}, K={K}")
    scale = Fraction(
        (-1) ** (J + Qs + X + 1) * math.factorial(Qs - 1) * math.factorial(X),
        math.factorial(J) * math.factorial(K),
    )
    return _zeta_coefficient(Qs - K) * scale


def gamma_star_coefficient(Qs: int, X: int, J: int) -> SymPoly:
    """γ*_{Q*,X} = (−1)^{J+Q*+X}X!/((J−Q*)!·Q*·Δ^{Q*})."""
    if Qs < 1 or J < Qs:
        raise ValueError(f"gamma* needs 1 <= Q* <= J, got Q*={Qs}, J={J}")
    scale = Fraction(
        (-1) ** (J + Qs + X) * math.factorial(X), math.factorial(J - Qs) * Qs
    )
    return SymPoly.symbol("inv_delta") ** Qs * scale


def _mu_terms(J: int, K: int) -> Iterable[Pair]:
    return [(Qs, X) for Qs, X in WEIGHT_INDICES if X >= J and Qs >= K]


def _gamma_star_terms(J: int) -> Iterable[Pair]:
    return [(Qs, X) for Qs, X in WEIGHT_INDICES if J <= Qs + X and Qs <= J]


class WeightRow(NamedTuple):
    pair: Pair
    index: Pair
    mu: Optional[SymPoly]
    gamma_star: Optional[SymPoly]


def weight_rows() -> List[WeightRow]:
    """Every (J,K),(Q*,X) combination that contributes μ or γ*, for J ≥ 1."""
    rows = []
    for J, K in PAIRS:
        if J == 0:
            continue
        mu_used = set(_mu_terms(J, K))
        star_used = set(_gamma_star_terms(J)) if K == 0 else set()
        for index in WEIGHT_INDICES:
            if index in mu_used or index in star_used:
                rows.append(
                    WeightRow(
                        pair=(J, K),
                        index=index,
                        mu=mu_coefficient(*index, J, K) if index in mu_used else None,
                        gamma_star=(
                            gamma_star_coefficient(*index, J) if index in star_used else None
                        ),
                    )
                )
    return rows


def lemma2a_tables(alphas: Optional[Alphas] = None) -> CoeffTable:
    """t(J, K) = Σ μ·S over X ≥ J, Q* ≥ K and t(J) = Σ γ*·S over Q* ≤ J ≤ Q* + X.

    With ``alphas`` omitted the weights stay formal (alpha00, alpha01, alpha10).
    """
    S = weighted_square_table(alphas)
    entries = {}
    for J, K in PAIRS:
        total = ZERO
        for Qs, X in _mu_terms(J, K):
            total = total + mu_coefficient(Qs, X, J, K) * S[(Qs, X)]
        entries[(J, K)] = total
    singles = {}
    for J in range(MAX_TOTAL_DEGREE, -1, -1):
        total = ZERO
        for Qs, X in _gamma_star_terms(J):
            total = total + gamma_star_coefficient(Qs, X, J) * S[(Qs, X)]
        singles[J] = total
    return CoeffTable(name="t", weight="G", entries=entries, singles=singles)


def _fold_singles(t: CoeffTable) -> CoeffTable:
    entries = {
        (J, K): value + (t.singles.get(J, ZERO) if K == 0 else ZERO)
        for (J, K), value in t.entries.items()
    }
    return CoeffTable(name="d", weight="G", entries=entries)


def assemble_d_coeffs() -> CoeffTable:
    """d_{J,K} = t(J,K) + [K=0]·t(J) at α00 = 2a1 − 1, α01 = 1, α10 = −2.

    Raises:
        CoefficientMismatchError: If a listed d_{J,K} is not reproduced exactly.
    """
    d = _fold_singles(lemma2a_tables(DIVISOR_ALPHAS))
    mismatch = d.diff(LISTED_D_COEFFS)
    if mismatch:
        raise CoefficientMismatchError("d", mismatch)
    return d


def check_c_coeffs(order: int = DEFAULT_ORDER) -> CoeffTable:
    """``divisor_square_coeffs`` verified against the listed c_{J,K}.

    Raises:
        CoefficientMismatchError: If a listed c_{J,K} is not reproduced exactly.
    """
    c = divisor_square_coeffs(order)
    mismatch = c.diff(LISTED_C_COEFFS)
    if mismatch:
        raise CoefficientMismatchError("c", mismatch)
    return c


# --- residue oracle for d ------------------------------------------------------


def d_coefficient_oracle(alphas: Optional[Alphas] = None, order: int = DEFAULT_ORDER) -> CoeffTable:
    """d_{J,K} straight from residues, bypassing the μ/γ*/S bookkeeping.

    Each (log t)^j integrates to x·m_j(L) and each Σ_q φ(q)(log q)^i/q²
    becomes (−1)^i Res{𝒜^{(i)}(s)γ^{s−1}/(s−1)} with 𝒜 = ζ𝒢 and
    γ^{s−1} = e^{u·L/Δ}.
    """
    square = _square_coefficients(alphas or _generic_alphas())
    L, inv_delta = symbols("L", "inv_delta")
    dirichlet = zeta_laurent(order) * derivative_series("G", order)
    cutoff = exp_series(L * inv_delta, order)
    max_log_q = max(i for i, _ in square)
    weighted_sums = {
        i: (dirichlet.derivative_n(i) * cutoff).shift(-1).residue() * (-1) ** i
        for i in range(max_log_q + 1)
    }
    total = ZERO
    for (i, j), coefficient in square.items():
        total = total + coefficient * log_moment_polynomial(j) * weighted_sums[i]
    entries = {(J, K): total.coeff(L=J, **{f"G{K}": 1}) for J, K in PAIRS}
    return CoeffTable(name="d_oracle", weight="G", entries=entries)


def weighted_square_identity_gap(order: int = DEFAULT_ORDER) -> Dict[Pair, SymPoly]:
    """Pipeline minus oracle for formal α; every entry is the zero polynomial."""
    pipeline = _fold_singles(lemma2a_tables())
    oracle = d_coefficient_oracle(order=order)
    return {pair: pipeline[pair] - oracle[pair] for pair in PAIRS}


def delta2_matching(order: int = DEFAULT_ORDER) -> Dict[Pair, SymPoly]:
    """c_{J,K} − d_{J,K}/2^K at Δ = 2, for every J + K ≤ 3.

    F_K = 2^K·G_K because 1/ζ(2s) = 𝒢(2s − 1), which is where 2^K comes from.
    Rows with J ≥ 1 vanish; the J = 0 row is reported as is.
    """
    c = divisor_square_coeffs(order)
    d = _fold_singles(lemma2a_tables(DIVISOR_ALPHAS)).subs({"inv_delta": Fraction(1, 2)})
    report = {(J, K): c[(J, K)] - d[(J, K)] / 2**K for J, K in PAIRS}
    nonzero = [pair for pair, value in report.items() if pair[0] >= 1 and not value.is_zero()]
    if nonzero:
        logger.warning(f"Δ=2 matching fails at {nonzero}")
    return report


# --- rendering -------------------------------------------------------------------


def _format_rows(headers: List[str], rows: List[List[str]]) -> str:
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    body = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
    return "\n".join([line, "-" * len(line), *body])


def _cell(value: Optional[SymPoly]) -> str:
    return "" if value is None else str(value)


def render_tables(order: int = DEFAULT_ORDER) -> str:
    """The weight table, the S table, t in both forms, c, d and the Δ=2 report."""
    sections = []
    sections.append(
        _format_rows(
            ["(J,K)", "(Q*,X)", "mu", "gamma*"],
            [[str(r.pair), str(r.index), _cell(r.mu), _cell(r.gamma_star)] for r in weight_rows()],
        )
    )
    S = weighted_square_table()
    sections.append(_format_rows(["(Q*,X)", "S"], [[str(k), str(S[k])] for k in WEIGHT_INDICES]))
    for t in (lemma2a_tables(), lemma2a_tables(DIVISOR_ALPHAS)):
        rows = [
            [str(pair), str(t[pair]), _cell(t.singles.get(pair[0]) if pair[1] == 0 else None)]
            for pair in t.pairs()
            if pair[0] >= 1
        ]
        sections.append(_format_rows(["(J,K)", "t(J,K)", "t(J)"], rows))
    c = divisor_square_coeffs(order)
    d = _fold_singles(lemma2a_tables(DIVISOR_ALPHAS))
    sections.append(
        _format_rows(
            ["(J,K)", "c", "d"], [[str(pair), str(c[pair]), str(d[pair])] for pair in c.pairs()]
        )
    )
    report = delta2_matching(order)
    sections.append(
        _format_rows(
            ["(J,K)", "c - d/2^K at Delta=2"],
            [[str(pair), str(report[pair])] for pair in PAIRS],
        )
    )
    return "\n\n".join(sections)


def tables_payload(order: int = DEFAULT_ORDER) -> dict:
    """JSON-ready form of everything ``render_tables`` prints."""
    report = delta2_matching(order)
    return {
        "weights": [
            {
                "pair": list(r.pair),
                "index": list(r.index),
                "mu": _cell(r.mu) or None,
                "gamma_star": _cell(r.gamma_star) or None,
            }
            for r in weight_rows()
        ],
        "S": {f"{Qs},{X}": str(v) for (Qs, X), v in weighted_square_table().items()},
        "t_generic": lemma2a_tables().to_json(),
        "t": lemma2a_tables(DIVISOR_ALPHAS).to_json(),
        "c": divisor_square_coeffs(order).to_json(),
        "d": _fold_singles(lemma2a_tables(DIVISOR_ALPHAS)).to_json(),
        "delta2": {f"{J},{K}": str(report[(J, K)]) for J, K in PAIRS},
    }


def tables_json(order: int = DEFAULT_ORDER) -> str:
    return json.dumps(tables_payload(order), indent=2)
