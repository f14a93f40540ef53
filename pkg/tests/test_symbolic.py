import math
import random
from fractions import Fraction

import mpmath
import pytest

from symbolic import (
    DIVISOR_ALPHAS,
    LISTED_C_COEFFS,
    LISTED_D_COEFFS,
    PAIRS,
    CoefficientMismatchError,
    LaurentSeries,
    SymPoly,
    TruncationError,
    assemble_d_coeffs,
    check_c_coeffs,
    constant_series,
    d_coefficient_oracle,
    delta2_matching,
    derivative_series,
    divisor_square_coeffs,
    exp_series,
    gamma_star_coefficient,
    lemma2a_tables,
    log_moment_integral,
    log_moment_polynomial,
    mu_coefficient,
    numeric_constants,
    numeric_residue_check,
    phi_logweight_residue,
    phi_logweight_sum,
    reciprocal_s,
    render_tables,
    residue_divisor_square,
    symbols,
    tables_json,
    weight_rows,
    weighted_square_identity_gap,
    weighted_square_sum,
    weighted_square_table,
    zeta_laurent,
)
from symbolic.tables import CoeffTable

a1, a2, a3, L, inv_delta = symbols("a1", "a2", "a3", "L", "inv_delta")
alpha00, alpha01, alpha10 = symbols("alpha00", "alpha01", "alpha10")


# --- SymPoly -------------------------------------------------------------------


def test_sympoly_arithmetic():
    p = (a1 + 1) ** 2
    assert p == a1**2 + 2 * a1 + 1
    assert p - a1**2 - 2 * a1 == 1
    assert (p / 2).coeff(a1=2) == Fraction(1, 2)
    assert (3 - a1) + a1 == 3
    assert hash(a1 + a2) == hash(a2 + a1)
    with pytest.raises(TypeError):
        a1 / a2
    with pytest.raises(ZeroDivisionError):
        a1 / 0
    with pytest.raises(ValueError):
        SymPoly.symbol("zeta")


def test_sympoly_inspection():
    p = 4 * a2 + 6 * a1**2 - 4 * a1 + 1
    assert p.free_symbols() == frozenset({"a1", "a2"})
    assert p.degree("a1") == 2
    assert p.coeff(a1=0, a2=0) == 1
    assert not p.is_constant()
    assert SymPoly.constant(Fraction(3, 7)).constant_value() == Fraction(3, 7)
    assert SymPoly().constant_value() == 0
    with pytest.raises(ValueError):
        p.constant_value()


def test_sympoly_subs_is_simultaneous():
    p = a1 + 2 * a2
    assert p.subs({"a1": a2, "a2": a1}) == a2 + 2 * a1
    assert p.subs({"a1": Fraction(1, 2)}) == Fraction(1, 2) + 2 * a2


def test_sympoly_evaluate():
    p = a1**2 - Fraction(1, 3) * L
    with mpmath.workdps(30):
        value = p.evaluate({"a1": mpmath.mpf(2), "L": mpmath.mpf(3)})
    assert float(value) == pytest.approx(3)
    with pytest.raises(ValueError, match="L"):
        p.evaluate({"a1": 1})


# --- series --------------------------------------------------------------------


def test_zeta_laurent_shape():
    zeta = zeta_laurent(4)
    assert zeta.lead == -1
    assert zeta.coefficient(-1) == 1
    assert zeta.coefficient(0) == a1
    assert zeta.coefficient(1) == a2
    square = zeta * zeta
    assert square.lead == -2
    assert square.coefficient(-2) == 1
    assert square.coefficient(-1) == 2 * a1
    with pytest.raises(ValueError):
        zeta_laurent(1)


def test_truncation_is_tracked():
    zeta = zeta_laurent(2)
    assert zeta.precision == 1
    with pytest.raises(TruncationError):
        zeta.coefficient(1)
    with pytest.raises(TruncationError):
        residue_divisor_square(order=2)
    # capped at a3 regardless of the requested order
    assert zeta_laurent(8).precision == 3


def test_series_inverse_and_products():
    zeta = zeta_laurent(4)
    inverse = zeta.inverse()
    assert inverse.lead == 1
    assert inverse.coefficient(2) == -a1
    product = zeta * inverse
    assert product == constant_series(1, 4)
    with pytest.raises(ValueError):
        derivative_series("G", 4).inverse()  # head G0 is symbolic


def test_series_calculus():
    exp = exp_series(L, 5)
    assert exp.derivative().coefficient(0) == L
    assert exp.coefficient(3) == L**3 / 6
    assert (reciprocal_s(4) * constant_series(1, 4).shift(0)).coefficient(3) == -1
    series = LaurentSeries(-2, (1, 2, 3))
    assert series.derivative_n(2).coefficient(-4) == 6
    assert (series - series).order == 0
    assert str(constant_series(0, 2)) == "O(u^2)"


def test_derivative_series_validation():
    assert derivative_series("F", 8).order == 4
    with pytest.raises(ValueError):
        derivative_series("H", 4)


# --- closed forms -----------------------------------------------------------------


def test_log_moments():
    assert log_moment_polynomial(0) == 1
    assert log_moment_polynomial(2) == L**2 - 2 * L + 2
    moment = log_moment_integral(2, math.e**2)
    assert moment.boundary == -2
    assert moment.value == pytest.approx(
        float(mpmath.quad(lambda t: mpmath.log(t) ** 2, [1, math.e**2])), rel=1e-12
    )
    with pytest.raises(ValueError):
        log_moment_polynomial(7)
    with pytest.raises(ValueError):
        log_moment_integral(1, 0.5)


def test_phi_logweight_sum(small_table, constants):
    plain = phi_logweight_sum(0, 100, small_table, constants)
    assert plain.exact_rational is not None
    assert float(plain.exact_rational) == pytest.approx(plain.exact, rel=1e-12)
    assert abs(plain.gap) < 0.1
    leading = phi_logweight_residue(0)
    assert leading.coeff(L=1, G0=1) == 1
    far = phi_logweight_sum(0, 10**4, small_table, constants)
    assert far.exact_rational is None
    assert abs(far.gap) < 0.01
    assert abs(phi_logweight_sum(1, 10**4, small_table, constants).gap) < 0.05
    with pytest.raises(ValueError):
        phi_logweight_sum(0, 5, small_table, constants)
    with pytest.raises(ValueError):
        phi_logweight_sum(3, 100, small_table, constants)


def test_phi_logweight_doubling_ladder(small_table, constants):
    # the gap decays like (log γ)^{Q+1}/γ, so gap·√γ stays bounded
    bounds = {0: 3.0, 1: 10.0, 2: 30.0}
    for Q, bound in bounds.items():
        for gamma in [100 * 2**k for k in range(7)]:
            gap = phi_logweight_sum(Q, gamma, small_table, constants).gap
            assert abs(gap) * math.sqrt(gamma) <= bound, (Q, gamma)


# --- Σd² coefficients ---------------------------------------------------------------


def test_residue_divisor_square_examples():
    residue = residue_divisor_square()
    assert residue.coeff(L=3, F0=1) == Fraction(1, 6)
    assert residue.coeff(L=1, F1=1) == 4 * a1 - 1
    assert residue.coeff(L=1, F0=1) == 4 * a2 + 6 * a1**2 - 4 * a1 + 1
    assert residue.degree("L") == 3
    assert "inv_delta" not in residue.free_symbols()


def test_c_coefficients_match_listing():
    c = check_c_coeffs()
    assert c.diff(LISTED_C_COEFFS) == {}
    assert set(divisor_square_coeffs().pairs()) == set(PAIRS)


def test_numeric_residue_check():
    check = numeric_residue_check(1e6, precision=20)
    assert check.relative_gap < 1e-12


def test_numeric_constants(constants):
    assert float(constants["a1"]) == pytest.approx(float(mpmath.euler), rel=1e-15)
    assert float(constants["F0"]) == pytest.approx(6 / math.pi**2)
    assert float(constants["G0"]) == pytest.approx(6 / math.pi**2)
    expected_F1 = -2 * constants["zeta2_prime"] / constants["zeta2"] ** 2
    assert float(constants["F1"]) == pytest.approx(float(expected_F1), rel=1e-14)
    assert float(constants["a2"]) == pytest.approx(0.0728158454836767, rel=1e-12)
    with pytest.raises(ValueError):
        numeric_constants(31)


# --- weighted-square tables ---------------------------------------------------------


def test_weight_table_entries():
    S = weighted_square_table()
    assert S[(1, 2)] == alpha01**2
    assert S[(1, 0)] == (alpha00 + alpha01) ** 2
    assert S[(3, 0)] == alpha10**2
    assert gamma_star_coefficient(3, 0, 3) == inv_delta**3 / 3
    assert mu_coefficient(1, 2, 2, 1) == 1  # a_0 = 1, sign (−1)^{J+Q*+X+1} = +1
    assert mu_coefficient(2, 1, 1, 1) == -a1
    with pytest.raises(ValueError):
        gamma_star_coefficient(3, 0, 2)
    assert all(row.pair[0] >= 1 for row in weight_rows())


WEIGHT_TABLE = {
    ((3, 0), (3, 0)): (None, inv_delta**3 / 3),
    ((3, 0), (2, 1)): (None, inv_delta**2 / 2),
    ((3, 0), (1, 2)): (None, inv_delta),
    ((2, 1), (1, 2)): (1, None),
    ((2, 0), (1, 1)): (None, inv_delta),
    ((2, 0), (1, 2)): (a1, -2 * inv_delta),
    ((2, 0), (2, 0)): (None, inv_delta**2 / 2),
    ((2, 0), (2, 1)): (None, -inv_delta**2 / 2),
    ((1, 2), (2, 1)): (Fraction(-1, 2), None),
    ((1, 1), (1, 1)): (1, None),
    ((1, 1), (1, 2)): (-2, None),
    ((1, 1), (2, 1)): (-a1, None),
    ((1, 0), (1, 0)): (None, inv_delta),
    ((1, 0), (1, 1)): (a1, -inv_delta),
    ((1, 0), (1, 2)): (-2 * a1, 2 * inv_delta),
    ((1, 0), (2, 1)): (-a2, None),
}


def test_weight_rows_match_full_table():
    rows = {(row.pair, row.index): (row.mu, row.gamma_star) for row in weight_rows()}
    assert set(rows) == set(WEIGHT_TABLE)
    for key, (mu, gamma_star) in WEIGHT_TABLE.items():
        got_mu, got_gamma_star = rows[key]
        assert (got_mu is None) == (mu is None), key
        assert (got_gamma_star is None) == (gamma_star is None), key
        if mu is not None:
            assert got_mu == mu, key
        if gamma_star is not None:
            assert got_gamma_star == gamma_star, key


def test_t_table_term_structure():
    S = weighted_square_table()
    t = lemma2a_tables()

    def mu(Qs, X, J, K):
        return mu_coefficient(Qs, X, J, K) * S[(Qs, X)]

    def star(Qs, X, J):
        return gamma_star_coefficient(Qs, X, J) * S[(Qs, X)]

    assert t[(3, 0)] == 0
    assert t[(2, 1)] == mu(1, 2, 2, 1)
    assert t[(2, 0)] == mu(1, 2, 2, 0)
    assert t[(1, 2)] == mu(2, 1, 1, 2)
    assert t[(1, 1)] == mu(1, 1, 1, 1) + mu(1, 2, 1, 1) + mu(2, 1, 1, 1)
    assert t[(1, 0)] == mu(1, 1, 1, 0) + mu(1, 2, 1, 0) + mu(2, 1, 1, 0)
    assert t.singles[3] == star(3, 0, 3) + star(2, 1, 3) + star(1, 2, 3)
    assert t.singles[2] == star(1, 1, 2) + star(1, 2, 2) + star(2, 0, 2) + star(2, 1, 2)
    assert t.singles[1] == star(1, 0, 1) + star(1, 1, 1) + star(1, 2, 1)
    assert S[(2, 1)] == 2 * alpha10 * alpha01
    assert S[(2, 0)] == 2 * alpha10 * (alpha00 + alpha01)
    assert S[(1, 1)] == 2 * alpha01 * (alpha00 + alpha01)


def test_t_table_generic_rows():
    t = lemma2a_tables()
    assert t[(2, 1)] == mu_coefficient(1, 2, 2, 1) * alpha01**2
    divisor = lemma2a_tables(DIVISOR_ALPHAS)
    assert divisor[(1, 1)] == 8 * a1 - 2
    assert divisor[(1, 0)] == 4 * a2 + 4 * a1**2 - 2 * a1
    assert divisor.singles[1] == (4 * a1**2 - 4 * a1 + 2) * inv_delta


def test_d_coefficients_match_listing():
    d = assemble_d_coeffs()
    assert d.diff(LISTED_D_COEFFS) == {}
    assert d[(1, 1)] == 8 * a1 - 2
    assert d[(2, 0)] == a1 + 2 * (2 * a1 - 1) * (1 - inv_delta) * inv_delta


def test_mismatch_error_carries_diff():
    table = CoeffTable(name="c", weight="F", entries={(3, 0): SymPoly.constant(1)})
    diff = table.diff(LISTED_C_COEFFS)
    error = CoefficientMismatchError("c", diff)
    assert error.diff[(3, 0)] == Fraction(5, 6)
    assert isinstance(error, ValueError)


def test_oracle_agrees_with_combinatorics():
    gaps = weighted_square_identity_gap()
    assert all(gap.is_zero() for gap in gaps.values()), gaps
    oracle = d_coefficient_oracle(DIVISOR_ALPHAS)
    assert oracle.diff(assemble_d_coeffs().entries) == {}


def test_delta2_matching():
    report = delta2_matching()
    assert set(report) == set(PAIRS)
    for (J, _), value in report.items():
        if J >= 1:
            assert value.is_zero()


def test_rendering():
    text = render_tables()
    assert "gamma*" in text
    assert "c - d/2^K at Delta=2" in text
    payload = tables_json()
    assert '"d"' in payload and '"delta2"' in payload


def _random_alphas(rng):
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))


def test_weighted_square_sum_approaches_prediction(small_table, constants):
    rng = random.Random(11)
    for _ in range(3):
        alphas = _random_alphas(rng)
        table = lemma2a_tables(alphas)
        gaps = []
        for gamma in (100, 1000):
            x = float(gamma) ** 2
            observed = weighted_square_sum([float(a) for a in alphas], x, gamma, small_table)
            values = {**constants, "L": mpmath.log(x), "inv_delta": mpmath.mpf(1) / 2}
            predicted = float(table.evaluate(values))
            gaps.append(abs(observed - predicted) / max(abs(predicted), 1.0))
        assert gaps[0] < 0.2
        assert gaps[1] < 0.05
