"""Exact series arithmetic and the main-term coefficient tables."""

from symbolic.constants import ResidueCheck, numeric_constants, numeric_residue_check
from symbolic.integrals import (
    LogMoment,
    PhiLogweight,
    log_moment_integral,
    log_moment_polynomial,
    phi_logweight_residue,
    phi_logweight_sum,
    weighted_square_sum,
)
from symbolic.series import (
    LaurentSeries,
    TruncationError,
    constant_series,
    derivative_series,
    exp_series,
    reciprocal_s,
    zeta_laurent,
)
from symbolic.sympoly import SYMBOLS, SymPoly, symbols
from symbolic.tables import (
    DIVISOR_ALPHAS,
    LISTED_C_COEFFS,
    LISTED_D_COEFFS,
    PAIRS,
    CoefficientMismatchError,
    CoeffTable,
    assemble_d_coeffs,
    check_c_coeffs,
    d_coefficient_oracle,
    delta2_matching,
    divisor_square_coeffs,
    gamma_star_coefficient,
    lemma2a_tables,
    mu_coefficient,
    render_tables,
    residue_divisor_square,
    tables_json,
    tables_payload,
    weight_rows,
    weighted_square_identity_gap,
    weighted_square_table,
)

__all__ = [
    "DIVISOR_ALPHAS",
    "LISTED_C_COEFFS",
    "LISTED_D_COEFFS",
    "PAIRS",
    "SYMBOLS",
    "CoefficientMismatchError",
    "CoeffTable",
    "LaurentSeries",
    "LogMoment",
    "PhiLogweight",
    "ResidueCheck",
    "SymPoly",
    "TruncationError",
    "assemble_d_coeffs",
    "check_c_coeffs",
    "constant_series",
    "d_coefficient_oracle",
    "delta2_matching",
    "derivative_series",
    "divisor_square_coeffs",
    "exp_series",
    "gamma_star_coefficient",
    "lemma2a_tables",
    "log_moment_integral",
    "log_moment_polynomial",
    "mu_coefficient",
    "numeric_constants",
    "numeric_residue_check",
    "phi_logweight_residue",
    "phi_logweight_sum",
    "reciprocal_s",
    "render_tables",
    "residue_divisor_square",
    "symbols",
    "tables_json",
    "tables_payload",
    "weight_rows",
    "weighted_square_identity_gap",
    "weighted_square_sum",
    "zeta_laurent",
]
