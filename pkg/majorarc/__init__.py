"""Major-arc approximation: F(q), I_q(β), S*(α), L(0) and the bound checks."""

from majorarc.approximant import (
    EULER_GAMMA,
    EULER_GAMMA_DIGITS,
    ArcModel,
    F,
    F_exact,
    I_q,
    I_q_quadrature,
    L0,
    PlancherelCheck,
    S_star,
    S_star_many,
    arc_bound_ratio,
    i2_bound_ratio,
    major_arc_mass_scale,
    oscillatory_integral,
    plancherel_check,
    star_l1_over_dissection,
    write_profile_csv,
)

__all__ = [
    "EULER_GAMMA",
    "EULER_GAMMA_DIGITS",
    "ArcModel",
    "F",
    "F_exact",
    "I_q",
    "I_q_quadrature",
    "L0",
    "PlancherelCheck",
    "S_star",
    "S_star_many",
    "arc_bound_ratio",
    "i2_bound_ratio",
    "major_arc_mass_scale",
    "oscillatory_integral",
    "plancherel_check",
    "star_l1_over_dissection",
    "write_profile_csv",
]
