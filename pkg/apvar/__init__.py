"""Divisor sums in arithmetic progressions: main terms, errors and exact identities."""

from apvar.progressions import (
    DftIdentity,
    ProgressionDecomposition,
    decompose,
    dft_identity_gap,
    dft_identity_sides,
    divisor_identity_sides,
    lauzhao_equivalence_gap,
    lauzhao_main_term,
    main_term,
    twisted_main_identity_gap,
    variance,
)

__all__ = [
    "DftIdentity",
    "ProgressionDecomposition",
    "decompose",
    "dft_identity_gap",
    "dft_identity_sides",
    "divisor_identity_sides",
    "lauzhao_equivalence_gap",
    "lauzhao_main_term",
    "main_term",
    "twisted_main_identity_gap",
    "variance",
]
