import math
from fractions import Fraction

import numpy as np
import pytest

from apvar import (
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
from majorarc import EULER_GAMMA, F, F_exact

CONSTANT = 2 * EULER_GAMMA - 1


def test_main_term_examples():
    x = 1000.0
    assert main_term(1, 1, x) == pytest.approx(x * (math.log(x) + CONSTANT))
    expected = (x / 2) * ((math.log(x) + CONSTANT) - 0.5 * (math.log(x / 4) + CONSTANT))
    assert main_term(2, 1, x) == pytest.approx(expected)
    total = sum(main_term(6, a, x) for a in range(1, 7))
    assert total == pytest.approx(x * (math.log(x) + CONSTANT), rel=1e-9)


def test_main_term_full_period_cancels():
    x = 1e4
    expected = x * (math.log(x) + CONSTANT)
    for q in range(1, 201):
        total = math.fsum(main_term(q, a, x) for a in range(1, q + 1))
        assert total == pytest.approx(expected, rel=1e-9), q


def test_main_term_exact_convention_sums_to_F_exact():
    x = 777.0
    total = math.fsum(main_term(12, a, x, "exact") for a in range(1, 13))
    assert total == pytest.approx(F_exact(1, x), rel=1e-12)


def test_main_term_validation():
    with pytest.raises(ValueError):
        main_term(0, 1, 10.0)
    with pytest.raises(ValueError):
        main_term(3, 4, 10.0)
    with pytest.raises(ValueError):
        main_term(3, 1, 0.5)
    with pytest.raises(ValueError):
        main_term(3, 1, 10.0, "textbook")


def test_decompose_small(small_table):
    whole = decompose(1, 10, small_table)
    assert whole.raw.tolist() == [27]
    assert whole.err[0] == pytest.approx(27 - 10 * (math.log(10) + CONSTANT))

    halves = decompose(2, 10, small_table)
    # odd n: d(1)+d(3)+d(5)+d(7)+d(9) = 1+2+2+2+3; class 2 holds the even n
    assert halves.raw.tolist() == [10, 17]

    wide = decompose(25, 10, small_table)
    assert int(wide.raw.sum()) == 27
    assert wide.raw[10:].tolist() == [0] * 15


def test_decompose_partitions_prefix_sum(small_table):
    x = 9999
    for q in (3, 7, 12, 97):
        decomposition = decompose(q, x, small_table)
        assert decomposition.raw.dtype == np.int64
        assert int(decomposition.raw.sum()) == small_table.prefix_d[x]
        np.testing.assert_allclose(
            decomposition.err, decomposition.raw - decomposition.main, rtol=0, atol=0
        )


def test_decompose_validation(small_table):
    with pytest.raises(ValueError):
        decompose(3, 10**4 + 1, small_table)
    with pytest.raises(ValueError):
        decompose(0, 10, small_table)


def test_variance(small_table):
    assert variance(1, 10, small_table) == pytest.approx(
        (27 - 10 * (math.log(10) + CONSTANT)) ** 2
    )
    for q in (2, 5, 31):
        assert variance(q, 10**4, small_table) >= 0


def test_variance_warns_past_square_root(small_table, caplog):
    variance(11, 100, small_table)
    assert "beyond q <= sqrt(x)" in caplog.text


def test_dft_identity(small_table):
    assert dft_identity_gap(1, 500, small_table) == pytest.approx(0, abs=1e-12)
    assert dft_identity_gap(12, 10**4, small_table) <= 1e-9
    assert dft_identity_gap(97, 10**4, small_table) <= 1e-9


def test_dft_identity_mixed_convention(small_table):
    sides = dft_identity_sides(12, 10**4, small_table)
    assert sides.relative_gap <= 1e-9
    # the classical main term drops an O(1) boundary term per class
    assert sides.mixed_gap > 1e-9


def test_twisted_main_identity():
    assert twisted_main_identity_gap(6, 6, 1e3) <= 1e-9
    assert twisted_main_identity_gap(6, 2, 1e3) <= 1e-9
    assert twisted_main_identity_gap(5, 1, 1e3) <= 1e-9
    assert twisted_main_identity_gap(30, 7, 1e4, "classical") <= 1e-9
    with pytest.raises(ValueError):
        twisted_main_identity_gap(6, 0, 1e3)


def test_lauzhao_equivalence():
    assert lauzhao_equivalence_gap(1, 1, 1e3) <= 1e-15
    assert lauzhao_main_term(1, 1, 1e3) == pytest.approx(F(1, 1e3))
    assert lauzhao_equivalence_gap(4, 2, 1e3) <= 1e-9
    assert lauzhao_equivalence_gap(30, 7, 1e4) <= 1e-9
    for q in range(1, 41):
        for a in range(1, q + 1):
            assert lauzhao_equivalence_gap(q, a, 1e4) <= 1e-9, (q, a)


def test_divisor_identity_is_exact():
    for q in range(1, 61):
        for a in range(1, q + 1):
            left, right = divisor_identity_sides(q, a)
            assert isinstance(left, Fraction)
            assert left == right, (q, a)


@pytest.mark.slow
def test_identities_acceptance_range(table):
    for x in (10**3, 10**4, 10**5):
        for q in range(1, 101):
            assert dft_identity_gap(q, x, table) <= 1e-9, (q, x)
    for x in (1e2, 1e3, 1e4):
        for q in range(1, 201):
            for a in range(1, q + 1):
                assert lauzhao_equivalence_gap(q, a, x) <= 1e-9, (q, a, x)
