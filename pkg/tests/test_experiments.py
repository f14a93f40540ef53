import csv
import json
import logging
import math

import numpy as np
import pytest
from pythonjsonlogger import jsonlogger

from experiments import (
    ExperimentReport,
    configure_logging,
    fit_growth,
    lemma3_moduli,
    load_config,
    make_row,
    run_identities,
    run_lemma1,
    run_lemma2,
    run_lemma3,
    run_tables,
    run_theorem,
)
from expsum import l2_norm_sq, sample_S_fft
from majorarc import L0, F


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


# --- reports -------------------------------------------------------------------


def test_make_row():
    row = make_row(100, 12.0, 10.0, 4.0, q=3)
    assert row.residual == 2.0
    assert row.normalized_residual == 0.5
    assert row.extra == {"q": 3}


def test_fit_growth_recovers_exponent():
    xs = [2**k for k in range(10, 16)]
    fit = fit_growth(xs, [3.0 * math.sqrt(x) for x in xs])
    assert fit.slope == pytest.approx(0.5)
    assert fit.intercept == pytest.approx(math.log(3.0))
    assert fit.r_squared == pytest.approx(1.0)
    assert fit_growth([10.0], [1.0]) is None
    assert fit_growth([10.0, 10.0], [1.0, 2.0]) is None


def test_report_requires_rows():
    with pytest.raises(ValueError):
        ExperimentReport(name="empty", params={}, rows=[])


def test_report_fits_from_four_rows():
    rows = [make_row(x, x**0.5, 0.0, 1.0) for x in (10.0, 100.0, 1000.0)]
    assert ExperimentReport(name="short", params={}, rows=rows).fit == {}
    rows.append(make_row(10_000.0, 100.0, 0.0, 1.0))
    report = ExperimentReport(name="long", params={}, rows=rows)
    assert report.fit["observed"].slope == pytest.approx(0.5)


def test_report_checks_and_serialisation(tmp_path, caplog):
    rows = [make_row(x, 2.0 * x, x, x, q=1) for x in (1.0, 2.0, 4.0, 8.0)]
    report = ExperimentReport(name="demo", params={"x_grid": [1, 2, 4, 8]}, rows=rows)
    assert report.passed
    report.check("good", True)
    report.check("bad", False)
    assert not report.passed
    assert "check 'bad' failed" in caplog.text

    payload = json.loads(report.write(tmp_path / "demo.json").read_text())
    assert set(payload) == {"name", "params", "rows", "fit", "checks", "pass"}
    assert payload["pass"] is False
    assert payload["rows"][0]["residual"] == 1.0
    assert payload["fit"]["observed"]["slope"] == pytest.approx(1.0)

    with report.write(tmp_path / "demo.csv", "csv").open() as handle:
        table = list(csv.reader(handle))
    assert table[0] == ["x", "observed", "predicted", "residual", "normalized_residual", "q"]
    assert len(table) == 5
    with pytest.raises(ValueError):
        report.write(tmp_path / "demo.txt", "txt")


def test_report_json_handles_numpy(tmp_path):
    rows = [make_row(np.int64(5), np.float64(1.5), 1.0, 1.0, q=np.int64(2))]
    report = ExperimentReport(name="np", params={"x": np.int64(5)}, rows=rows)
    payload = json.loads(report.to_json())
    assert payload["params"]["x"] == 5
    assert payload["fit"] is None


# --- configuration and logging -------------------------------------------------


def test_load_config_defaults(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for name in (
        "DIVISOR_L1_SIEVE_CEILING",
        "DIVISOR_L1_MULTIPLIER",
        "DIVISOR_L1_PRECISION",
        "DIVISOR_L1_SEED",
        "DIVISOR_L1_LOG_LEVEL",
        "DIVISOR_L1_LOG_FORMAT",
        "DIVISOR_L1_OUTPUT_DIR",
    ):
        monkeypatch.delenv(name, raising=False)
    config = load_config()
    assert config.sieve_ceiling == 10**8
    assert config.multiplier == 16
    assert config.precision == 30
    assert config.seed == 20240101
    assert config.log_level == "INFO"
    assert config.log_format == "text"


def test_load_config_reads_dotenv(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    # registered with monkeypatch so the value the .env file writes is undone
    monkeypatch.setenv("DIVISOR_L1_MULTIPLIER", "9")
    (tmp_path / ".env").write_text("DIVISOR_L1_MULTIPLIER=4\n")
    assert load_config().multiplier == 4


@pytest.mark.parametrize(
    "name, value",
    [
        ("DIVISOR_L1_PRECISION", "abc"),
        ("DIVISOR_L1_PRECISION", "31"),
        ("DIVISOR_L1_MULTIPLIER", "0"),
        ("DIVISOR_L1_LOG_FORMAT", "xml"),
    ],
)
def test_load_config_rejects_bad_values(monkeypatch, tmp_path, name, value):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv(name, value)
    with pytest.raises(RuntimeError, match=name):
        load_config()


def test_configure_logging_json(restore_root_logger):
    configure_logging("DEBUG", "json")
    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert isinstance(root.handlers[0].formatter, jsonlogger.JsonFormatter)
    assert root.level == logging.DEBUG
    configure_logging("INFO", "text")
    assert not isinstance(logging.getLogger().handlers[0].formatter, jsonlogger.JsonFormatter)


# --- runners ---------------------------------------------------------------------


def test_run_lemma1(small_table, constants):
    xs = [10, 100, 1000, 10**4]
    report = run_lemma1(xs, small_table, constants)
    assert report.rows[0].observed == 83
    for row in report.rows:
        assert row.observed == small_table.prefix_d2[int(row.x)]
        assert row.residual == row.observed - row.predicted
        assert row.extra["leading_term"] > 0
    last = report.rows[-1]
    assert abs(last.residual) / last.observed < 0.02
    assert "observed" in report.fit
    assert "residual_exponent" in report.checks


def test_lemma1_agrees_with_parseval(small_table, constants):
    x = 4096
    report = run_lemma1([x], small_table, constants)
    assert report.rows[0].observed == pytest.approx(
        l2_norm_sq(sample_S_fft(x, 2 * x, small_table)), rel=1e-12
    )


def test_run_lemma1_rejects_grid_outside_table(small_table, constants):
    with pytest.raises(ValueError):
        run_lemma1([10**5], small_table, constants)
    with pytest.raises(ValueError):
        run_lemma1([], small_table, constants)


def test_run_lemma2_single_modulus(small_table, constants):
    report = run_lemma2([3], 2, small_table, constants)
    (row,) = report.rows
    assert row.observed == pytest.approx(L0(1, 3.0))
    assert report.checks["quadrature"]


def test_run_lemma2_normalized_residual(small_table, constants):
    report = run_lemma2([10**4, 10**5, 10**6], 2, small_table, constants, seed=3)
    assert report.checks["quadrature"]
    for row in report.rows:
        assert row.extra["gamma"] == pytest.approx(math.sqrt(row.x))
        assert abs(row.normalized_residual) < 10
    with pytest.raises(ValueError):
        run_lemma2([100], 0.5, small_table, constants)


def test_lemma3_moduli():
    assert lemma3_moduli(100) == [1, 2, 3, 5, 7]
    assert lemma3_moduli(10**4, "composites") == [12, 24, 36, 60]
    assert lemma3_moduli(10**6, "primes")[-1] == 31
    with pytest.raises(ValueError):
        lemma3_moduli(100, "random")


def test_run_lemma3(small_table):
    report = run_lemma3([100, 10**4], small_table)
    assert report.checks["nonnegative"]
    first = next(row for row in report.rows if row.extra["q"] == 1 and row.x == 100)
    assert first.observed == pytest.approx((small_table.prefix_d[100] - F(1, 100)) ** 2)
    assert all(row.extra["q"] ** 2 <= row.x for row in report.rows)
    assert {row.extra["family"] for row in report.rows} == {"trivial", "prime", "composite"}


def test_lemma3_trend_skips_trivial_modulus(small_table):
    xs = [400, 2500, 10**4]
    report = run_lemma3(xs, small_table)
    for x in xs:
        ratios = {row.extra["q"]: row.extra["ratio"] for row in report.rows if row.x == x}
        assert 1 in ratios
        assert report.params["max_ratio"][x] == max(r for q, r in ratios.items() if q > 1)
    assert "max_ratio_trend" in report.checks
    only_trivial = run_lemma3([2, 3], small_table)
    assert only_trivial.params["max_ratio"] == {2: 0.0, 3: 0.0}


def test_run_theorem(small_table):
    xs = [2**9, 2**10, 2**11, 2**12]
    report = run_theorem(xs, 8, small_table)
    assert report.checks["parseval"]
    assert {"l1_exponent", "l1_ratio_spread"} <= set(report.checks)
    for row in report.rows:
        assert row.predicted == pytest.approx(math.sqrt(row.x))
        assert row.extra["M1"] == small_table.prefix_d2[int(row.x)]
        assert row.extra["gamma"] == int(math.sqrt(row.x))
        assert row.extra["delta_sq"] > 0
        assert row.extra["star_l1"] > 0
    with pytest.raises(ValueError):
        run_theorem(xs, 0, small_table)


def test_run_identities(small_table):
    report = run_identities([10**3, 10**4], 6, small_table)
    assert report.passed, report.checks
    assert len(report.rows) == 12


def test_run_tables(tmp_path):
    report = run_tables()
    assert report.passed, report.checks
    assert set(report.checks) == {
        "c_coefficients",
        "d_coefficients",
        "delta2_matching",
        "weighted_square_identity",
    }
    payload = json.loads(report.write(tmp_path / "tables.json").read_text())
    assert payload["pass"] is True
    assert payload["tables"]["d"]["name"] == "d"


# --- acceptance sweeps -----------------------------------------------------------


@pytest.mark.slow
def test_lemma1_acceptance(big_table, constants):
    report = run_lemma1([10**4, 10**5, 10**6, 10**7], big_table, constants)
    assert report.passed, report.fit


@pytest.mark.slow
def test_lemma2_acceptance(big_table, constants):
    report = run_lemma2([10**4, 10**5, 10**6, 10**7], 2, big_table, constants)
    assert report.passed, report.fit


@pytest.mark.slow
def test_lemma3_acceptance(big_table):
    report = run_lemma3([10**4, 10**5, 10**6], big_table)
    assert report.passed, report.params["max_ratio"]


@pytest.mark.slow
def test_theorem_acceptance(big_table):
    report = run_theorem([2**k for k in range(10, 19)], 16, big_table)
    assert report.passed, report.fit
