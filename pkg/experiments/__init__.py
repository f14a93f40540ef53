"""Experiment runners, reports and the harness configuration."""

from experiments.config import ExperimentConfig, load_config
from experiments.log_setup import configure_logging
from experiments.report import ExperimentReport, GrowthFit, ReportRow, fit_growth, make_row
from experiments.runners import (
    TablesReport,
    lemma3_moduli,
    run_identities,
    run_lemma1,
    run_lemma2,
    run_lemma3,
    run_tables,
    run_theorem,
)

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "GrowthFit",
    "ReportRow",
    "TablesReport",
    "configure_logging",
    "fit_growth",
    "lemma3_moduli",
    "load_config",
    "make_row",
    "run_identities",
    "run_lemma1",
    "run_lemma2",
    "run_lemma3",
    "run_tables",
    "run_theorem",
]
