"""Experiment reports: rows of observed/predicted values, growth fits, pass/fail."""

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats


logger = logging.getLogger(__name__)

MIN_FIT_ROWS = 4


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares line through (log x, log y)."""

    slope: float
    intercept: float
    r_squared: float
    stderr: float


@dataclass(frozen=True)
class ReportRow:
    x: float
    observed: float
    predicted: float
    residual: float
    normalized_residual: float
    extra: Dict[str, Any] = field(default_factory=dict)


def make_row(x: float, observed: float, predicted: float, scale: float, **extra: Any) -> ReportRow:
    """Row with residual = observed − predicted and normalized residual = residual/scale."""
    residual = observed - predicted
    return ReportRow(
        x=x,
        observed=observed,
        predicted=predicted,
        residual=residual,
        normalized_residual=residual / scale if scale else math.nan,
        extra=dict(extra),
    )


def fit_growth(xs: Sequence[float], ys: Sequence[float]) -> Optional[GrowthFit]:
    """Fit log|y| = slope·log x + intercept; None with fewer than two usable points."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.abs(np.asarray(ys, dtype=np.float64))
    keep = (x > 0) & (y > 0) & np.isfinite(y)
    if np.count_nonzero(keep) < 2 or np.unique(x[keep]).size < 2:
        return None
    result = stats.linregress(np.log(x[keep]), np.log(y[keep]))
    return GrowthFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue**2),
        stderr=float(result.stderr),
    )


@dataclass
class ExperimentReport:
    """Outcome of one experiment.

    ``fit`` always carries an ``"observed"`` entry once there are at least
    four rows; runners add named fits of derived quantities next to it.
    ``checks`` records each acceptance assertion, and ``passed`` is their
    conjunction.
    """

    name: str
    params: Dict[str, Any]
    rows: List[ReportRow]
    fit: Dict[str, GrowthFit] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        if not self.rows:
            raise ValueError(f"report {self.name!r} has no rows")
        if len(self.rows) >= MIN_FIT_ROWS and "observed" not in self.fit:
            observed = fit_growth([r.x for r in self.rows], [r.observed for r in self.rows])
            if observed is not None:
                self.fit["observed"] = observed

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def add_fit(self, label: str, xs: Sequence[float], ys: Sequence[float]) -> Optional[GrowthFit]:
        fit = fit_growth(xs, ys)
        if fit is not None:
            self.fit[label] = fit
        return fit

    def check(self, label: str, ok: bool) -> bool:
        self.checks[label] = bool(ok)
        if not ok:
            logger.warning(f"{self.name}: check {label!r} failed")
        return bool(ok)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": self.params,
            "rows": [asdict(row) for row in self.rows],
            "fit": {label: asdict(fit) for label, fit in self.fit.items()} or None,
            "checks": self.checks,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_jsonable)

    def write(self, path: str | Path, fmt: str = "json") -> Path:
        """Write the report as JSON or as CSV rows (extras become columns)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            path.write_text(self.to_json(), encoding="utf-8")
        elif fmt == "csv":
            extra_keys = sorted({key for row in self.rows for key in row.extra})
            base = ["x", "observed", "predicted", "residual", "normalized_residual"]
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(base + extra_keys)
                for row in self.rows:
                    writer.writerow(
                        [getattr(row, key) for key in base]
                        + [row.extra.get(key, "") for key in extra_keys]
                    )
        else:
            raise ValueError(f"unknown report format: {fmt!r}")
        logger.info(f"Wrote {self.name} report ({len(self.rows)} rows) to {path}")
        return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    return str(value)
