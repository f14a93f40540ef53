"""The divisor exponential sum S_x(α) = Σ_{n≤x} d(n)e(nα).

Direct evaluation at one point, batch evaluation on the grid j/M through a
single inverse FFT, and the L¹ / L² norms over the unit interval.
"""

import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Tuple

import numpy as np
from scipy import fft

from arith import DivisorTable


logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SumSampling:
    """S_x(j/M) for j = 0..M−1.

    ``M`` is the grid size actually used (possibly rounded up from the request).
    """

    x: int
    M: int
    values: np.ndarray  # complex128
    derivative_bound: float


def _check_length(x: int, table: DivisorTable) -> None:
    if not 1 <= x <= table.limit:
        raise ValueError(f"x={x} outside sieve range [1, {table.limit}]")


def derivative_bound(x: int, table: DivisorTable) -> float:
    """2π·Σ_{n≤x} n·d(n), a Lipschitz constant for S_x and hence for |S_x|."""
    _check_length(x, table)
    n = np.arange(1, x + 1, dtype=np.float64)
    return TWO_PI * float(np.dot(n, table.d[1 : x + 1]))


def eval_S_direct(x: int, alpha, table: DivisorTable) -> complex:
    """Σ_{n≤x} d(n)e^{2πinα} by direct accumulation.

    A ``Fraction`` alpha is reduced exactly (n·p mod q) before the phase is
    formed; floats are reduced mod 1 in double precision. numpy's pairwise
    summation keeps round-off growth logarithmic in x.

    Raises:
        ValueError: If x is outside the table range.
    """
    _check_length(x, table)
    n = np.arange(1, x + 1, dtype=np.int64)
    if isinstance(alpha, Fraction):
        p, q = alpha.numerator, alpha.denominator
        phase = ((n * (p % q)) % q) / q
    else:
        phase = np.mod(n * float(alpha), 1.0)
    weights = table.d[1 : x + 1].astype(np.float64)
    return complex(np.sum(weights * np.exp(1j * TWO_PI * phase)))


def sample_S_fft(x: int, M: int, table: DivisorTable, workers: int = -1) -> SumSampling:
    """S_x(j/M) for all j via one inverse FFT of the coefficient vector.

    M is rounded up to ``scipy.fft.next_fast_len(M)``. Since every n ≤ x ≤ M
    lands in its own bin, no aliasing occurs and Parseval is exact.

    Raises:
        ValueError: If M < x or x is outside the table range.
    """
    _check_length(x, table)
    if M < x:
        raise ValueError(f"grid size M={M} must be >= x={x}")
    size = fft.next_fast_len(M)
    coefficients = np.zeros(size, dtype=np.float64)
    n = np.arange(1, x + 1)
    coefficients[n % size] = table.d[1 : x + 1]
    # ifft carries e^{+2πi jn/M}/M, which is the sign convention of e(nα)
    values = fft.ifft(coefficients, workers=workers) * size
    values[0] = float(table.prefix_d[x])
    values.setflags(write=False)
    logger.debug(f"Sampled S_x on {size} points for x={x} (requested M={M})")
    return SumSampling(x=x, M=size, values=values, derivative_bound=derivative_bound(x, table))


def l1_norm(sampling: SumSampling) -> Tuple[float, float]:
    """Riemann-sum estimate of ∫₀¹|S_x(α)|dα with a certified half-width.

    Each sample stands for a cell of width 1/M centred on it, and |S_x| is
    Lipschitz with constant K = ``derivative_bound``, so the error is at most
    K/(4M).

    Returns:
        (estimate, half_width).
    """
    magnitudes = np.abs(sampling.values)
    estimate = float(np.sum(magnitudes)) / sampling.M
    return estimate, sampling.derivative_bound / (4.0 * sampling.M)


def l2_norm_sq(sampling: SumSampling) -> float:
    """∫₀¹|S_x(α)|²dα, exact on the grid by Parseval (equals Σ_{n≤x} d(n)²)."""
    return float(np.vdot(sampling.values, sampling.values).real) / sampling.M


def write_samples_csv(sampling: SumSampling, path: str | Path, stride: int = 1) -> int:
    """Dump (j/M, |S|) rows for plotting, every ``stride``-th grid point."""
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    js = np.arange(0, sampling.M, stride)
    magnitudes = np.abs(sampling.values[js])
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["alpha", "abs_S"])
        for j, value in zip(js.tolist(), magnitudes.tolist()):
            writer.writerow([j / sampling.M, value])
    logger.info(f"Wrote {js.size} samples of |S_x| (x={sampling.x}) to {path}")
    return int(js.size)
