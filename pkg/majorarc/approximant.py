"""Major-arc approximants for the divisor exponential sum.

Near a/q the sum S_x(a/q + β) is modelled by S*(α) = I_q(β)/q with

    f_q(t) = log(t/q²) + 2γ_E − 1,   g_q(t) = d/dt{t f_q(t)} = f_q(t) + 1,
    I_q(β) = ∫₁ˣ e(tβ) g_q(t) dt.

I_q is evaluated in closed form: exactly at β = 0, by a power series in
2πβx when that is at most 1, and otherwise by one integration by parts that
leaves ∫ e(βt)/t dt = Ci + i·Si. The lower boundary term at t = 1 is always
kept, so ``F_exact`` differs from the textbook F(q) by −f_q(1)/q.
"""

import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Tuple

import numpy as np
from scipy import integrate, special

from farey import FareyArc, arc_containing, dissection, locate_many


logger = logging.getLogger(__name__)

# Euler–Mascheroni to 30 digits; float() keeps the double nearest to it.
EULER_GAMMA_DIGITS = "0.577215664901532860606512090082"
EULER_GAMMA = float(EULER_GAMMA_DIGITS)

TWO_PI = 2.0 * math.pi
SERIES_CUTOFF = 1.0
SERIES_TERMS = 40
PLANCHEREL_NODES = 16
# panels per vectorised block; bounds the node array at 16·4096 entries
PLANCHEREL_BLOCK = 4096


@dataclass(frozen=True)
class ArcModel:
    """The weights f_q, g_q for one denominator q and sum length x."""

    q: int
    x: float
    euler_gamma: float = EULER_GAMMA

    def f(self, t):
        return np.log(np.asarray(t, dtype=float) / self.q**2) + 2.0 * self.euler_gamma - 1.0

    def g(self, t):
        return self.f(t) + 1.0

    @property
    def sign_change(self) -> float:
        """The t where g_q vanishes: q²·e^{−2γ_E}."""
        return self.q**2 * math.exp(-2.0 * self.euler_gamma)


def F(q: int, x: float) -> float:
    """(x/q)·(log(x/q²) + 2γ_E − 1), the value of S* at a/q without the t=1 term."""
    return (x / q) * (math.log(x / q**2) + 2.0 * EULER_GAMMA - 1.0)


def F_exact(q: int, x: float) -> float:
    """I_q(0)/q = (x·f_q(x) − f_q(1))/q, the exact value of S* at a/q."""
    model = ArcModel(q=q, x=x)
    return (x * float(model.f(x)) - float(model.f(1.0))) / q


def _weights(t, q):
    return np.log(t / q**2) + 2.0 * EULER_GAMMA


def _series(omega: np.ndarray, q: np.ndarray, x: float) -> np.ndarray:
    # Σ_k (iω)^k/k! ∫₁ˣ t^k g dt with ∫ t^k g = t^{k+1}/(k+1)·(g − 1/(k+1)); scaled by u = ωx ≤ 1
    g_x = _weights(x, q)
    g_1 = _weights(1.0, q)
    upper = np.ones_like(omega, dtype=np.complex128)
    lower = np.ones_like(omega, dtype=np.complex128)
    total = np.zeros_like(omega, dtype=np.complex128)
    for k in range(SERIES_TERMS):
        if k:
            upper = upper * (1j * omega * x) / k
            lower = lower * (1j * omega) / k
        width = 1.0 / (k + 1)
        total += x * upper * (g_x - width) * width - lower * (g_1 - width) * width
    return total


def _by_parts(omega: np.ndarray, q: np.ndarray, x: float) -> np.ndarray:
    si_x, ci_x = special.sici(omega * x)
    si_1, ci_1 = special.sici(omega)
    log_integral = (ci_x - ci_1) + 1j * (si_x - si_1)
    boundary = np.exp(1j * omega * x) * _weights(x, q) - np.exp(1j * omega) * _weights(1.0, q)
    return (boundary - log_integral) / (1j * omega)


def oscillatory_integral(beta, q, x: float) -> np.ndarray:
    """Vectorised I_q(β) over broadcast arrays of β and q.

    Raises:
        ValueError: If any β is not finite.
    """
    beta_arr, q_arr = np.broadcast_arrays(
        np.asarray(beta, dtype=np.float64), np.asarray(q, dtype=np.float64)
    )
    if not np.all(np.isfinite(beta_arr)):
        raise ValueError("beta must be finite")
    omega = TWO_PI * np.abs(beta_arr)
    out = np.empty(beta_arr.shape, dtype=np.complex128)

    zero = omega == 0.0
    series = ~zero & (omega * x <= SERIES_CUTOFF)
    tail = ~(zero | series)
    if np.any(zero):
        qz = q_arr[zero]
        out[zero] = x * (_weights(x, qz) - 1.0) - (_weights(1.0, qz) - 1.0)
    if np.any(series):
        out[series] = _series(omega[series], q_arr[series], x)
    if np.any(tail):
        out[tail] = _by_parts(omega[tail], q_arr[tail], x)

    negative = beta_arr < 0
    out[negative] = np.conj(out[negative])
    return out


def I_q(beta: float, model: ArcModel) -> complex:
    """∫₁ˣ e^{2πiβt}·g_q(t) dt for one β.

    Raises:
        ValueError: If beta is not finite.
    """
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    if model.x == 1:
        return 0j
    return complex(oscillatory_integral(beta, model.q, model.x))


def I_q_quadrature(beta: float, model: ArcModel) -> complex:
    """Slow adaptive-quadrature value of I_q(β) (QAWO weights for β ≠ 0)."""
    x = model.x
    scale = max(1.0, x * abs(float(model.g(x))))
    options = dict(epsabs=1e-13 * scale, epsrel=1e-12, limit=2000)

    def weight(t: float) -> float:
        return float(model.g(t))

    if beta == 0:
        value, _ = integrate.quad(weight, 1.0, x, **options)
        return complex(value)
    omega = TWO_PI * beta
    real, _ = integrate.quad(weight, 1.0, x, weight="cos", wvar=omega, **options)
    imag, _ = integrate.quad(weight, 1.0, x, weight="sin", wvar=omega, **options)
    return complex(real, imag)


def S_star(alpha, arc: FareyArc, x: float) -> complex:
    """I_q(β)/q at α = a/q + β.

    Raises:
        ValueError: If alpha does not lie in the arc.
    """
    if not arc_containing(alpha, arc):
        raise ValueError(f"alpha={alpha} is outside the arc around {arc.a}/{arc.q}")
    t = alpha - math.floor(alpha - arc.left)
    beta = t - arc.center if isinstance(t, Fraction) else t - arc.a / arc.q
    return I_q(float(beta), ArcModel(q=arc.q, x=x)) / arc.q


def S_star_many(betas: np.ndarray, qs: np.ndarray, x: float) -> np.ndarray:
    """Vectorised S* for grid points already located in their arcs."""
    qs = np.asarray(qs, dtype=np.float64)
    return oscillatory_integral(betas, qs, x) / qs


def L0(q: int, x: float) -> float:
    """∫₁ˣ g_q(t)² dt from the antiderivative t(u² − 2u + 2), u = log(t/q²) + 2γ_E."""

    def antiderivative(t: float) -> float:
        u = math.log(t / q**2) + 2.0 * EULER_GAMMA
        return t * (u * u - 2.0 * u + 2.0)

    return antiderivative(x) - antiderivative(1.0)


class PlancherelCheck(NamedTuple):
    truncated_integral: float
    l0: float
    relative_gap: float


def plancherel_check(q: int, x: float, B: float) -> PlancherelCheck:
    """Compare ∫_{−B}^{B}|I_q(β)|²dβ with L(0) = ∫₁ˣ g_q².

    The integrand is even in β; [0, B] is split into panels of width at most
    1/(2x) (the oscillation scale) and each panel gets Gauss–Legendre nodes.
    Panels are evaluated in blocks, so memory stays flat in x·B.

    Raises:
        ValueError: If B <= 0.
    """
    if B <= 0:
        raise ValueError(f"truncation bound must be positive, got {B}")
    l0 = L0(q, x)
    if x == 1:
        return PlancherelCheck(0.0, l0, 0.0)
    width = min(0.5 / x, B)
    panels = int(math.ceil(B / width))
    nodes, weights = np.polynomial.legendre.leggauss(PLANCHEREL_NODES)
    partials = []
    for start in range(0, panels, PLANCHEREL_BLOCK):
        stop = min(start + PLANCHEREL_BLOCK, panels)
        block = np.arange(start, stop + 1, dtype=np.float64) * (B / panels)
        half = 0.5 * (block[1:] - block[:-1])
        mids = 0.5 * (block[1:] + block[:-1])
        betas = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
        values = np.abs(oscillatory_integral(betas, q, x)) ** 2
        partials.append(
            float(np.sum(values.reshape(half.size, -1) * weights[None, :] * half[:, None]))
        )
    truncated = 2.0 * math.fsum(partials)
    gap = (l0 - truncated) / l0 if l0 else 0.0
    logger.debug(f"Plancherel q={q} x={x} B={B}: truncated={truncated:.10g} L0={l0:.10g}")
    return PlancherelCheck(truncated, l0, gap)


def _log_ratio(q: int, x: float) -> float:
    return max(math.log(x / q**2), 0.0)


def i2_bound_ratio(q: int, x: float, betas: Iterable[float]) -> float:
    """max over β of |I_q(β)| / (q² + log(x/q²)/|β|)."""
    betas = np.asarray(list(betas), dtype=np.float64)
    values = np.abs(oscillatory_integral(betas, q, x))
    scale = q**2 + _log_ratio(q, x) / np.abs(betas)
    return float(np.max(values / scale))


def arc_bound_ratio(q: int, x: float, betas: Iterable[float]) -> float:
    """max over β of |S*| / ((q² + log(x/q²)·x/(1+|β|x))/q)."""
    betas = np.asarray(list(betas), dtype=np.float64)
    values = np.abs(oscillatory_integral(betas, q, x)) / q
    scale = (q**2 + _log_ratio(q, x) * x / (1.0 + np.abs(betas) * x)) / q
    return float(np.max(values / scale))


def major_arc_mass_scale(x: float, gamma: int) -> float:
    """Σ_{q≤γ} log(x/q²), the size of Σ∫|S*| over the dissection.

    Equals γ·log(x/γ²) + 2γ − log(2πγ) + o(1), which stays positive at γ = √x.
    """
    q = np.arange(1, gamma + 1, dtype=np.float64)
    return float(np.sum(np.log(x / q**2)))


def star_l1_over_dissection(x: float, gamma: int, M: int) -> Tuple[float, float]:
    """Σ_arcs ∫|S*| on the grid j/M, and the scale Σ_{q≤γ} log(x/q²) it tracks.

    Raises:
        ValueError: If M < 1.
    """
    if M < 1:
        raise ValueError(f"grid size must be positive, got {M}")
    arcs = dissection(gamma)
    index, betas = locate_many(np.arange(M) / M, arcs)
    qs = np.array([arc.q for arc in arcs], dtype=np.float64)[index]
    mass = float(np.sum(np.abs(S_star_many(betas, qs, x)))) / M
    return mass, major_arc_mass_scale(x, gamma)


def write_profile_csv(q: int, x: float, betas: Iterable[float], path: str | Path) -> int:
    """Dump (β, |I_q(β)|) rows for one q."""
    betas = np.asarray(list(betas), dtype=np.float64)
    magnitudes = np.abs(oscillatory_integral(betas, q, x))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["beta", "abs_I"])
        writer.writerows(zip(betas.tolist(), magnitudes.tolist()))
    logger.info(f"Wrote |I_q| profile for q={q}, x={x} ({betas.size} rows) to {path}")
    return int(betas.size)
