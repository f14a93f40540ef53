"""Farey fractions and the circle dissection built from their mediants.

Arcs are half-open intervals [left, right) on the circle, one per reduced
fraction a/q with q ≤ γ. Endpoints are mediants with the circular Farey
neighbours, so consecutive arcs share endpoints and the lengths sum to 1
exactly. All endpoints stay ``Fraction`` until quadrature time.
"""

import bisect
import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FareyArc:
    """Arc of the dissection around a/q.

    ``inv_left`` and ``inv_right`` are the denominators q′, q″ of the left and
    right circular neighbours; they satisfy a·q′ ≡ 1 and a·q″ ≡ −1 (mod q).
    For the arc around 1/1 the right endpoint exceeds 1 (the arc wraps).
    """

    a: int
    q: int
    left: Fraction
    right: Fraction
    inv_left: int
    inv_right: int

    @property
    def center(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    @property
    def midpoint(self) -> Fraction:
        return (self.left + self.right) / 2


def farey_fractions(gamma: int) -> List[Tuple[int, int]]:
    """Reduced fractions a/q with 1 ≤ a ≤ q ≤ gamma, ascending.

    Walks the Farey sequence with the neighbour recurrence, starting after 0/1.

    Raises:
        ValueError: If gamma < 1.
    """
    if gamma < 1:
        raise ValueError(f"Farey order must be >= 1, got {gamma}")
    fractions: List[Tuple[int, int]] = []
    a, b, c, d = 0, 1, 1, gamma
    while c <= d:
        fractions.append((c, d))
        k = (gamma + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return fractions


def dissection(gamma: int) -> List[FareyArc]:
    """Farey dissection of order gamma, arcs sorted by left endpoint.

    The left neighbour of the first fraction is 0/1 (the last one, 1/1, shifted
    down by one) and the right neighbour of 1/1 is the first fraction shifted
    up by one.
    """
    fractions = farey_fractions(gamma)
    count = len(fractions)
    arcs: List[FareyArc] = []
    for i, (a, q) in enumerate(fractions):
        if i > 0:
            la, lq = fractions[i - 1]
        else:
            la, lq = fractions[-1][0] - fractions[-1][1], fractions[-1][1]
        if i < count - 1:
            ra, rq = fractions[i + 1]
        else:
            ra, rq = fractions[0][0] + fractions[0][1], fractions[0][1]
        arcs.append(
            FareyArc(
                a=a,
                q=q,
                left=Fraction(la + a, lq + q),
                right=Fraction(a + ra, q + rq),
                inv_left=lq,
                inv_right=rq,
            )
        )
    logger.debug(f"Built Farey dissection of order {gamma} with {count} arcs")
    return arcs


def _unwrap(alpha, arcs: Sequence[FareyArc]):
    """Shift alpha by an integer into [arcs[0].left, arcs[0].left + 1)."""
    start = arcs[0].left
    return alpha - math.floor(alpha - start)


def locate(alpha, arcs: Sequence[FareyArc]) -> Tuple[FareyArc, object]:
    """Find the arc containing alpha (mod 1) and beta = alpha − a/q.

    ``alpha`` may be a float or a Fraction; beta has the same type. Arcs are
    half-open, so a shared endpoint belongs to the arc it opens.

    Raises:
        ValueError: If alpha is not finite or arcs is empty.
    """
    if not arcs:
        raise ValueError("empty dissection")
    if isinstance(alpha, float) and not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    t = _unwrap(alpha, arcs)
    index = bisect.bisect_right(arcs, t, key=lambda arc: arc.left) - 1
    arc = arcs[index]
    if isinstance(t, Fraction):
        return arc, t - arc.center
    return arc, float(t) - arc.a / arc.q


def arc_containing(alpha, arc: FareyArc) -> bool:
    """True when alpha (mod 1) lies in [arc.left, arc.right)."""
    t = alpha - math.floor(alpha - arc.left)
    return arc.left <= t < arc.right


def locate_many(alphas: np.ndarray, arcs: Sequence[FareyArc]) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised ``locate`` for float grids.

    Returns:
        (indices into arcs, beta values) as numpy arrays.
    """
    lefts = np.array([float(arc.left) for arc in arcs])
    centers = np.array([arc.a / arc.q for arc in arcs])
    start = lefts[0]
    t = start + np.mod(np.asarray(alphas, dtype=float) - start, 1.0)
    index = np.searchsorted(lefts, t, side="right") - 1
    return index, t - centers[index]


def write_arcs_csv(arcs: Sequence[FareyArc], path: str | Path) -> int:
    """Dump arcs as q, a, left_num, left_den, right_num, right_den rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["q", "a", "left_num", "left_den", "right_num", "right_den"])
        for arc in arcs:
            writer.writerow(
                [
                    arc.q,
                    arc.a,
                    arc.left.numerator,
                    arc.left.denominator,
                    arc.right.numerator,
                    arc.right.denominator,
                ]
            )
    logger.info(f"Wrote {len(arcs)} arcs to {path}")
    return len(arcs)
