"""Independent brute-force oracles used to freeze expected values.

Everything here recomputes target quantities by a different route than the
package: dense grids for 1-D optimization, direct per-window enumeration
with exact rationals for windowed statistics. Oracles deliberately stay
dumb; their trustworthiness is their simplicity.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np


def grid_conjugate_max(m: Callable[[np.ndarray], np.ndarray], v: float, cap: float, points: int = 2_000_001) -> float:
    """Dense-grid supremum of v*u - M(u) over [0, cap]."""
    u = np.linspace(0.0, cap, points)
    return float(np.max(v * u - m(u)))


def power_conjugate(p: float, v: float) -> float:
    """Analytic Young conjugate of u**p / p: v**q / q with 1/p + 1/q = 1."""
    q = p / (p - 1.0)
    return v**q / q


def grid_luxemburg(modular_at_scale: Callable[[float], float], points: int = 100_000) -> float:
    """Grid search for inf {k : modular(x / k) <= 1}.

    Brackets by doubling/halving on the oracle's own evaluations, then scans
    a coarse grid followed by a fine grid inside the first feasible coarse
    cell (`points` values in total across the two stages).
    """
    k_hi = 1.0
    while modular_at_scale(1.0 / k_hi) > 1.0:
        k_hi *= 2.0
    k_lo = k_hi / 2.0
    while modular_at_scale(1.0 / k_lo) <= 1.0:
        k_hi = k_lo
        k_lo /= 2.0
        if k_lo < 1e-300:
            return 0.0
    coarse_n = 1000
    fine_n = points - coarse_n
    coarse = np.linspace(k_lo, k_hi, coarse_n)
    first = next(i for i, k in enumerate(coarse) if modular_at_scale(1.0 / float(k)) <= 1.0)
    lo = coarse[first - 1] if first > 0 else k_lo
    fine = np.linspace(lo, coarse[first], fine_n)
    for k in fine:
        if modular_at_scale(1.0 / float(k)) <= 1.0:
            return float(k)
    return float(coarse[first])


def grid_orlicz_norm(
    modular_at_scale: Callable[[float], float], k_max: float, points: int = 100_000
) -> float:
    """Log-grid minimum of (1 + modular(k x)) / k over (0, k_max]."""
    ks = np.logspace(-9.0, math.log10(k_max), points)
    best = math.inf
    for k in ks:
        val = (1.0 + modular_at_scale(float(k))) / float(k)
        if val < best:
            best = val
    return best


def grid_orlicz_norm_power(p: float, power_sum: float, k_max: float, points: int = 100_000) -> float:
    """Vectorized variant for a uniform u**p family: modular(k x) = k**p * S."""
    ks = np.logspace(-9.0, math.log10(k_max), points)
    vals = (1.0 + ks**p * power_sum) / ks
    return float(np.min(vals))


# ---------------------------------------------------------------------------
# windowed statistics by direct enumeration
# ---------------------------------------------------------------------------


def enum_windows_lambda(rule_values: Sequence[int], n: int) -> list[tuple[int, int, int, int]]:
    """(i, lo, hi, width) for moving windows from explicit rule values."""
    out = []
    for i in range(1, n + 1):
        lam = rule_values[i - 1]
        out.append((i, i - lam + 1, i, lam))
    return out


def enum_count_stats(
    terms: Sequence[float],
    windows: Sequence[tuple[int, int, int, int]],
    alpha: float,
    gamma: float,
    xi: float,
) -> tuple[list[int], list[float], list[int]]:
    """Counts, densities, and witness set, one window at a time."""
    counts, densities, witness = [], [], []
    for index, lo, hi, width in windows:
        c = sum(1 for j in range(lo, hi + 1) if terms[j - 1] >= gamma)
        counts.append(c)
        if alpha == 1.0:
            density = c / width
            member = Fraction(c, width) >= Fraction(*xi.as_integer_ratio())
        else:
            density = c / width**alpha
            member = density >= xi
        densities.append(density)
        if member:
            witness.append(index)
    return counts, densities, witness


def enum_sum_stats(
    terms: Sequence[float],
    windows: Sequence[tuple[int, int, int, int]],
    alpha: float,
    gamma: float,
) -> tuple[list[float], list[int]]:
    """Normalized window sums and witness set, summed per window.

    For alpha = 1 the sum is carried exactly as a rational before the single
    rounding to float, so the comparison against gamma is exact.
    """
    totals, witness = [], []
    for index, lo, hi, width in windows:
        window = [terms[j - 1] for j in range(lo, hi + 1)]
        if alpha == 1.0:
            exact = sum(Fraction(*t.as_integer_ratio()) for t in window) / width
            total = float(exact)
            member = exact >= Fraction(*gamma.as_integer_ratio())
        else:
            total = math.fsum(window) / width**alpha
            member = total >= gamma
        totals.append(total)
        if member:
            witness.append(index)
    return totals, witness


def density_zero_verdict(members: set[int], horizon: int, tol: float) -> str:
    """Tail-window density verdict, recomputed from scratch."""
    tail_start = horizon // 2
    count = sum(1 for j in range(tail_start + 1, horizon + 1) if j in members)
    d = count / (horizon - tail_start)
    if d <= tol:
        return "In"
    if d >= 10.0 * tol:
        return "Out"
    return "Inconclusive"
