"""Block decompositions of the positive integers by gap sequences.

A boundary list 0 = j_0 < j_1 < ... < j_R cuts (0, j_R] into blocks
(j_{r-1}, j_r] of length h_r. The validator demands finite evidence that the
gaps grow (the last gap must reach a threshold, by default the block count);
finite data cannot certify h_r -> infinity, so the check is reported as
evidence, never as proof. Block ratios j_r / j_{r-1} are kept as exact
rationals; the first ratio would divide by j_0 = 0 and is stored as absent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class LacunaryTheta:
    """Validated boundary sequence; construct via `validate_theta`."""

    boundaries: tuple[int, ...]
    h_threshold: int

    @property
    def block_count(self) -> int:
        return len(self.boundaries) - 1

    @property
    def last(self) -> int:
        return self.boundaries[-1]

    def gaps(self) -> tuple[int, ...]:
        b = self.boundaries
        return tuple(b[i + 1] - b[i] for i in range(len(b) - 1))


@dataclass(frozen=True)
class BlockView:
    """Block r = (lo, hi] with its length and boundary ratio."""

    r: int
    lo: int
    hi: int
    h: int
    phi: Fraction | None


def validate_theta(
    boundaries: Sequence[int], h_threshold: int | None = None
) -> LacunaryTheta:
    """Validate a boundary list and return the block-ready value.

    Raises ValidationError naming the first violated invariant and index:
    the list must start at 0, increase strictly, and its final gap must meet
    the growth-evidence threshold (default: the number of blocks).
    """
    b = tuple(int(v) for v in boundaries)
    if not b:
        raise ValidationError("boundary list is empty")
    if b[0] != 0:
        raise ValidationError(f"boundaries must start at 0, got {b[0]} at index 0")
    for i in range(len(b) - 1):
        if b[i + 1] <= b[i]:
            raise ValidationError(
                f"boundaries must increase strictly: {b[i + 1]} <= {b[i]} at index {i + 1}"
            )
    if len(b) < 2:
        raise ValidationError("need at least one block (two boundaries)")
    blocks = len(b) - 1
    threshold = blocks if h_threshold is None else int(h_threshold)
    last_gap = b[-1] - b[-2]
    if last_gap < threshold:
        raise ValidationError(
            f"gap-growth evidence failed: final gap {last_gap} < threshold {threshold} "
            f"(this is finite evidence only, not a proof of divergence)"
        )
    return LacunaryTheta(boundaries=b, h_threshold=threshold)


def blocks(theta: LacunaryTheta) -> tuple[BlockView, ...]:
    """The blocks (j_{r-1}, j_r] partitioning (0, j_R]."""
    out = []
    b = theta.boundaries
    for r in range(1, len(b)):
        lo, hi = b[r - 1], b[r]
        phi = Fraction(hi, lo) if lo > 0 else None
        out.append(BlockView(r=r, lo=lo, hi=hi, h=hi - lo, phi=phi))
    return tuple(out)


def block_of(theta: LacunaryTheta, j: int) -> int:
    """Index r of the block containing j, for 0 < j <= j_R."""
    b = theta.boundaries
    if j <= 0 or j > b[-1]:
        raise ValidationError(f"{j} lies outside the covered range (0, {b[-1]}]")
    lo, hi = 0, len(b) - 1
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if b[mid] < j:
            lo = mid
        else:
            hi = mid
    return hi


def refine(theta: LacunaryTheta, insertions: Iterable[int]) -> LacunaryTheta:
    """Insert new boundaries strictly inside existing blocks.

    The result's boundary set is a superset of the original's, so
    `is_refinement(result, theta)` holds by construction. Splitting a block
    may shrink the final gap, so the refined value inherits validity from its
    parent: the gap-evidence threshold is relaxed to whatever gap results.
    """
    existing = set(theta.boundaries)
    added = []
    for v in insertions:
        v = int(v)
        if v in existing:
            raise ValidationError(f"insertion {v} collides with an existing boundary")
        if not 0 < v < theta.last:
            raise ValidationError(
                f"insertion {v} lies outside the open range (0, {theta.last})"
            )
        if v in added:
            raise ValidationError(f"insertion {v} repeated")
        added.append(v)
    merged = sorted(existing | set(added))
    final_gap = merged[-1] - merged[-2]
    return validate_theta(merged, h_threshold=min(theta.h_threshold, final_gap))


def is_refinement(fine: LacunaryTheta, coarse: LacunaryTheta) -> bool:
    """True when every coarse boundary in the common range is a fine boundary."""
    common = min(fine.last, coarse.last)
    fine_set = set(fine.boundaries)
    return all(b in fine_set for b in coarse.boundaries if b <= common)


def geometric_theta(
    base: int, count: int, h_threshold: int | None = None
) -> LacunaryTheta:
    """Boundaries (0, base, base^2, ..., base^count)."""
    if base < 2 or count < 1:
        raise ValidationError("geometric rule needs base >= 2 and count >= 1")
    return validate_theta([0] + [base**r for r in range(1, count + 1)], h_threshold)


def factorial_gap_theta(count: int, h_threshold: int | None = None) -> LacunaryTheta:
    """Boundaries with gaps 1!, 2!, ..., count!."""
    if count < 1:
        raise ValidationError("factorial-gap rule needs count >= 1")
    b = [0]
    gap = 1
    for r in range(1, count + 1):
        gap *= r
        b.append(b[-1] + gap)
    return validate_theta(b, h_threshold)


def geometric_theta_within(base: int, horizon: int) -> LacunaryTheta:
    """Largest geometric boundary list with j_R <= horizon."""
    if horizon < base:
        raise ValidationError(f"horizon {horizon} is below the first boundary {base}")
    count = 0
    power = 1
    while power * base <= horizon:
        power *= base
        count += 1
    return geometric_theta(base, count)
