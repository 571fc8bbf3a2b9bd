"""Computable set ideals over the naturals with horizon-bounded verdicts.

An ideal is a family of "small" subsets closed under subsets and finite
unions; the admissible ones contain every singleton. Whether an explicit
subset of the naturals belongs to an ideal is not decidable from a finite
prefix, so membership here is three-valued: In, Out, or Inconclusive, decided
from tail-window statistics over (horizon/2, horizon] with a 10x hysteresis
band separating In from Out. The band is what keeps borderline noise from
masquerading as confident evidence downstream.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Collection, Iterable, Union

from . import rng
from .errors import ConfigError, ValidationError

FINITE = "finite"
DENSITY_ZERO = "density_zero"
SUMMABLE = "summable"

_WEIGHT_RULES = {
    "inverse_square": lambda j: 1.0 / (j * j),
    "inverse": lambda j: 1.0 / j,
    "geometric_half": lambda j: 0.5**j,
}

Indicator = Union[Callable[[int], bool], Collection[int]]


class Verdict(enum.Enum):
    """Three-valued horizon decision."""

    IN = "In"
    OUT = "Out"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class MembershipVerdict:
    """Decision plus the statistic and threshold that produced it."""

    state: Verdict
    statistic: float
    threshold_used: float

    def as_dict(self) -> dict:
        return {
            "state": self.state.value,
            "statistic": self.statistic,
            "threshold_used": self.threshold_used,
        }


@dataclass(frozen=True)
class IdealOracle:
    """A computable ideal: finite sets, density-zero sets, or summable sets.

    kind:
      finite        In when members are negligible in the tail window (at
                    most 1% of it, and never fewer than one, so singletons
                    anywhere are In), Out when they fill at least 10% of it.
      density_zero  In when tail density <= tol, Out when >= 10 * tol.
      summable      In when sum of weights over the set stays within bound
                    (two-valued: the statistic is a certified partial sum).
    """

    kind: str
    horizon: int
    tol: float = 0.0
    weight_rule: str = "inverse_square"
    bound: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (FINITE, DENSITY_ZERO, SUMMABLE):
            raise ValidationError(f"unknown ideal kind {self.kind!r}")
        if self.kind == DENSITY_ZERO and self.tol <= 0.0:
            raise ValidationError("density-zero ideal needs tol > 0")
        if self.kind == SUMMABLE:
            if self.weight_rule not in _WEIGHT_RULES:
                raise ValidationError(f"unknown weight rule {self.weight_rule!r}")
            if self.bound <= 0.0:
                raise ValidationError("summable ideal needs bound > 0")

    @classmethod
    def finite(cls, horizon: int) -> "IdealOracle":
        return cls(FINITE, horizon=horizon)

    @classmethod
    def density_zero(cls, tol: float, horizon: int) -> "IdealOracle":
        return cls(DENSITY_ZERO, horizon=horizon, tol=float(tol))

    @classmethod
    def summable(
        cls, weight_rule: str, bound: float, horizon: int
    ) -> "IdealOracle":
        return cls(SUMMABLE, horizon=horizon, weight_rule=weight_rule, bound=float(bound))

    def with_horizon(self, horizon: int) -> "IdealOracle":
        return replace(self, horizon=horizon)

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "horizon": self.horizon}
        if self.kind == DENSITY_ZERO:
            d["tol"] = self.tol
        if self.kind == SUMMABLE:
            d["weight_rule"] = self.weight_rule
            d["bound"] = self.bound
        return d


def _as_predicate(indicator: Indicator) -> Callable[[int], bool]:
    if callable(indicator):
        return indicator
    members = frozenset(indicator)
    return members.__contains__


def membership(ideal: IdealOracle, indicator: Indicator) -> MembershipVerdict:
    """Horizon-bounded verdict for the set {j in 1..horizon : indicator(j)}.

    The statistic only looks at the tail window (horizon/2, horizon]: set
    finiteness and density are tail properties, and early indices would be
    pure noise. Indicators must be total and deterministic on 1..horizon.
    """
    if ideal.horizon < 10:
        raise ConfigError(f"ideal horizon must be at least 10, got {ideal.horizon}")
    member = _as_predicate(indicator)
    horizon = ideal.horizon
    tail_start = horizon // 2
    tail_len = horizon - tail_start

    if ideal.kind == SUMMABLE:
        weight = _WEIGHT_RULES[ideal.weight_rule]
        total = 0.0
        for j in range(1, horizon + 1):
            if member(j):
                total += weight(j)
        state = Verdict.IN if total <= ideal.bound else Verdict.OUT
        return MembershipVerdict(state, statistic=total, threshold_used=ideal.bound)

    tail_count = sum(1 for j in range(tail_start + 1, horizon + 1) if member(j))

    if ideal.kind == FINITE:
        in_cap = max(1, tail_len // 100)
        if tail_count <= in_cap:
            state = Verdict.IN
        elif tail_count >= 0.10 * tail_len:
            state = Verdict.OUT
        else:
            state = Verdict.INCONCLUSIVE
        return MembershipVerdict(state, statistic=float(tail_count), threshold_used=float(in_cap))

    density = tail_count / tail_len
    if density <= ideal.tol:
        state = Verdict.IN
    elif density >= 10.0 * ideal.tol:
        state = Verdict.OUT
    else:
        state = Verdict.INCONCLUSIVE
    return MembershipVerdict(state, statistic=density, threshold_used=ideal.tol)


@dataclass(frozen=True)
class SelfCheckReport:
    """Outcome of sampled structural checks on an ideal oracle."""

    samples: int
    singleton_failures: tuple[int, ...]
    hereditary_failures: int
    union_failures: int

    @property
    def violations(self) -> int:
        return len(self.singleton_failures) + self.hereditary_failures + self.union_failures


def _sample_small_set(ideal: IdealOracle, seed: int, index: int) -> frozenset[int]:
    """A sampled set the ideal should accept (used as evidence material)."""
    horizon = ideal.horizon
    kind = rng.randint(seed, index * 4, 0, 2)
    if ideal.kind == FINITE or kind == 0:
        # finite chunk confined to the first half
        size = rng.randint(seed, index * 4 + 1, 0, max(1, horizon // 20))
        lo = rng.randint(seed, index * 4 + 2, 1, max(1, horizon // 2 - 1))
        return frozenset(range(lo, min(lo + size, horizon // 2 + 1)))
    if kind == 1:
        shift = rng.randint(seed, index * 4 + 1, 0, 5)
        return frozenset(k * k + shift for k in range(1, int(horizon**0.5) + 1))
    step = rng.randint(seed, index * 4 + 1, 2, 4)
    out, v = [], 1
    while v <= horizon:
        out.append(v)
        v *= step
    return frozenset(out)


def admissibility_selfcheck(
    ideal: IdealOracle, samples: int = 100, seed: int = 7
) -> SelfCheckReport:
    """Sampled evidence that the oracle behaves like an admissible ideal.

    Checks, over seeded random material: every singleton is In; subsets of
    In sets are never Out; unions of two In sets are never Out. Violations
    are counted, not raised.
    """
    if samples < 1:
        raise ValidationError("need at least one sample")
    horizon = ideal.horizon

    singleton_failures = []
    for i in range(samples):
        m = rng.randint(seed, 10_000 + i, 1, horizon)
        if membership(ideal, frozenset((m,))).state is not Verdict.IN:
            singleton_failures.append(m)

    hereditary_failures = 0
    union_failures = 0
    for i in range(samples):
        a = _sample_small_set(ideal, seed, 2 * i)
        b = _sample_small_set(ideal, seed, 2 * i + 1)
        big = a | b
        v_big = membership(ideal, big)
        if v_big.state is Verdict.IN:
            sub = frozenset(v for v in big if rng.bits64(seed, 50_000 + i * 997 + v) % 2 == 0)
            if membership(ideal, sub).state is Verdict.OUT:
                hereditary_failures += 1
        v_a, v_b = membership(ideal, a), membership(ideal, b)
        if v_a.state is Verdict.IN and v_b.state is Verdict.IN:
            if membership(ideal, a | b).state is Verdict.OUT:
                union_failures += 1

    return SelfCheckReport(
        samples=samples,
        singleton_failures=tuple(singleton_failures),
        hereditary_failures=hereditary_failures,
        union_failures=union_failures,
    )


def indicator_from_set(members: Iterable[int]) -> frozenset[int]:
    """Normalize an explicit member list into the indicator form."""
    return frozenset(int(m) for m in members)
