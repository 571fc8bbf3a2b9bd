"""Deterministic, seeded supply of test sequences and window-rule pairs.

Sequences are described declaratively (spike on a named index set, block
oscillation, convergent-plus-decaying-noise, counter-seeded bounded noise,
or explicit values) so the same spec always regenerates the same bits, in
any process, in any order.

Window-rule pairs (lam, mu) come with a *regime certificate*: the tail
statistic the regime promises (a positive lower bound on lam_i**a / mu_i**b,
or a shrinking envelope around mu_i / lam_i**b = 1) is computed by direct
evaluation and shipped with the pair, so downstream consumers can re-check
the hypothesis instead of assuming it. A regime that cannot be realised for
the requested orders raises, carrying the statistics of the failed attempt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from . import rng
from .convergence import LambdaRule
from .errors import GenerationError, ValidationError
from .orlicz import SequencePrefix

SPIKE = "spike"
OSCILLATING = "oscillating"
CONVERGENT = "convergent"
BOUNDED_RANDOM = "bounded_random"
CUSTOM = "custom"

_SUPPORT_KINDS = ("squares", "cubes", "powers", "multiples", "first", "explicit")


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative recipe for one deterministic sequence."""

    kind: str
    horizon: int
    seed: int = 0
    support: str = "squares"
    support_param: int = 2
    support_values: tuple[int, ...] = ()
    spike_value: float = 1.0
    base_value: float = 0.0
    period: int = 2
    amplitude: float = 1.0
    limit: float = 0.0
    noise_scale: float = 1.0
    noise_exponent: float = 1.0
    bound: float = 1.0
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (SPIKE, OSCILLATING, CONVERGENT, BOUNDED_RANDOM, CUSTOM):
            raise ValidationError(f"unknown generator kind {self.kind!r}")
        if self.horizon < 1:
            raise ValidationError("horizon must be at least 1")
        if self.kind == SPIKE and self.support not in _SUPPORT_KINDS:
            raise ValidationError(f"unknown support rule {self.support!r}")
        if self.kind == OSCILLATING and self.period < 2:
            raise ValidationError("oscillation period must be at least 2")
        if self.kind == CUSTOM and len(self.values) != self.horizon:
            raise ValidationError("custom generator needs exactly `horizon` values")

    # -- constructors -------------------------------------------------------

    @classmethod
    def spike_on(
        cls,
        support: str,
        horizon: int,
        support_param: int = 2,
        support_values: tuple[int, ...] = (),
        spike_value: float = 1.0,
        base_value: float = 0.0,
    ) -> "GeneratorSpec":
        return cls(
            SPIKE,
            horizon=horizon,
            support=support,
            support_param=support_param,
            support_values=tuple(int(v) for v in support_values),
            spike_value=float(spike_value),
            base_value=float(base_value),
        )

    @classmethod
    def oscillating(cls, period: int, horizon: int, amplitude: float = 1.0) -> "GeneratorSpec":
        return cls(OSCILLATING, horizon=horizon, period=period, amplitude=float(amplitude))

    @classmethod
    def convergent(
        cls,
        limit: float,
        horizon: int,
        noise_scale: float = 1.0,
        noise_exponent: float = 1.0,
    ) -> "GeneratorSpec":
        return cls(
            CONVERGENT,
            horizon=horizon,
            limit=float(limit),
            noise_scale=float(noise_scale),
            noise_exponent=float(noise_exponent),
        )

    @classmethod
    def bounded_random(cls, bound: float, seed: int, horizon: int) -> "GeneratorSpec":
        return cls(BOUNDED_RANDOM, horizon=horizon, seed=seed, bound=float(bound))

    @classmethod
    def custom(cls, values: tuple[float, ...]) -> "GeneratorSpec":
        vals = tuple(float(v) for v in values)
        return cls(CUSTOM, horizon=len(vals), values=vals)

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "horizon": self.horizon, "seed": self.seed}
        if self.kind == SPIKE:
            d.update(
                support=self.support,
                support_param=self.support_param,
                spike_value=self.spike_value,
                base_value=self.base_value,
            )
            if self.support == "explicit":
                d["support_values"] = list(self.support_values)
        elif self.kind == OSCILLATING:
            d.update(period=self.period, amplitude=self.amplitude)
        elif self.kind == CONVERGENT:
            d.update(
                limit=self.limit,
                noise_scale=self.noise_scale,
                noise_exponent=self.noise_exponent,
            )
        elif self.kind == BOUNDED_RANDOM:
            d.update(bound=self.bound)
        else:
            d["values"] = list(self.values)
        return d


def _icbrt(j: int) -> int:
    r = round(j ** (1.0 / 3.0))
    while (r + 1) ** 3 <= j:
        r += 1
    while r**3 > j:
        r -= 1
    return r


def support_member(spec: GeneratorSpec, j: int) -> bool:
    """Whether index j belongs to the spike support set."""
    s = spec.support
    if s == "squares":
        r = math.isqrt(j)
        return r * r == j
    if s == "cubes":
        return _icbrt(j) ** 3 == j
    if s == "powers":
        base = max(2, spec.support_param)
        v = 1
        while v < j:
            v *= base
        return v == j
    if s == "multiples":
        return j % max(1, spec.support_param) == 0
    if s == "first":
        return j <= spec.support_param
    return j in spec.support_values


def gen_sequence(spec: GeneratorSpec) -> SequencePrefix:
    """Materialise the sequence prefix described by `spec`."""
    n = spec.horizon
    if spec.kind == SPIKE:
        if spec.support == "explicit":
            members = frozenset(spec.support_values)
            vals = [
                spec.spike_value if j in members else spec.base_value
                for j in range(1, n + 1)
            ]
        else:
            vals = [
                spec.spike_value if support_member(spec, j) else spec.base_value
                for j in range(1, n + 1)
            ]
    elif spec.kind == OSCILLATING:
        half = spec.period // 2
        vals = [
            -spec.amplitude if (j - 1) % spec.period < half else spec.amplitude
            for j in range(1, n + 1)
        ]
    elif spec.kind == CONVERGENT:
        vals = [
            spec.limit + spec.noise_scale / j**spec.noise_exponent
            for j in range(1, n + 1)
        ]
    elif spec.kind == BOUNDED_RANDOM:
        vals = [
            spec.bound * (2.0 * rng.unit(spec.seed, j) - 1.0) for j in range(1, n + 1)
        ]
    else:
        vals = list(spec.values)
    return SequencePrefix(tuple(vals))


# ---------------------------------------------------------------------------
# window-rule pairs with regime certificates
# ---------------------------------------------------------------------------

LIMINF_POSITIVE = "liminf_positive"
LIM_RATIO_ONE = "lim_ratio_one"
VIOLATING_LIMINF = "violating_liminf"


@dataclass(frozen=True)
class LiminfPositive:
    """lam_i**alpha / mu_i**beta stays bounded away from 0.

    With alpha < beta a growing mu collapses the ratio, so only bounded
    window pairs can realise the regime; `require_growth` then makes the
    generator fail loudly instead of falling back to bounded pairs.
    """

    alpha: float
    beta: float
    require_growth: bool = False


@dataclass(frozen=True)
class LimRatioOne:
    """mu_i / lam_i**beta tends to 1.

    Nondegenerate (growing) realisations exist only at beta = 1; below that
    the constraint lam <= mu forces the all-ones pair.
    """

    beta: float
    alpha: float = 1.0
    require_growth: bool = False


@dataclass(frozen=True)
class ViolatingLiminf:
    """lam_i**alpha / mu_i**beta collapses to 0 (hypothesis-breaking pair)."""

    alpha: float
    beta: float


Regime = Union[LiminfPositive, LimRatioOne, ViolatingLiminf]


@dataclass(frozen=True)
class PairCertificate:
    """Tail statistics actually achieved by a generated pair.

    `ratio_early_min` and `tail_min_ratio` split the tail in two so a
    certificate can distinguish a ratio that levels off from one still
    collapsing; this is finite evidence, never a proof of the limit.
    """

    regime: str
    alpha: float
    beta: float
    horizon: int
    tail_min_ratio: float
    ratio_early_min: float
    envelope_early: float
    envelope_late: float

    def as_dict(self) -> dict:
        return {
            "regime": self.regime,
            "alpha": self.alpha,
            "beta": self.beta,
            "horizon": self.horizon,
            "tail_min_ratio": self.tail_min_ratio,
            "ratio_early_min": self.ratio_early_min,
            "envelope_early": self.envelope_early,
            "envelope_late": self.envelope_late,
        }


@dataclass(frozen=True)
class LambdaMuPair:
    lam: LambdaRule
    mu: LambdaRule
    certificate: PairCertificate


_ENVELOPE_CAP = 0.1


def _pair_stats(
    lam: LambdaRule, mu: LambdaRule, alpha: float, beta: float, horizon: int
) -> tuple[float, float, float, float]:
    """(late min ratio, early min ratio, early envelope, late envelope)."""
    half = horizon // 2
    three_q = (3 * horizon) // 4
    min_late = math.inf
    min_early = math.inf
    env_early = 0.0
    env_late = 0.0
    for i in range(1, horizon + 1):
        la = lam.evaluate(i)
        mu_i = mu.evaluate(i)
        if la > mu_i:
            raise GenerationError(f"pair violates lam_i <= mu_i at i = {i}")
        if i <= half:
            continue
        ratio = la**alpha / mu_i**beta
        env = abs(mu_i / la**beta - 1.0)
        if i <= three_q:
            min_early = min(min_early, ratio)
            env_early = max(env_early, env)
        else:
            min_late = min(min_late, ratio)
            env_late = max(env_late, env)
    return min_late, min_early, env_early, env_late


def _certify(
    regime: Regime, lam: LambdaRule, mu: LambdaRule, horizon: int
) -> PairCertificate:
    if isinstance(regime, LiminfPositive):
        name = LIMINF_POSITIVE
    elif isinstance(regime, LimRatioOne):
        name = LIM_RATIO_ONE
    else:
        name = VIOLATING_LIMINF
    a, b = regime.alpha, regime.beta
    min_late, min_early, env_early, env_late = _pair_stats(lam, mu, a, b, horizon)
    cert = PairCertificate(
        regime=name,
        alpha=a,
        beta=b,
        horizon=horizon,
        tail_min_ratio=min_late,
        ratio_early_min=min_early,
        envelope_early=env_early,
        envelope_late=env_late,
    )
    if name == LIMINF_POSITIVE:
        if min_late <= 0.0 or min_late < 0.9 * min_early:
            raise GenerationError(
                f"tail ratio still collapsing: early min {min_early}, late min "
                f"{min_late} for {lam} vs {mu}"
            )
    if name == LIM_RATIO_ONE and (env_late > _ENVELOPE_CAP or env_late > env_early + 1e-12):
        raise GenerationError(
            f"ratio envelope did not shrink under {_ENVELOPE_CAP}: "
            f"early {env_early}, late {env_late} for {lam} vs {mu}"
        )
    return cert


_GROWING_PAIRS = [
    (LambdaRule(LambdaRule.CEIL_RATIO, num=1, den=2), LambdaRule(LambdaRule.IDENTITY)),
    (LambdaRule(LambdaRule.IDENTITY), LambdaRule(LambdaRule.IDENTITY)),
    (LambdaRule(LambdaRule.CEIL_RATIO, num=3, den=4), LambdaRule(LambdaRule.IDENTITY)),
]

_RATIO_ONE_GROWING = [
    (LambdaRule(LambdaRule.IDENTITY), LambdaRule(LambdaRule.IDENTITY)),
    (LambdaRule(LambdaRule.MINUS_ISQRT), LambdaRule(LambdaRule.IDENTITY)),
]

_BOUNDED_PAIRS = [
    (LambdaRule(LambdaRule.CONST_CAP, cap=16), LambdaRule(LambdaRule.CONST_CAP, cap=64)),
    (LambdaRule(LambdaRule.CONST_CAP, cap=32), LambdaRule(LambdaRule.CONST_CAP, cap=32)),
    (LambdaRule(LambdaRule.CONST_CAP, cap=64), LambdaRule(LambdaRule.CONST_CAP, cap=64)),
]


def _candidates(regime: Regime) -> list[tuple[LambdaRule, LambdaRule]]:
    if isinstance(regime, LiminfPositive):
        if regime.alpha == regime.beta:
            return _GROWING_PAIRS + [_BOUNDED_PAIRS[2]]
        if regime.require_growth:
            return list(_GROWING_PAIRS)
        return list(_BOUNDED_PAIRS)
    if isinstance(regime, LimRatioOne):
        if regime.beta == 1.0:
            return _RATIO_ONE_GROWING + [_BOUNDED_PAIRS[2]]
        if regime.require_growth:
            return list(_RATIO_ONE_GROWING)
        return [(LambdaRule(LambdaRule.CONST_CAP, cap=1), LambdaRule(LambdaRule.CONST_CAP, cap=1))]
    return [
        (LambdaRule(LambdaRule.ISQRT), LambdaRule(LambdaRule.IDENTITY)),
        (LambdaRule(LambdaRule.CONST_CAP, cap=4), LambdaRule(LambdaRule.IDENTITY)),
    ]


def gen_lambda_mu_pair(regime: Regime, horizon: int, variant: int = 0) -> LambdaMuPair:
    """Generate a certified (lam, mu) pair for the requested regime.

    `variant` selects the preferred family; if its certificate fails, the
    remaining feasible families are tried in a fixed order, so the result is
    still a pure function of (regime, horizon, variant). When no family can
    realise the regime (a growth-requiring ratio-one pair at beta < 1, say),
    the error carries the tail statistics of every attempted family.
    """
    if horizon < 10:
        raise ValidationError("pair horizon must be at least 10")
    a, b = regime.alpha, regime.beta
    if not 0.0 < a <= b <= 1.0:
        raise ValidationError(f"orders must satisfy 0 < alpha <= beta <= 1, got {a}, {b}")

    candidates = _candidates(regime)
    order = [candidates[variant % len(candidates)]] + [
        c for i, c in enumerate(candidates) if i != variant % len(candidates)
    ]
    attempts = []
    for lam, mu in order:
        try:
            cert = _certify(regime, lam, mu, horizon)
            return LambdaMuPair(lam=lam, mu=mu, certificate=cert)
        except GenerationError as exc:
            attempts.append(str(exc))
    raise GenerationError(
        "regime infeasible for requested orders; attempts: " + " | ".join(attempts)
    )


def verify_pair_certificate(pair: LambdaMuPair, horizon: int | None = None) -> bool:
    """Recompute the pair's tail statistics and compare with the certificate."""
    cert = pair.certificate
    h = horizon or cert.horizon
    min_late, min_early, env_early, env_late = _pair_stats(
        pair.lam, pair.mu, cert.alpha, cert.beta, h
    )
    if h != cert.horizon:
        # different horizon: only directional sanity is possible
        return min_late > 0.0 if cert.regime == LIMINF_POSITIVE else True
    return (
        math.isclose(min_late, cert.tail_min_ratio, rel_tol=1e-12)
        and math.isclose(min_early, cert.ratio_early_min, rel_tol=1e-12)
        and math.isclose(env_early, cert.envelope_early, rel_tol=1e-12, abs_tol=1e-15)
        and math.isclose(env_late, cert.envelope_late, rel_tol=1e-12, abs_tol=1e-15)
    )
