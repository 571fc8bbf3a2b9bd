"""Horizon-bounded convergence and summability testers.

Every tester here reduces an asymptotic claim about a real sequence to a
three-valued verdict computed from a finite prefix:

  * `statistical_test`    deviation set K(eps) judged by an ideal oracle,
  * `ntheta_test`         per-block mean deviations over a gap sequence,
  * `slambda_alpha_test`  windowed deviation *counts*, normalized by the
                          window width to the power alpha, thresholded and
                          judged by an ideal oracle,
  * `wlambda_alpha_test`  windowed modular *sums* under the same scheme,
  * `wlambda_tail_test`   the same sums with plain tail evidence instead of
                          an ideal (the non-ideal summability space),
  * `neighborhood_test`   the count form with "escapes a neighborhood of 0"
                          replacing the numeric threshold.

Windows come in two flavours: moving windows [i - lam_i + 1, i] driven by a
nondecreasing integer rule, or the blocks of a lacunary boundary sequence,
normalized by lam_i**alpha and h_r**alpha respectively.

Numerical policy: counts are exact integers; windowed sums are computed by
exact integer-scaled prefix sums, so every reported value equals the
correctly rounded sum of its window (bit-identical to `math.fsum` over the
window, at any horizon). Threshold comparisons avoid float division wherever
the normalization is rational (alpha = 1), and ties always count as "at or
above threshold".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from .errors import ConfigError, DomainError, ValidationError
from .ideals import IdealOracle, MembershipVerdict, Verdict, membership
from .lacunary import LacunaryTheta, blocks as theta_blocks, geometric_theta_within
from .orlicz import IDENTITY, MusielakFamily, OrliczSpec, SequencePrefix, _evaluator

CANONICAL = "canonical"
LITERAL = "literal"

BY_H = "by_h"
BY_J = "by_j"


# ---------------------------------------------------------------------------
# window schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaRule:
    """Declarative nondecreasing window-length rule with lam_i <= i.

    Kinds: identity (lam_i = i), ceil_ratio (ceil(num * i / den)),
    minus_isqrt (i - floor(sqrt(i)), clamped to 1), isqrt (floor(sqrt(i)),
    clamped to 1), const_cap (min(i, cap)).
    """

    kind: str
    num: int = 1
    den: int = 2
    cap: int = 1

    IDENTITY = "identity"
    CEIL_RATIO = "ceil_ratio"
    MINUS_ISQRT = "minus_isqrt"
    ISQRT = "isqrt"
    CONST_CAP = "const_cap"

    def __post_init__(self) -> None:
        kinds = (self.IDENTITY, self.CEIL_RATIO, self.MINUS_ISQRT, self.ISQRT, self.CONST_CAP)
        if self.kind not in kinds:
            raise ValidationError(f"unknown window rule kind {self.kind!r}")
        if self.kind == self.CEIL_RATIO and not 1 <= self.num <= self.den:
            raise ValidationError("ceil_ratio needs 1 <= num <= den")
        if self.kind == self.CONST_CAP and self.cap < 1:
            raise ValidationError("const_cap needs cap >= 1")

    def evaluate(self, i: int) -> int:
        if self.kind == self.IDENTITY:
            return i
        if self.kind == self.CEIL_RATIO:
            return (self.num * i + self.den - 1) // self.den
        if self.kind == self.MINUS_ISQRT:
            return max(1, i - math.isqrt(i))
        if self.kind == self.ISQRT:
            return max(1, math.isqrt(i))
        return min(i, self.cap)

    def as_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == self.CEIL_RATIO:
            d.update(num=self.num, den=self.den)
        if self.kind == self.CONST_CAP:
            d.update(cap=self.cap)
        return d


@dataclass(frozen=True)
class LambdaWindows:
    """Moving windows [i - lam_i + 1, i] for i = 1..horizon."""

    rule: LambdaRule
    alpha: float

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)

    def as_dict(self) -> dict:
        return {"mode": "lambda", "rule": self.rule.as_dict(), "alpha": self.alpha}


@dataclass(frozen=True)
class LacunaryBlocks:
    """The blocks of a lacunary boundary sequence, truncated to the horizon."""

    theta: LacunaryTheta
    alpha: float

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)

    def as_dict(self) -> dict:
        return {
            "mode": "blocks",
            "boundaries": list(self.theta.boundaries),
            "alpha": self.alpha,
        }


WindowScheme = Union[LambdaWindows, LacunaryBlocks]


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"order alpha must lie in (0, 1], got {alpha}")


@lru_cache(maxsize=128)
def _lambda_bounds(rule: LambdaRule, n: int) -> tuple[tuple[int, int, int, int], ...]:
    """(index, lo, hi, width) for each moving window, with rule validation."""
    out = []
    prev = 0
    for i in range(1, n + 1):
        lam = rule.evaluate(i)
        if lam < 1:
            raise ValidationError(f"window rule produced lam_{i} = {lam} < 1")
        if lam > i:
            raise ValidationError(f"window rule produced lam_{i} = {lam} > {i}")
        if lam < prev:
            raise ValidationError(f"window rule is decreasing at i = {i}")
        prev = lam
        out.append((i, i - lam + 1, i, lam))
    return tuple(out)


@lru_cache(maxsize=128)
def _block_bounds(theta: LacunaryTheta, n: int) -> tuple[tuple[int, int, int, int], ...]:
    """(r, lo, hi, h_r) for blocks fully inside 1..n."""
    usable = [(b.r, b.lo + 1, b.hi, b.h) for b in theta_blocks(theta) if b.hi <= n]
    if not usable:
        raise ConfigError(
            f"horizon {n} is smaller than the first block boundary {theta.boundaries[1]}"
        )
    return tuple(usable)


def window_bounds(scheme: WindowScheme, n: int) -> tuple[tuple[int, int, int, int], ...]:
    if isinstance(scheme, LambdaWindows):
        return _lambda_bounds(scheme.rule, n)
    return _block_bounds(scheme.theta, n)


# ---------------------------------------------------------------------------
# exact windowed statistics
# ---------------------------------------------------------------------------


def prefix_counts(flags: Sequence[int]) -> list[int]:
    out = [0] * (len(flags) + 1)
    acc = 0
    for i, f in enumerate(flags, start=1):
        acc += f
        out[i] = acc
    return out


def exact_window_sums(
    terms: Sequence[float], windows: Iterable[tuple[int, int]]
) -> list[tuple[int, int]]:
    """Exact rational window sums as (numerator, shared denominator) pairs.

    Terms are lifted to integers over a common power-of-two denominator, so
    prefix differences are exact; dividing numerator by denominator with
    integer true division reproduces the correctly rounded float sum of the
    window (the same value `math.fsum` returns).
    """
    ratios = [t.as_integer_ratio() for t in terms]
    denom = 1
    for _, d in ratios:
        if d > denom:
            denom = d
    prefix = [0] * (len(terms) + 1)
    acc = 0
    for i, (num, d) in enumerate(ratios, start=1):
        acc += num * (denom // d)
        prefix[i] = acc
    return [(prefix[hi] - prefix[lo - 1], denom) for lo, hi in windows]


def modular_terms(
    family: MusielakFamily, x: SequencePrefix, target: float
) -> tuple[float, ...]:
    """Per-index deviations through the gauge family: M_j(|x_j - Z| / rho_j)."""
    uniform_identity = (
        family.kind == MusielakFamily.UNIFORM
        and family.specs[0].kind == IDENTITY
        and family.rho_values == (1.0,)
    )
    if uniform_identity:
        cap = family.specs[0].domain_cap
        out = []
        for idx, v in enumerate(x.values, start=1):
            u = abs(v - target)
            if u > cap:
                raise DomainError(f"term {idx}: argument {u} exceeds domain cap {cap}")
            out.append(u)
        return tuple(out)
    out = []
    for idx, v in enumerate(x.values, start=1):
        spec = family.spec_at(idx)
        u = abs(v - target) / family.rho_at(idx)
        if u > spec.domain_cap:
            raise DomainError(
                f"term {idx}: argument {u} exceeds domain cap {spec.domain_cap}"
            )
        out.append(_evaluator(spec)(u))
    return tuple(out)


def _at_least(value_num: int, value_den: int, threshold: float) -> bool:
    """Exact test value_num / value_den >= threshold for a float threshold."""
    tn, td = threshold.as_integer_ratio()
    return value_num * td >= tn * value_den


# ---------------------------------------------------------------------------
# queries and verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceQuery:
    """Everything a windowed tester needs, bundled for reproducible runs."""

    x: SequencePrefix
    target: float
    family: MusielakFamily
    scheme: WindowScheme
    ideal: IdealOracle | None = None
    gamma: float = 0.1
    xi: float = 0.1
    reading: str = CANONICAL

    def __post_init__(self) -> None:
        if self.gamma <= 0.0 or self.xi <= 0.0:
            raise ValidationError("gamma and xi must be positive")
        if self.reading not in (CANONICAL, LITERAL):
            raise ValidationError(f"unknown reading {self.reading!r}")

    def require_ideal(self) -> IdealOracle:
        if self.ideal is None:
            raise ConfigError("this tester needs an ideal oracle in the query")
        return self.ideal


@dataclass(frozen=True, slots=True)
class WindowStat:
    """Per-window diagnostics; unused fields stay None."""

    index: int
    lo: int
    hi: int
    width: int
    count: int | None = None
    density: float | None = None
    total: float | None = None
    mean: float | None = None


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Three-valued outcome plus the evidence that produced it."""

    state: Verdict
    witness: tuple[int, ...]
    ideal_verdict: MembershipVerdict | None = None
    windows: tuple[WindowStat, ...] = ()

    def as_dict(self) -> dict:
        return {
            "state": self.state.value,
            "witness_size": len(self.witness),
            "ideal_verdict": self.ideal_verdict.as_dict() if self.ideal_verdict else None,
        }


# ---------------------------------------------------------------------------
# testers
# ---------------------------------------------------------------------------


def natural_density_prefix(indicator: Callable[[int], bool] | Iterable[int], n: int) -> Fraction:
    """Exact prefix density |{j <= n : j in the set}| / n."""
    if n < 1:
        raise ValidationError("prefix length must be at least 1")
    member = indicator if callable(indicator) else frozenset(indicator).__contains__
    count = sum(1 for j in range(1, n + 1) if member(j))
    return Fraction(count, n)


def statistical_test(
    x: SequencePrefix, target: float, eps: float, ideal: IdealOracle
) -> ConvergenceVerdict:
    """Judge the deviation set K(eps) = {j : |x_j - Z| >= eps} by the ideal."""
    if eps <= 0.0:
        raise ValidationError("eps must be positive")
    witness = tuple(
        j for j, v in enumerate(x.values, start=1) if abs(v - target) >= eps
    )
    iv = membership(ideal.with_horizon(x.horizon), frozenset(witness))
    return ConvergenceVerdict(state=iv.state, witness=witness, ideal_verdict=iv)


def ntheta_test(
    x: SequencePrefix,
    target: float,
    theta: LacunaryTheta,
    normalization: str = BY_H,
    tol: float = 1.0e-3,
) -> ConvergenceVerdict:
    """Per-block mean deviation test for the lacunary summability space.

    Block means are |x_j - Z| averaged over each block, divided by the block
    length (canonical) or by the right boundary (the literal display kept for
    comparison). The verdict looks at the last quartile of blocks: In when
    every mean is at most tol, Out when every mean is at least 10 tol.
    """
    if normalization not in (BY_H, BY_J):
        raise ValidationError(f"unknown normalization {normalization!r}")
    if tol <= 0.0:
        raise ValidationError("tol must be positive")
    bounds = _block_bounds(theta, x.horizon)
    deviations = [abs(v - target) for v in x.values]
    sums = exact_window_sums(deviations, [(lo, hi) for _, lo, hi, _ in bounds])
    stats = []
    for (r, lo, hi, h), (num, den) in zip(bounds, sums):
        norm = h if normalization == BY_H else hi
        stats.append(WindowStat(index=r, lo=lo, hi=hi, width=h, mean=num / (den * norm)))

    quart_start = (3 * len(stats)) // 4
    tail = stats[quart_start:]
    means = [s.mean for s in tail]
    if all(m <= tol for m in means):
        state = Verdict.IN
    elif all(m >= 10.0 * tol for m in means):
        state = Verdict.OUT
    else:
        state = Verdict.INCONCLUSIVE
    witness = tuple(s.index for s in stats if s.mean >= tol)
    return ConvergenceVerdict(state=state, witness=witness, windows=tuple(stats))


def slambda_alpha_test(
    q: ConvergenceQuery,
    terms: Sequence[float] | None = None,
    collect_windows: bool = True,
) -> ConvergenceVerdict:
    """Windowed statistical convergence of order alpha, judged by an ideal.

    Canonical reading: count the indices in each window whose gauge deviation
    reaches gamma, normalize by width**alpha, and hand the witness set
    {window : density >= xi} to the ideal oracle.

    Literal reading: the collapsed form of the defining display, where a
    window enters the witness set when its *mean* gauge deviation reaches
    gamma and i / width**alpha reaches xi.
    """
    if q.reading == LITERAL:
        return _slambda_literal(q, terms, collect_windows)
    if terms is None:
        terms = modular_terms(q.family, q.x, q.target)
    bounds = window_bounds(q.scheme, q.x.horizon)
    alpha = q.scheme.alpha
    flags = [1 if t >= q.gamma else 0 for t in terms]
    prefix = prefix_counts(flags)

    exact = alpha == 1.0
    xn, xd = q.xi.as_integer_ratio()
    witness = []
    stats = []
    for index, lo, hi, width in bounds:
        c = prefix[hi] - prefix[lo - 1]
        if exact:
            member = c * xd >= xn * width
            density = c / width
        else:
            density = c / width**alpha
            member = density >= q.xi
        if member:
            witness.append(index)
        if collect_windows:
            stats.append(
                WindowStat(index=index, lo=lo, hi=hi, width=width, count=c, density=density)
            )
    iv = membership(q.require_ideal().with_horizon(len(bounds)), frozenset(witness))
    return ConvergenceVerdict(
        state=iv.state, witness=tuple(witness), ideal_verdict=iv, windows=tuple(stats)
    )


def _slambda_literal(
    q: ConvergenceQuery,
    terms: Sequence[float] | None,
    collect_windows: bool,
) -> ConvergenceVerdict:
    if terms is None:
        terms = modular_terms(q.family, q.x, q.target)
    bounds = window_bounds(q.scheme, q.x.horizon)
    alpha = q.scheme.alpha
    sums = exact_window_sums(terms, [(lo, hi) for _, lo, hi, _ in bounds])
    exact = alpha == 1.0
    xn, xd = q.xi.as_integer_ratio()
    witness = []
    stats = []
    for (index, lo, hi, width), (num, den) in zip(bounds, sums):
        mean_reaches = _at_least(num, den * width, q.gamma)
        if exact:
            ratio = index / width
            ratio_reaches = index * xd >= xn * width
        else:
            ratio = index / width**alpha
            ratio_reaches = ratio >= q.xi
        if mean_reaches and ratio_reaches:
            witness.append(index)
        if collect_windows:
            stats.append(
                WindowStat(
                    index=index, lo=lo, hi=hi, width=width,
                    mean=num / (den * width), density=ratio,
                )
            )
    iv = membership(q.require_ideal().with_horizon(len(bounds)), frozenset(witness))
    return ConvergenceVerdict(
        state=iv.state, witness=tuple(witness), ideal_verdict=iv, windows=tuple(stats)
    )


def wlambda_alpha_test(
    q: ConvergenceQuery,
    terms: Sequence[float] | None = None,
    collect_windows: bool = True,
) -> ConvergenceVerdict:
    """Windowed summability of order alpha, judged by an ideal.

    S_i is the gauge deviation summed over the window and normalized by
    width**alpha; the witness set {window : S_i >= gamma} goes to the ideal.
    """
    if terms is None:
        terms = modular_terms(q.family, q.x, q.target)
    bounds = window_bounds(q.scheme, q.x.horizon)
    alpha = q.scheme.alpha
    sums = exact_window_sums(terms, [(lo, hi) for _, lo, hi, _ in bounds])
    exact = alpha == 1.0
    witness = []
    stats = []
    for (index, lo, hi, width), (num, den) in zip(bounds, sums):
        if exact:
            total = num / (den * width)
            member = _at_least(num, den * width, q.gamma)
        else:
            total = (num / den) / width**alpha
            member = total >= q.gamma
        if member:
            witness.append(index)
        if collect_windows:
            stats.append(WindowStat(index=index, lo=lo, hi=hi, width=width, total=total))
    iv = membership(q.require_ideal().with_horizon(len(bounds)), frozenset(witness))
    return ConvergenceVerdict(
        state=iv.state, witness=tuple(witness), ideal_verdict=iv, windows=tuple(stats)
    )


def wlambda_tail_test(
    q: ConvergenceQuery,
    terms: Sequence[float] | None = None,
    collect_windows: bool = True,
) -> ConvergenceVerdict:
    """Non-ideal summability membership: plain tail evidence that S_i -> 0.

    Uses the same normalized window sums as `wlambda_alpha_test` but decides
    by the last quartile of windows, mirroring the block-mean test: In when
    every tail S_i is at most gamma, Out when every one is at least 10 gamma.
    """
    if terms is None:
        terms = modular_terms(q.family, q.x, q.target)
    bounds = window_bounds(q.scheme, q.x.horizon)
    alpha = q.scheme.alpha
    sums = exact_window_sums(terms, [(lo, hi) for _, lo, hi, _ in bounds])
    totals = []
    stats = []
    for (index, lo, hi, width), (num, den) in zip(bounds, sums):
        if alpha == 1.0:
            total = num / (den * width)
        else:
            total = (num / den) / width**alpha
        totals.append(total)
        if collect_windows:
            stats.append(WindowStat(index=index, lo=lo, hi=hi, width=width, total=total))
    quart_start = (3 * len(totals)) // 4
    tail = totals[quart_start:]
    if all(t <= q.gamma for t in tail):
        state = Verdict.IN
    elif all(t >= 10.0 * q.gamma for t in tail):
        state = Verdict.OUT
    else:
        state = Verdict.INCONCLUSIVE
    witness = tuple(
        bounds[i][0] for i in range(len(totals)) if totals[i] >= q.gamma
    )
    return ConvergenceVerdict(state=state, witness=witness, windows=tuple(stats))


# ---------------------------------------------------------------------------
# neighborhood variant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BallNeighborhood:
    """Open ball of given radius around 0 (any finite dimension; scalar here)."""

    radius: float
    dim: int = 1

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValidationError("ball radius must be positive")
        if self.dim < 1:
            raise ValidationError("dimension must be at least 1")

    def contains(self, t: float) -> bool:
        return abs(t) < self.radius


NeighborhoodSpec = Union[BallNeighborhood, Callable[[float], bool]]


def neighborhood_test(
    q: ConvergenceQuery,
    nbhd: NeighborhoodSpec,
    xi: float | None = None,
    terms: Sequence[float] | None = None,
    collect_windows: bool = True,
) -> ConvergenceVerdict:
    """Windowed escape-count test against a neighborhood of 0.

    Counts window indices whose gauge deviation falls outside the
    neighborhood; for a ball of radius gamma this coincides verdict-for-
    verdict with the canonical count test at threshold gamma.
    """
    contains = nbhd.contains if isinstance(nbhd, BallNeighborhood) else nbhd
    if not contains(0.0):
        raise ValidationError("a neighborhood of 0 must contain 0")
    if terms is None:
        terms = modular_terms(q.family, q.x, q.target)
    xi_eff = q.xi if xi is None else xi
    if xi_eff <= 0.0:
        raise ValidationError("xi must be positive")
    bounds = window_bounds(q.scheme, q.x.horizon)
    alpha = q.scheme.alpha
    flags = [0 if contains(t) else 1 for t in terms]
    prefix = prefix_counts(flags)
    exact = alpha == 1.0
    xn, xd = xi_eff.as_integer_ratio()
    witness = []
    stats = []
    for index, lo, hi, width in bounds:
        c = prefix[hi] - prefix[lo - 1]
        if exact:
            member = c * xd >= xn * width
            density = c / width
        else:
            density = c / width**alpha
            member = density >= xi_eff
        if member:
            witness.append(index)
        if collect_windows:
            stats.append(
                WindowStat(index=index, lo=lo, hi=hi, width=width, count=c, density=density)
            )
    iv = membership(q.require_ideal().with_horizon(len(bounds)), frozenset(witness))
    return ConvergenceVerdict(
        state=iv.state, witness=tuple(witness), ideal_verdict=iv, windows=tuple(stats)
    )


# ---------------------------------------------------------------------------
# particular-case reductions
# ---------------------------------------------------------------------------


def specialize(case_id: int, q: ConvergenceQuery, orlicz: OrliczSpec | None = None) -> ConvergenceQuery:
    """Apply one of the five classical reductions to a query.

    1: collapse the gauge family to a single function (default: identity);
    2: full-prefix windows (lam_i = i);
    3: order alpha = 1;
    4: geometric base-2 boundaries and alpha = 1;
    5: all of the above, reducing the tester to plain ideal-statistical
       convergence.
    """
    if case_id not in (1, 2, 3, 4, 5):
        raise ValidationError(f"case_id must be 1..5, got {case_id}")
    out = q
    if case_id == 1:
        spec = orlicz if orlicz is not None else OrliczSpec.identity()
        out = replace(out, family=MusielakFamily.uniform(spec))
    elif case_id == 2:
        out = replace(
            out,
            scheme=LambdaWindows(LambdaRule(LambdaRule.IDENTITY), out.scheme.alpha),
        )
    elif case_id == 3:
        out = replace(out, scheme=replace(out.scheme, alpha=1.0))
    elif case_id == 4:
        if isinstance(out.scheme, LacunaryBlocks):
            theta = geometric_theta_within(2, out.x.horizon)
            out = replace(out, scheme=LacunaryBlocks(theta, 1.0))
        else:
            out = replace(out, scheme=replace(out.scheme, alpha=1.0))
    else:
        out = replace(
            out,
            family=MusielakFamily.uniform(OrliczSpec.identity()),
            scheme=LambdaWindows(LambdaRule(LambdaRule.IDENTITY), 1.0),
        )
    return out
