"""Scalar convex gauge functions and the sequence norms they induce.

The building block is an `OrliczSpec`: a continuous, non-decreasing, convex
function M on [0, domain_cap] with M(0) = 0 and M(u) > 0 for u > 0. Specs are
closed-form families (u^p, u^p/p, e^u - 1, u) or tabulated convex data with
linear interpolation. An indexed family of such functions together with a
positive scale sequence rho forms a `MusielakFamily`, which induces

  * a convex modular        I(x) = sum_k M_k(scale * |x_k|),
  * the gauge norm          ||x||  = inf {k > 0 : I(x / k) <= 1},
  * the dual-style norm     ||x||0 = inf_{k>0} (1 + I(k x)) / k,

computed here by bisection and golden-section search on finite prefixes.
All routines are pure and deterministic; sums use exactly rounded
accumulation (`math.fsum`) so results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import DomainError, NumericError, ValidationError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi for golden-section steps

POWER = "power"
POWER_OVER_P = "power_over_p"
EXP_MINUS_ONE = "exp_minus_one"
IDENTITY = "identity"
TABULATED = "tabulated"

_CLOSED_FORM_KINDS = (POWER, POWER_OVER_P, EXP_MINUS_ONE, IDENTITY)


def _default_cap(kind: str, p: float) -> float:
    if kind == EXP_MINUS_ONE:
        return 500.0
    if kind in (POWER, POWER_OVER_P):
        # keep u^p representable as a double
        return min(1.0e6, 10.0 ** (300.0 / max(p, 1.0)))
    return 1.0e6


@dataclass(frozen=True)
class OrliczSpec:
    """One scalar gauge function plus the largest argument it will accept."""

    kind: str
    p: float = 0.0
    grid: tuple[tuple[float, float], ...] = ()
    domain_cap: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (*_CLOSED_FORM_KINDS, TABULATED):
            raise ValidationError(f"unknown Orlicz family kind {self.kind!r}")
        if self.kind == POWER and self.p < 1.0:
            raise ValidationError("power family needs exponent p >= 1")
        if self.kind == POWER_OVER_P and self.p <= 1.0:
            raise ValidationError("power-over-p family needs exponent p > 1")
        if self.kind == TABULATED:
            if len(self.grid) < 2:
                raise ValidationError("tabulated family needs at least 2 grid points")
            us = [u for u, _ in self.grid]
            if any(b <= a for a, b in zip(us, us[1:])):
                raise ValidationError("tabulated grid arguments must be strictly increasing")
            if us[0] != 0.0:
                raise ValidationError("tabulated grid must start at u = 0")
        if self.domain_cap <= 0.0:
            raise ValidationError("domain_cap must be positive")

    # -- constructors -------------------------------------------------------

    @classmethod
    def power(cls, p: float, domain_cap: float | None = None) -> "OrliczSpec":
        """M(u) = u**p with p >= 1."""
        return cls(POWER, p=float(p), domain_cap=domain_cap or _default_cap(POWER, p))

    @classmethod
    def power_over_p(cls, p: float, domain_cap: float | None = None) -> "OrliczSpec":
        """M(u) = u**p / p with p > 1 (self-dual normalisation)."""
        return cls(POWER_OVER_P, p=float(p), domain_cap=domain_cap or _default_cap(POWER_OVER_P, p))

    @classmethod
    def exp_minus_one(cls, domain_cap: float | None = None) -> "OrliczSpec":
        """M(u) = exp(u) - 1."""
        return cls(EXP_MINUS_ONE, domain_cap=domain_cap or _default_cap(EXP_MINUS_ONE, 0.0))

    @classmethod
    def identity(cls, domain_cap: float | None = None) -> "OrliczSpec":
        """M(u) = u, the degenerate linear gauge."""
        return cls(IDENTITY, domain_cap=domain_cap or _default_cap(IDENTITY, 0.0))

    @classmethod
    def tabulated(
        cls,
        points: Iterable[tuple[float, float]],
        domain_cap: float | None = None,
    ) -> "OrliczSpec":
        """Piecewise-linear M through `points`; no extrapolation beyond them."""
        grid = tuple((float(u), float(m)) for u, m in points)
        last_u = grid[-1][0] if grid else 0.0
        cap = min(domain_cap, last_u) if domain_cap is not None else last_u
        return cls(TABULATED, grid=grid, domain_cap=cap)


def _evaluator(spec: OrliczSpec) -> Callable[[float], float]:
    """Raw evaluator without domain checks; used inside hot loops."""
    if spec.kind == IDENTITY:
        return lambda u: u
    if spec.kind == POWER:
        p = spec.p
        if p == 1.0:
            return lambda u: u
        if p == 2.0:
            return lambda u: u * u
        return lambda u: u**p
    if spec.kind == POWER_OVER_P:
        p = spec.p
        return lambda u: u**p / p
    if spec.kind == EXP_MINUS_ONE:
        return lambda u: math.expm1(u)
    us = tuple(u for u, _ in spec.grid)
    ms = tuple(m for _, m in spec.grid)

    def interp(u: float) -> float:
        i = bisect_right(us, u)
        if i == 0:
            return ms[0]
        if i == len(us):
            return ms[-1]
        u0, u1 = us[i - 1], us[i]
        m0, m1 = ms[i - 1], ms[i]
        return m0 + (m1 - m0) * (u - u0) / (u1 - u0)

    return interp


def eval_orlicz(spec: OrliczSpec, u: float) -> float:
    """Evaluate M(u) for 0 <= u <= domain_cap."""
    if u < 0.0:
        raise DomainError(f"Orlicz argument must be nonnegative, got {u}")
    if u > spec.domain_cap:
        raise DomainError(
            f"Orlicz argument {u} exceeds domain cap {spec.domain_cap} "
            f"for family {spec.kind!r}"
        )
    return _evaluator(spec)(u)


@dataclass(frozen=True)
class OrliczValidationReport:
    """Pass/fail record per structural property, checked on a uniform grid."""

    grid_size: int
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failed_checks(self) -> tuple[str, ...]:
        return tuple(name for name, ok, _ in self.checks if not ok)


_DIFF_TOL = 1.0e-12


@lru_cache(maxsize=256)
def validate_orlicz(spec: OrliczSpec, grid_size: int = 129) -> OrliczValidationReport:
    """Check zero-at-zero, positivity, monotonicity, convexity, and growth.

    Failures are reported, not raised: the report lists each property with
    a detail string locating the first offending grid point.
    """
    if grid_size < 3:
        raise ValidationError("validation grid needs at least 3 points")
    cap = spec.domain_cap
    f = _evaluator(spec)
    step = cap / (grid_size - 1)
    values = [f(i * step) for i in range(grid_size)]

    checks: list[tuple[str, bool, str]] = []

    ok = abs(values[0]) <= _DIFF_TOL
    checks.append(("zero_at_zero", ok, f"M(0) = {values[0]}"))

    bad = next((i for i in range(1, grid_size) if values[i] <= 0.0), None)
    checks.append(
        ("positive", bad is None, "all grid values positive" if bad is None else f"M({bad * step}) = {values[bad]}")
    )

    diffs = [values[i + 1] - values[i] for i in range(grid_size - 1)]
    bad = next((i for i, d in enumerate(diffs) if d < -_DIFF_TOL), None)
    checks.append(
        ("nondecreasing", bad is None, "monotone on grid" if bad is None else f"decrease at u ~ {bad * step}")
    )

    second = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    bad = next((i for i, d in enumerate(second) if d < -_DIFF_TOL), None)
    checks.append(
        ("convex", bad is None, "convex on grid" if bad is None else f"concave kink at u ~ {(bad + 1) * step}")
    )

    half = f(cap / 2.0)
    ok = values[-1] > half
    checks.append(("unbounded_trend", ok, f"M(cap) = {values[-1]}, M(cap/2) = {half}"))

    return OrliczValidationReport(grid_size=grid_size, checks=tuple(checks))


def _require_valid(spec: OrliczSpec) -> None:
    report = validate_orlicz(spec)
    if not report.passed:
        raise ValidationError(
            f"Orlicz spec {spec.kind!r} failed validation: {', '.join(report.failed_checks())}"
        )


@dataclass(frozen=True)
class ConjugateResult:
    """Value of sup_u (v u - M(u)) over [0, cap], with the located maximizer.

    `hit_cap` warns that the maximizer sits at the search boundary, where the
    untruncated supremum may be infinite (e.g. the linear gauge at v > 1).
    """

    value: float
    maximizer: float
    hit_cap: bool


def conjugate_eval(
    spec: OrliczSpec,
    v: float,
    search_cap: float = 100.0,
    tol: float = 1.0e-9,
) -> ConjugateResult:
    """Young conjugate N(v) = sup {v u - M(u) : 0 <= u <= search_cap}.

    The objective is concave, so a golden-section ascent brackets the
    maximizer to within `tol`. The search range is clipped to the spec's
    domain cap; a maximizer on the boundary is flagged, not extended.
    """
    if v < 0.0:
        raise DomainError(f"conjugate argument must be nonnegative, got {v}")
    if search_cap <= 0.0 or tol <= 0.0:
        raise ValidationError("search_cap and tol must be positive")
    _require_valid(spec)

    cap = min(search_cap, spec.domain_cap)
    f = _evaluator(spec)

    def g(u: float) -> float:
        return v * u - f(u)

    lo, hi = 0.0, cap
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    gc, gd = g(c), g(d)
    while hi - lo > tol:
        if gc >= gd:
            hi, d, gd = d, c, gc
            c = hi - _INV_PHI * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + _INV_PHI * (hi - lo)
            gd = g(d)
    u_star = 0.5 * (lo + hi)
    best = max(0.0, g(u_star), g(lo), g(hi))
    hit_cap = cap - u_star <= 10.0 * tol
    return ConjugateResult(value=best, maximizer=u_star, hit_cap=hit_cap)


@dataclass(frozen=True)
class SequencePrefix:
    """Finite truncation x_1..x_n of a real sequence."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        bad = next((i for i, v in enumerate(self.values) if not math.isfinite(v)), None)
        if bad is not None:
            raise ValidationError(f"sequence value at index {bad + 1} is not finite")

    @property
    def horizon(self) -> int:
        return len(self.values)

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "SequencePrefix":
        return cls(tuple(float(v) for v in values))

    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)

    def sup_norm(self) -> float:
        return max((abs(v) for v in self.values), default=0.0)


@dataclass(frozen=True)
class MusielakFamily:
    """Indexed family (M_j) of gauge functions plus a positive scale sequence.

    The index rule is declarative (uniform spec, cycled specs, or a power
    family with exponent drifting to a limit) so families can be pickled,
    echoed into reports, and rebuilt from configuration files. The scale
    sequence rho defaults to the constant 1.
    """

    kind: str
    specs: tuple[OrliczSpec, ...] = ()
    p_limit: float = 0.0
    p_drift: float = 0.0
    cap: float = 0.0
    rho_values: tuple[float, ...] = (1.0,)
    description: str = ""

    UNIFORM = "uniform"
    CYCLE = "cycle"
    POWER_DRIFT = "power_drift"

    def __post_init__(self) -> None:
        if self.kind in (self.UNIFORM, self.CYCLE) and not self.specs:
            raise ValidationError(f"{self.kind} family needs at least one spec")
        if self.kind == self.POWER_DRIFT and self.p_limit < 1.0:
            raise ValidationError("power_drift limit exponent must be >= 1")
        if any(r <= 0.0 for r in self.rho_values):
            raise ValidationError("scale sequence rho must be positive")

    @classmethod
    def uniform(
        cls, spec: OrliczSpec, rho: float = 1.0, description: str = ""
    ) -> "MusielakFamily":
        return cls(cls.UNIFORM, specs=(spec,), rho_values=(float(rho),), description=description)

    @classmethod
    def cycle(
        cls, specs: Sequence[OrliczSpec], rho: float = 1.0, description: str = ""
    ) -> "MusielakFamily":
        return cls(cls.CYCLE, specs=tuple(specs), rho_values=(float(rho),), description=description)

    @classmethod
    def power_drift(
        cls,
        p_limit: float,
        p_drift: float,
        cap: float | None = None,
        rho: float = 1.0,
        description: str = "",
    ) -> "MusielakFamily":
        """M_j(u) = u ** (p_limit + p_drift / j), pointwise convergent in j."""
        cap_eff = cap or _default_cap(POWER, p_limit + abs(p_drift))
        return cls(
            cls.POWER_DRIFT,
            p_limit=float(p_limit),
            p_drift=float(p_drift),
            cap=cap_eff,
            rho_values=(float(rho),),
            description=description,
        )

    def spec_at(self, j: int) -> OrliczSpec:
        if j < 1:
            raise ValidationError("family indices start at 1")
        if self.kind == self.UNIFORM:
            return self.specs[0]
        if self.kind == self.CYCLE:
            return self.specs[(j - 1) % len(self.specs)]
        return OrliczSpec.power(self.p_limit + self.p_drift / j, domain_cap=self.cap)

    def rho_at(self, j: int) -> float:
        return self.rho_values[(j - 1) % len(self.rho_values)]

    def pointwise_limit_at(self, nu: float) -> float | None:
        """lim_j M_j(nu) when the family is pointwise convergent, else None."""
        if self.kind == self.UNIFORM:
            return eval_orlicz(self.specs[0], nu)
        if self.kind == self.POWER_DRIFT:
            return nu**self.p_limit
        if len(set(self.specs)) == 1:
            return eval_orlicz(self.specs[0], nu)
        return None

    def validate_sample(self, indices: Iterable[int]) -> None:
        """Raise unless every sampled member passes spec validation."""
        for j in indices:
            if self.rho_at(j) <= 0.0:
                raise ValidationError(f"rho({j}) is not positive")
            _require_valid(self.spec_at(j))


def modular(family: MusielakFamily, x: SequencePrefix, scale: float = 1.0) -> float:
    """Convex modular of the scaled prefix: sum_k M_k(scale * |x_k|).

    Accumulation is exactly rounded, so the value is independent of term
    order. A term argument past its member's domain cap raises a DomainError
    naming the offending index.
    """
    if scale <= 0.0:
        raise ValidationError("modular scale must be positive")
    terms: list[float] = []
    for idx, value in enumerate(x.values, start=1):
        spec = family.spec_at(idx)
        u = scale * abs(value)
        if u > spec.domain_cap:
            raise DomainError(
                f"modular term {idx}: argument {u} exceeds domain cap {spec.domain_cap}"
            )
        terms.append(_evaluator(spec)(u))
    return math.fsum(terms)


@dataclass(frozen=True)
class LuxemburgResult:
    """Gauge norm value with its feasibility certificate."""

    value: float
    achieved_modular: float
    bracket_width: float


def luxemburg_norm(
    family: MusielakFamily, x: SequencePrefix, tol: float = 1.0e-9
) -> LuxemburgResult:
    """inf {k > 0 : modular(x / k) <= 1}, located by bisection.

    The map k -> modular(x / k) is non-increasing, so a doubling/halving
    bracket always exists for genuine (unbounded) gauges. The returned value
    is the feasible end of the final bracket, hence modular(x / k*) <= 1
    holds exactly; tolerance is on the argument k.
    """
    if tol <= 0.0:
        raise ValidationError("tol must be positive")
    if x.is_zero():
        return LuxemburgResult(0.0, 0.0, 0.0)

    def mod_at(k: float) -> float:
        return modular(family, x, 1.0 / k)

    k_hi = 1.0
    steps = 0
    while mod_at(k_hi) > 1.0:
        k_hi *= 2.0
        steps += 1
        if steps > 200:
            raise NumericError("no feasible scale found within 200 doublings")
    k_lo = k_hi / 2.0
    while True:
        try:
            if mod_at(k_lo) > 1.0:
                break
        except DomainError as exc:
            raise NumericError(
                f"gauge bracket ran into the domain cap near k = {k_lo}"
            ) from exc
        k_hi = k_lo
        k_lo /= 2.0
        steps += 1
        if steps > 200:
            raise NumericError("no infeasible scale found within 200 halvings")

    while k_hi - k_lo > tol:
        mid = 0.5 * (k_lo + k_hi)
        if mod_at(mid) <= 1.0:
            k_hi = mid
        else:
            k_lo = mid
    return LuxemburgResult(
        value=k_hi, achieved_modular=mod_at(k_hi), bracket_width=k_hi - k_lo
    )


@dataclass(frozen=True)
class OrliczNormResult:
    """Amemiya-form norm value with the located scale."""

    value: float
    minimizer: float
    hit_boundary: bool


def orlicz_norm(
    family: MusielakFamily, x: SequencePrefix, tol: float = 1.0e-9
) -> OrliczNormResult:
    """inf_{k>0} (1 + modular(k x)) / k via power-of-two scan plus golden section.

    The objective is quasiconvex in k. When the infimum is approached only as
    k grows (linear gauges), the minimizer is pinned at the largest admissible
    scale and flagged as a boundary solution.
    """
    if tol <= 0.0:
        raise ValidationError("tol must be positive")
    if x.is_zero():
        return OrliczNormResult(0.0, 0.0, False)

    k_max = math.inf
    for idx, value in enumerate(x.values, start=1):
        if value != 0.0:
            k_max = min(k_max, family.spec_at(idx).domain_cap / abs(value))
    k_max *= 1.0 - 1.0e-12  # keep scan arguments strictly under the cap

    def f(k: float) -> float:
        return (1.0 + modular(family, x, k)) / k

    scan: list[float] = [2.0**m for m in range(-60, 61) if 2.0**m <= k_max]
    if not scan:
        raise NumericError("admissible scale range is empty under the domain cap")
    if scan[-1] < k_max:
        scan.append(k_max)
    values = [f(k) for k in scan]
    best = min(range(len(scan)), key=lambda i: values[i])

    lo = scan[best - 1] if best > 0 else scan[0] / 2.0
    hi = scan[best + 1] if best + 1 < len(scan) else scan[best]
    hit_boundary = best + 1 == len(scan)

    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol and hi - lo > 1.0e-14 * hi:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    k_star = 0.5 * (lo + hi)
    candidates = [(f(k_star), k_star), (values[best], scan[best])]
    value, k_opt = min(candidates)
    return OrliczNormResult(value=value, minimizer=k_opt, hit_boundary=hit_boundary)
