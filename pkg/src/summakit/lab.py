"""Empirical verification of the windowed inclusion laws.

Each supported law states that membership in one windowed convergence or
summability class implies membership in another, under hypotheses on the
window pair (lam, mu), the orders (alpha, beta), boundedness, or the gauge
family. The lab turns a law into a falsification experiment:

  1. resolve and certify every hypothesis (pair regime certificate,
     refinement relation, pointwise family limit) before anything runs;
  2. generate a deterministic pool of instances from seeded archetypes;
  3. evaluate the antecedent-class tester and the consequent-class tester
     on every instance;
  4. classify: consistent (In -> In), counterexample (In but Out),
     strictness witness (Out yet In), vacuous (antecedent Out), or
     inconclusive (any undecided verdict).

A counterexample is only reported when *both* verdicts are confident; the
three-valued verdicts and their hysteresis band exist precisely so horizon
truncation cannot manufacture refutations. A clean report therefore claims
"0 confident counterexamples in N certified instances", never a proof.

Swapped runs (`swap=True`) deliberately test the reversed inclusion as a
negative control: the crafted early-block archetype concentrates its bad set
where wide windows see it and narrow ones do not, so a reversed claim is
confidently refuted while the forward run classifies the same instance as
vacuous or strict.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

from . import rng
from .convergence import (
    BallNeighborhood,
    ConvergenceQuery,
    ConvergenceVerdict,
    LambdaRule,
    LambdaWindows,
    modular_terms,
    neighborhood_test,
    slambda_alpha_test,
    wlambda_alpha_test,
    wlambda_tail_test,
)
from .errors import ConfigError, ValidationError
from .ideals import IdealOracle, Verdict
from .lacunary import LacunaryTheta, geometric_theta_within, is_refinement, refine
from .orlicz import MusielakFamily, OrliczSpec
from .seqgen import (
    GeneratorSpec,
    LambdaMuPair,
    LiminfPositive,
    LimRatioOne,
    gen_lambda_mu_pair,
    gen_sequence,
    verify_pair_certificate,
)

THEOREMS = ("T1", "T2", "T3a", "T3b", "T4", "T5", "T6", "T7", "C1")

_LIMINF_LAWS = ("T1", "T3a", "T4", "T6", "C1")
_RATIO_ONE_LAWS = ("T2", "T3b", "T5", "T7")
_BOUNDED_LAWS = ("T3b", "T5")
_REFINED_LAWS = ("T5", "C1")

CONSISTENT = "consistent"
COUNTEREXAMPLE = "counterexample"
STRICTNESS = "strictness_witness"
VACUOUS = "vacuous"
INCONCLUSIVE = "inconclusive"

DEFAULT_POOL = (
    "constant",
    "convergent_noise",
    "spike_squares",
    "spike_cubes",
    "spike_powers",
    "spike_finite",
    "quiet_noise",
    "oscillating",
    "loud_noise",
    "early_block",
)


@dataclass(frozen=True)
class TheoremCase:
    """One law plus everything needed to run a certified suite against it."""

    theorem: str
    horizon: int = 10_000
    instances: int = 200
    seed: int = 2026
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.05
    xi: float = 0.05
    variant: int = 0
    ideal: IdealOracle | None = None
    family: MusielakFamily | None = None
    bound_cap: float = 16.0
    theta_base: int = 2
    pool: tuple[str, ...] = DEFAULT_POOL

    def __post_init__(self) -> None:
        if self.theorem not in THEOREMS:
            raise ValidationError(f"unknown theorem id {self.theorem!r}")
        if not 0.0 < self.alpha <= self.beta <= 1.0:
            raise ValidationError("orders must satisfy 0 < alpha <= beta <= 1")
        if self.instances < 1 or self.horizon < 100:
            raise ValidationError("need instances >= 1 and horizon >= 100")

    def resolved_ideal(self) -> IdealOracle:
        return self.ideal or IdealOracle.density_zero(0.01, self.horizon)

    def resolved_family(self) -> MusielakFamily:
        if self.family is not None:
            return self.family
        if self.theorem == "C1":
            return MusielakFamily.power_drift(2.0, 1.0)
        return MusielakFamily.uniform(OrliczSpec.identity())

    def as_dict(self) -> dict:
        fam = self.resolved_family()
        return {
            "theorem": self.theorem,
            "horizon": self.horizon,
            "instances": self.instances,
            "seed": self.seed,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "xi": self.xi,
            "variant": self.variant,
            "ideal": self.resolved_ideal().as_dict(),
            "family": {"kind": fam.kind, "description": fam.description},
            "bound_cap": self.bound_cap,
            "theta_base": self.theta_base,
            "pool": list(self.pool),
        }


def default_case(theorem: str, **overrides) -> TheoremCase:
    """The stock suite for each law: orders, pair variant, and thresholds."""
    presets = {
        "T1": dict(alpha=1.0, beta=1.0, variant=0),
        "T2": dict(alpha=0.8, beta=1.0, variant=1),
        "T3a": dict(alpha=1.0, beta=1.0, variant=0),
        "T3b": dict(alpha=1.0, beta=1.0, variant=1),
        "T4": dict(alpha=1.0, beta=1.0, variant=0),
        "T5": dict(alpha=1.0, beta=1.0, variant=0),
        "T6": dict(alpha=0.7, beta=0.7, variant=0),
        "T7": dict(alpha=0.7, beta=1.0, variant=0),
        "C1": dict(alpha=1.0, beta=1.0, variant=0),
    }
    if theorem not in presets:
        raise ValidationError(f"unknown theorem id {theorem!r}")
    params = dict(presets[theorem])
    params.update(overrides)
    return TheoremCase(theorem=theorem, **params)


@dataclass(frozen=True)
class ResolvedCase:
    """A case with hypotheses materialised and certified."""

    case: TheoremCase
    pair: LambdaMuPair
    theta: LacunaryTheta
    theta_refined: LacunaryTheta | None
    certificates: dict


def resolve_case(case: TheoremCase) -> ResolvedCase:
    """Build and re-check every hypothesis certificate; abort on failure."""
    if case.theorem in _LIMINF_LAWS:
        regime = LiminfPositive(case.alpha, case.beta)
    else:
        regime = LimRatioOne(beta=case.beta, alpha=case.alpha)
    pair = gen_lambda_mu_pair(regime, case.horizon, case.variant)
    if not verify_pair_certificate(pair):
        raise ConfigError(
            f"pair certificate failed re-verification: {pair.certificate.as_dict()}"
        )

    theta = geometric_theta_within(case.theta_base, case.horizon)
    theta_refined = None
    certificates = {
        "pair": pair.certificate.as_dict(),
        "lam_rule": pair.lam.as_dict(),
        "mu_rule": pair.mu.as_dict(),
    }
    if case.theorem in _REFINED_LAWS:
        # one midpoint per block (blocks of length >= 2 split exactly once)
        insertions = [
            (lo + hi) // 2
            for lo, hi in zip(theta.boundaries, theta.boundaries[1:])
            if hi - lo >= 2
        ]
        theta_refined = refine(theta, insertions)
        if not is_refinement(theta_refined, theta):
            raise ConfigError("refinement certificate failed: boundary set not a superset")
        certificates["theta"] = list(theta.boundaries)
        certificates["theta_refined"] = list(theta_refined.boundaries)
        certificates["refinement"] = True
    if case.theorem == "C1":
        family = case.resolved_family()
        nu = 1.0
        limit = family.pointwise_limit_at(nu)
        if limit is None or limit <= 0.0:
            raise ConfigError(
                f"family limit certificate failed: lim M_j({nu}) = {limit!r} is not positive"
            )
        certificates["family_limit"] = {"nu": nu, "limit": limit}
    if case.theorem in _BOUNDED_LAWS:
        certificates["bound_cap"] = case.bound_cap
    return ResolvedCase(
        case=case,
        pair=pair,
        theta=theta,
        theta_refined=theta_refined,
        certificates=certificates,
    )


# ---------------------------------------------------------------------------
# instance pool
# ---------------------------------------------------------------------------


def _instance_spec(case: TheoremCase, idx: int) -> tuple[str, GeneratorSpec, float]:
    """Archetype name, generator spec, and target for instance `idx`.

    Spike amplitudes are capped so the normalized-sum witness set of a sparse
    spike settles before the tail window starts: for square spikes that set
    is {i <= (s / gamma)^2}, so s stays under gamma * sqrt(horizon / 2).
    Without the cap a finite witness set can flood a short horizon and fake
    a refutation.
    """
    name = case.pool[idx % len(case.pool)]
    seed = case.seed * 1_000_003 + idx
    h = case.horizon
    g = case.gamma
    spike_hi = min(2.0, 0.9 * g * math.sqrt(h / 2.0))
    spike_lo = min(0.5, spike_hi / 2.0)
    if name == "constant":
        z = rng.uniform(seed, 1, -2.0, 2.0)
        return name, GeneratorSpec.custom((z,) * h), z
    if name == "convergent_noise":
        z = rng.uniform(seed, 1, -2.0, 2.0)
        scale = rng.uniform(seed, 2, 0.25, 0.75)
        return name, GeneratorSpec.convergent(z, h, noise_scale=scale), z
    if name == "spike_squares":
        s = rng.uniform(seed, 1, spike_lo, spike_hi)
        return name, GeneratorSpec.spike_on("squares", h, spike_value=s), 0.0
    if name == "spike_cubes":
        s = rng.uniform(seed, 1, spike_lo, spike_hi)
        return name, GeneratorSpec.spike_on("cubes", h, spike_value=s), 0.0
    if name == "spike_powers":
        s = rng.uniform(seed, 1, spike_lo, spike_hi)
        base = rng.randint(seed, 2, 2, 3)
        return name, GeneratorSpec.spike_on("powers", h, support_param=base, spike_value=s), 0.0
    if name == "spike_finite":
        m = rng.randint(seed, 1, 5, 12)
        s = rng.uniform(seed, 2, 0.5, 1.5)
        return name, GeneratorSpec.spike_on("first", h, support_param=m, spike_value=s), 0.0
    if name == "quiet_noise":
        return name, GeneratorSpec.bounded_random(0.5 * g, seed, h), 0.0
    if name == "oscillating":
        period = 2 * rng.randint(seed, 1, 1, 4)
        amp = rng.uniform(seed, 2, 0.5, 2.0)
        return name, GeneratorSpec.oscillating(period, h, amplitude=amp), 0.0
    if name == "loud_noise":
        return name, GeneratorSpec.bounded_random(8.0 * g, seed, h), 0.0
    if name == "early_block":
        m = h // 4
        return name, GeneratorSpec.spike_on("first", h, support_param=m, spike_value=1.0), 0.0
    raise ValidationError(f"unknown archetype {name!r}")


# ---------------------------------------------------------------------------
# tester wiring
# ---------------------------------------------------------------------------

Tester = Callable[[ConvergenceQuery, tuple[float, ...]], ConvergenceVerdict]


def _run_slambda(q: ConvergenceQuery, terms) -> ConvergenceVerdict:
    return slambda_alpha_test(q, terms=terms, collect_windows=False)


def _run_wlambda(q: ConvergenceQuery, terms) -> ConvergenceVerdict:
    return wlambda_alpha_test(q, terms=terms, collect_windows=False)


def _run_wtail(q: ConvergenceQuery, terms) -> ConvergenceVerdict:
    return wlambda_tail_test(q, terms=terms, collect_windows=False)


def _run_neighborhood(q: ConvergenceQuery, terms) -> ConvergenceVerdict:
    return neighborhood_test(
        q, BallNeighborhood(q.gamma), terms=terms, collect_windows=False
    )


_SIDE_TABLE: dict[str, tuple[tuple[Tester, str], tuple[Tester, str]]] = {
    # (antecedent tester, windows) -> (consequent tester, windows);
    # "mu" carries order beta, "lam" carries order alpha
    "T1": ((_run_slambda, "mu"), (_run_slambda, "lam")),
    "T2": ((_run_slambda, "lam"), (_run_slambda, "mu")),
    "T3a": ((_run_wtail, "mu"), (_run_wtail, "lam")),
    "T3b": ((_run_wtail, "lam"), (_run_wtail, "mu")),
    "T4": ((_run_wlambda, "mu"), (_run_slambda, "lam")),
    "T5": ((_run_slambda, "lam"), (_run_wlambda, "mu")),
    "T6": ((_run_neighborhood, "mu"), (_run_neighborhood, "lam")),
    "T7": ((_run_neighborhood, "lam"), (_run_neighborhood, "mu")),
    "C1": ((_run_wlambda, "mu"), (_run_slambda, "lam")),
}


def _scheme_for(resolved: ResolvedCase, side: str) -> LambdaWindows:
    case = resolved.case
    if side == "lam":
        return LambdaWindows(resolved.pair.lam, case.alpha)
    return LambdaWindows(resolved.pair.mu, case.beta)


@dataclass(frozen=True)
class InstanceRecord:
    instance_id: int
    archetype: str
    generator: dict
    target: float
    sup_deviation: float
    antecedent: dict
    consequent: dict
    classification: str

    def as_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "archetype": self.archetype,
            "generator": self.generator,
            "target": self.target,
            "sup_deviation": self.sup_deviation,
            "antecedent": self.antecedent,
            "consequent": self.consequent,
            "classification": self.classification,
        }


def _classify(a: Verdict, c: Verdict) -> str:
    if a is Verdict.IN and c is Verdict.IN:
        return CONSISTENT
    if a is Verdict.IN and c is Verdict.OUT:
        return COUNTEREXAMPLE
    if a is Verdict.OUT and c is Verdict.IN:
        return STRICTNESS
    if a is Verdict.OUT and c is Verdict.OUT:
        return VACUOUS
    return INCONCLUSIVE


def _verdict_summary(v: ConvergenceVerdict) -> dict:
    d = {"state": v.state.value, "witness_size": len(v.witness)}
    if v.ideal_verdict is not None:
        d["statistic"] = v.ideal_verdict.statistic
        d["threshold"] = v.ideal_verdict.threshold_used
    return d


def evaluate_instance(resolved: ResolvedCase, idx: int, swap: bool = False) -> InstanceRecord:
    """Run both testers on instance `idx` and classify the outcome."""
    case = resolved.case
    name, spec, target = _instance_spec(case, idx)
    x = gen_sequence(spec)
    family = case.resolved_family()
    sup_dev = max(abs(v - target) for v in x.values)
    if case.theorem in _BOUNDED_LAWS and sup_dev > case.bound_cap:
        raise ConfigError(
            f"instance {idx} breaks the boundedness certificate: "
            f"sup |x - Z| = {sup_dev} > {case.bound_cap}"
        )
    terms = modular_terms(family, x, target)
    (a_tester, a_side), (c_tester, c_side) = _SIDE_TABLE[case.theorem]
    if swap:
        (a_tester, a_side), (c_tester, c_side) = (c_tester, c_side), (a_tester, a_side)
    ideal = case.resolved_ideal()

    def run(tester: Tester, side: str) -> ConvergenceVerdict:
        q = ConvergenceQuery(
            x=x,
            target=target,
            family=family,
            scheme=_scheme_for(resolved, side),
            ideal=ideal,
            gamma=case.gamma,
            xi=case.xi,
        )
        return tester(q, terms)

    a = run(a_tester, a_side)
    c = run(c_tester, c_side)
    return InstanceRecord(
        instance_id=idx,
        archetype=name,
        generator=spec.as_dict(),
        target=target,
        sup_deviation=sup_dev,
        antecedent=_verdict_summary(a),
        consequent=_verdict_summary(c),
        classification=_classify(a.state, c.state),
    )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabReport:
    theorem: str
    mode: str
    swapped: bool
    config: dict
    certificates: dict
    records: tuple[InstanceRecord, ...]
    totals: dict = field(default_factory=dict)

    @property
    def counterexamples(self) -> int:
        return self.totals.get(COUNTEREXAMPLE, 0)

    @property
    def strictness_witnesses(self) -> int:
        return self.totals.get(STRICTNESS, 0)

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "mode": self.mode,
            "swapped": self.swapped,
            "config": self.config,
            "certificates": self.certificates,
            "totals": self.totals,
            "instances": [r.as_dict() for r in self.records],
        }

    def summary_lines(self) -> list[str]:
        head = f"{self.theorem} ({self.mode}{', swapped' if self.swapped else ''}): "
        head += ", ".join(f"{k}={v}" for k, v in sorted(self.totals.items()))
        return [head]


def _worker(args: tuple[ResolvedCase, int, bool]) -> InstanceRecord:
    resolved, idx, swap = args
    return evaluate_instance(resolved, idx, swap)


def _run_all(resolved: ResolvedCase, swap: bool, jobs: int) -> tuple[InstanceRecord, ...]:
    case = resolved.case
    indices = range(case.instances)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(
                ex.map(_worker, [(resolved, i, swap) for i in indices], chunksize=8)
            )
    else:
        records = [evaluate_instance(resolved, i, swap) for i in indices]
    records.sort(key=lambda r: r.instance_id)
    return tuple(records)


def _totals(records: tuple[InstanceRecord, ...]) -> dict:
    out = {CONSISTENT: 0, COUNTEREXAMPLE: 0, STRICTNESS: 0, VACUOUS: 0, INCONCLUSIVE: 0}
    for r in records:
        out[r.classification] += 1
    out["total"] = len(records)
    return out


def verify_theorem(case: TheoremCase, swap: bool = False, jobs: int = 1) -> LabReport:
    """Run the falsification suite for one law.

    The report never claims a proof; a clean run means zero confident
    counterexamples among the certified instances at this horizon.
    """
    resolved = resolve_case(case)
    records = _run_all(resolved, swap, jobs)
    return LabReport(
        theorem=case.theorem,
        mode="verify",
        swapped=swap,
        config=case.as_dict(),
        certificates=resolved.certificates,
        records=records,
        totals=_totals(records),
    )


def converse_probe(case: TheoremCase, jobs: int = 1) -> LabReport:
    """Search the same pool for strictness witnesses of the converse.

    A witness (consequent In, antecedent Out) is informative: it shows the
    inclusion is not an equality on this pool. Witnesses are not failures.
    """
    resolved = resolve_case(case)
    records = _run_all(resolved, swap=False, jobs=jobs)
    return LabReport(
        theorem=case.theorem,
        mode="converse",
        swapped=False,
        config=case.as_dict(),
        certificates=resolved.certificates,
        records=records,
        totals=_totals(records),
    )
