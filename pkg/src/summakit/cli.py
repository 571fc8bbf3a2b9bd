"""Command-line front end.

Subcommands: norm, conjugate, density, converge, verify, gen. Each reads an
optional YAML config file plus flag overrides (flags win; SUMMAKIT_SEED wins
for the seed), runs the requested computation, and emits a JSON report that
echoes the full effective configuration and the toolkit version.

Exit codes: 0 success / no confident counterexample, 1 counterexample found
or numeric failure, 2 invalid input or configuration.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import REPORT_SCHEMA_VERSION, __version__
from .config import (
    family_from_spec,
    generator_from_spec,
    ideal_from_spec,
    lambda_rule_from_spec,
    load_config_file,
    merge_config,
    orlicz_from_spec,
    scheme_from_spec,
)
from .convergence import (
    BallNeighborhood,
    CANONICAL,
    ConvergenceQuery,
    neighborhood_test,
    ntheta_test,
    slambda_alpha_test,
    statistical_test,
    wlambda_alpha_test,
)
from .errors import (
    ConfigError,
    DomainError,
    GenerationError,
    NumericError,
    SummakitError,
    ValidationError,
)
from .io import (
    dumps_report,
    read_sequence_csv,
    write_report,
    write_sequence_csv,
    write_theta_csv,
    write_windows_csv,
)
from .lab import converse_probe, default_case, verify_theorem
from .lacunary import factorial_gap_theta, geometric_theta
from .orlicz import (
    SequencePrefix,
    conjugate_eval,
    luxemburg_norm,
    modular,
    orlicz_norm,
)
from .seqgen import gen_lambda_mu_pair, gen_sequence, LiminfPositive, LimRatioOne, ViolatingLiminf

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2


def _report(command: str, config: dict, result: dict) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "toolkit_version": __version__,
        "command": command,
        "config": config,
        "result": result,
    }


def _emit(report: dict, out: str | None) -> None:
    text = dumps_report(report)
    if out:
        write_report(out, report)
    sys.stdout.write(text)


def _load_sequence(cfg: dict) -> SequencePrefix:
    if cfg.get("seq_csv"):
        return read_sequence_csv(cfg["seq_csv"])
    if cfg.get("values"):
        try:
            vals = tuple(float(v) for v in str(cfg["values"]).split(","))
        except ValueError as exc:
            raise ConfigError(f"bad --values list: {exc}") from exc
        return SequencePrefix(vals)
    if cfg.get("gen"):
        horizon = int(cfg.get("horizon", 10_000))
        seed = int(cfg.get("seed", 0))
        return gen_sequence(generator_from_spec(cfg["gen"], horizon, seed))
    raise ConfigError("no sequence given: use --values, --seq-csv, or --gen")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_norm(cfg: dict, out: str | None) -> int:
    family = family_from_spec(cfg.get("family", "identity"), rho=float(cfg.get("rho", 1.0)))
    x = _load_sequence(cfg)
    tol = float(cfg.get("tol", 1.0e-9))
    mod = modular(family, x, 1.0)
    lux = luxemburg_norm(family, x, tol)
    orl = orlicz_norm(family, x, tol)
    result = {
        "horizon": x.horizon,
        "modular": mod,
        "luxemburg": {
            "value": lux.value,
            "achieved_modular": lux.achieved_modular,
            "bracket_width": lux.bracket_width,
        },
        "orlicz": {
            "value": orl.value,
            "minimizer": orl.minimizer,
            "hit_boundary": orl.hit_boundary,
        },
    }
    _emit(_report("norm", cfg, result), out)
    return EXIT_OK


def cmd_conjugate(cfg: dict, out: str | None) -> int:
    spec = orlicz_from_spec(cfg.get("family", "identity"))
    v = float(cfg.get("v", 1.0))
    res = conjugate_eval(
        spec,
        v,
        search_cap=float(cfg.get("search_cap", 100.0)),
        tol=float(cfg.get("tol", 1.0e-9)),
    )
    result = {"v": v, "value": res.value, "maximizer": res.maximizer, "hit_cap": res.hit_cap}
    _emit(_report("conjugate", cfg, result), out)
    return EXIT_OK


_NAMED_SETS = {
    "squares": lambda j: __import__("math").isqrt(j) ** 2 == j,
    "evens": lambda j: j % 2 == 0,
    "odds": lambda j: j % 2 == 1,
}


def cmd_density(cfg: dict, out: str | None) -> int:
    n = int(cfg.get("n", 10_000))
    name = cfg.get("set", "squares")
    if name in _NAMED_SETS:
        member = _NAMED_SETS[name]
    elif str(name).startswith("multiples:"):
        m = int(str(name).split(":")[1])
        member = lambda j: j % m == 0  # noqa: E731
    else:
        raise ConfigError(f"unknown set spec {name!r}; use squares|evens|odds|multiples:M")
    count = sum(1 for j in range(1, n + 1) if member(j))
    frac = Fraction(count, n)
    result = {
        "n": n,
        "count": count,
        "density": f"{frac.numerator}/{frac.denominator}",
        "density_float": count / n,
    }
    _emit(_report("density", cfg, result), out)
    return EXIT_OK


def cmd_converge(cfg: dict, out: str | None) -> int:
    horizon = int(cfg.get("horizon", 10_000))
    x = _load_sequence(cfg)
    if x.horizon != horizon:
        horizon = x.horizon
    target = float(cfg.get("target", 0.0))
    tester = cfg.get("tester", "slambda")
    family = family_from_spec(cfg.get("family", "identity"), rho=float(cfg.get("rho", 1.0)))
    ideal = ideal_from_spec(cfg.get("ideal", "density:0.01"), horizon)
    alpha = float(cfg.get("alpha", 1.0))

    if tester == "statistical":
        verdict = statistical_test(x, target, float(cfg.get("eps", 0.1)), ideal)
    elif tester == "ntheta":
        scheme = scheme_from_spec(cfg.get("scheme", "blocks:geometric:2"), alpha, horizon)
        if not hasattr(scheme, "theta"):
            raise ConfigError("the ntheta tester needs a blocks scheme")
        verdict = ntheta_test(
            x,
            target,
            scheme.theta,
            normalization="by_j" if cfg.get("normalization") == "by_j" else "by_h",
            tol=float(cfg.get("tol", 1.0e-3)),
        )
    else:
        scheme = scheme_from_spec(cfg.get("scheme", "lambda:identity"), alpha, horizon)
        q = ConvergenceQuery(
            x=x,
            target=target,
            family=family,
            scheme=scheme,
            ideal=ideal,
            gamma=float(cfg.get("gamma", 0.1)),
            xi=float(cfg.get("xi", 0.1)),
            reading=cfg.get("reading", CANONICAL),
        )
        if tester == "slambda":
            verdict = slambda_alpha_test(q)
        elif tester == "wlambda":
            verdict = wlambda_alpha_test(q)
        elif tester == "neighborhood":
            verdict = neighborhood_test(q, BallNeighborhood(float(cfg.get("eps", q.gamma))))
        else:
            raise ConfigError(f"unknown tester {tester!r}")

    dump = cfg.get("dump_windows")
    if dump:
        rows = [
            {
                "index": w.index,
                "lo": w.lo,
                "hi": w.hi,
                "width": w.width,
                "count": w.count,
                "density": w.density,
                "total": w.total,
                "mean": w.mean,
            }
            for w in verdict.windows
        ]
        write_windows_csv(dump, rows)

    result = verdict.as_dict()
    result["horizon"] = horizon
    result["tester"] = tester
    _emit(_report("converge", cfg, result), out)
    return EXIT_OK


def cmd_verify(cfg: dict, out: str | None) -> int:
    theorem = cfg.get("theorem", "T1")
    overrides = {}
    for key in ("horizon", "instances", "seed", "variant"):
        if key in cfg:
            overrides[key] = int(cfg[key])
    for key in ("alpha", "beta", "gamma", "xi"):
        if key in cfg:
            overrides[key] = float(cfg[key])
    case = default_case(theorem, **overrides)
    jobs = int(cfg.get("jobs", 1))
    swap = bool(cfg.get("negative_control", False))
    if cfg.get("converse", False):
        report = converse_probe(case, jobs=jobs)
    else:
        report = verify_theorem(case, swap=swap, jobs=jobs)
    payload = report.as_dict()
    if not cfg.get("full_instances", False):
        # keep stdout reports compact; full per-instance records via --out
        payload["instances"] = payload["instances"][:10]
        payload["instances_truncated"] = report.totals["total"] > 10
    _emit(_report("verify", cfg, payload), out)
    for line in report.summary_lines():
        sys.stderr.write(line + "\n")
    return EXIT_FAILURE if report.counterexamples > 0 else EXIT_OK


def cmd_gen(cfg: dict, out: str | None) -> int:
    what = cfg.get("what", "sequence")
    horizon = int(cfg.get("horizon", 10_000))
    seed = int(cfg.get("seed", 0))
    if what == "sequence":
        spec = generator_from_spec(cfg.get("gen", "spike:squares"), horizon, seed)
        x = gen_sequence(spec)
        if out:
            write_sequence_csv(out, x)
        result = {"kind": "sequence", "spec": spec.as_dict(), "horizon": x.horizon}
        if not out:
            result["values_head"] = list(x.values[:20])
    elif what == "theta":
        rule = cfg.get("theta", "geometric:2:13")
        parts = str(rule).split(":")
        if parts[0] == "geometric":
            theta = geometric_theta(int(parts[1]), int(parts[2]))
        elif parts[0] == "factorial":
            theta = factorial_gap_theta(int(parts[1]))
        else:
            raise ConfigError(f"unknown theta rule {rule!r}")
        if out:
            write_theta_csv(out, theta.boundaries)
        result = {"kind": "theta", "boundaries": list(theta.boundaries)}
    elif what == "pair":
        regime_spec = cfg.get("regime", "liminf")
        alpha = float(cfg.get("alpha", 1.0))
        beta = float(cfg.get("beta", 1.0))
        if regime_spec == "liminf":
            regime = LiminfPositive(alpha, beta)
        elif regime_spec == "ratio_one":
            regime = LimRatioOne(beta=beta, alpha=alpha)
        elif regime_spec == "violating":
            regime = ViolatingLiminf(alpha, beta)
        else:
            raise ConfigError(f"unknown regime {regime_spec!r}")
        pair = gen_lambda_mu_pair(regime, horizon, int(cfg.get("variant", 0)))
        result = {
            "kind": "pair",
            "lam": pair.lam.as_dict(),
            "mu": pair.mu.as_dict(),
            "certificate": pair.certificate.as_dict(),
        }
        if out:
            lines = ["i,lam,mu"] + [
                f"{i},{pair.lam.evaluate(i)},{pair.mu.evaluate(i)}"
                for i in range(1, horizon + 1)
            ]
            from .io import atomic_write_text

            atomic_write_text(out, "\n".join(lines) + "\n")
    else:
        raise ConfigError(f"unknown gen target {what!r}")
    _emit(_report("gen", cfg, result), None if what != "pair" else None)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="summakit",
        description="Horizon-bounded summability experiments over real sequences.",
    )
    parser.add_argument("--version", action="version", version=f"summakit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="YAML config file; flags override its values")
        p.add_argument("--out", help="write the JSON report to this path (atomic)")
        p.add_argument("--seed", type=int)
        p.add_argument("--horizon", type=int)

    p = sub.add_parser("norm", help="modular, gauge norm, and Amemiya norm of a prefix")
    add_common(p)
    p.add_argument("--family", help="gauge family, e.g. power:2")
    p.add_argument("--rho", type=float)
    p.add_argument("--values", help="comma-separated prefix values")
    p.add_argument("--seq-csv", dest="seq_csv", help="index,value CSV input")
    p.add_argument("--gen", help="generator spec, e.g. spike:squares")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("conjugate", help="Young conjugate of a gauge at a point")
    add_common(p)
    p.add_argument("--family")
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--search-cap", dest="search_cap", type=float)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("density", help="exact prefix density of a named index set")
    add_common(p)
    p.add_argument("--set")
    p.add_argument("--n", type=int)

    p = sub.add_parser("converge", help="run one convergence tester on a sequence")
    add_common(p)
    p.add_argument("--tester", choices=["statistical", "ntheta", "slambda", "wlambda", "neighborhood"])
    p.add_argument("--reading", choices=["canonical", "literal"])
    p.add_argument("--family")
    p.add_argument("--rho", type=float)
    p.add_argument("--values")
    p.add_argument("--seq-csv", dest="seq_csv")
    p.add_argument("--gen")
    p.add_argument("--target", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--scheme", help="lambda:RULE or blocks:geometric:BASE")
    p.add_argument("--ideal", help="density:TOL | finite | summable:RULE:BOUND")
    p.add_argument("--normalization", choices=["by_h", "by_j"])
    p.add_argument("--dump-windows", dest="dump_windows", help="CSV path for per-window stats")

    p = sub.add_parser("verify", help="falsification suite for one inclusion law")
    add_common(p)
    p.add_argument("--theorem", required=True, help="T1,T2,T3a,T3b,T4,T5,T6,T7,C1")
    p.add_argument("--instances", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--variant", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--negative-control", dest="negative_control", action="store_const", const=True)
    p.add_argument("--converse", action="store_const", const=True)
    p.add_argument("--full-instances", dest="full_instances", action="store_const", const=True)

    p = sub.add_parser("gen", help="export deterministic corpora to CSV")
    add_common(p)
    p.add_argument("--what", choices=["sequence", "theta", "pair"])
    p.add_argument("--gen")
    p.add_argument("--theta", help="geometric:BASE:COUNT or factorial:COUNT")
    p.add_argument("--regime", choices=["liminf", "ratio_one", "violating"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--variant", type=int)

    return parser


_COMMANDS = {
    "norm": cmd_norm,
    "conjugate": cmd_conjugate,
    "density": cmd_density,
    "converge": cmd_converge,
    "verify": cmd_verify,
    "gen": cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    flag_cfg = {
        k: v for k, v in vars(args).items() if k not in ("command", "config", "out")
    }
    try:
        file_cfg = load_config_file(args.config)
        cfg = merge_config(file_cfg, flag_cfg)
        return _COMMANDS[args.command](cfg, args.out)
    except (ValidationError, ConfigError, GenerationError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except NumericError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_FAILURE
    except SummakitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
