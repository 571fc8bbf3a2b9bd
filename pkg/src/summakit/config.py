"""Run configuration: compact spec strings, YAML files, and precedence.

Most objects the CLI needs are described by short colon-separated strings
(`power:2`, `density:0.01`, `lambda:half`, `spike:squares:1.5`). A YAML
config file may hold the same strings under documented keys; command-line
flags override file values, and the SUMMAKIT_SEED environment variable
overrides every other seed source. The fully merged configuration is echoed
into every report so a run can be audited and replayed.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any

import yaml

from .convergence import LacunaryBlocks, LambdaRule, LambdaWindows, WindowScheme
from .errors import ConfigError
from .ideals import IdealOracle
from .io import read_tabulated_csv, read_theta_csv
from .lacunary import geometric_theta_within, validate_theta
from .orlicz import MusielakFamily, OrliczSpec
from .seqgen import GeneratorSpec

SEED_ENV_VAR = "SUMMAKIT_SEED"


def load_config_file(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping at top level")
    return data


def merge_config(file_cfg: dict, flag_cfg: dict) -> dict:
    """Flags win over file values; the seed env var wins over both."""
    merged = dict(file_cfg)
    for k, v in flag_cfg.items():
        if v is not None:
            merged[k] = v
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            merged["seed"] = int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from exc
    return merged


def _parts(spec: Any, what: str) -> list[str]:
    if not isinstance(spec, str) or not spec:
        raise ConfigError(f"expected a spec string for {what}, got {spec!r}")
    return spec.split(":")


def family_from_spec(spec: str, rho: float = 1.0) -> MusielakFamily:
    """`identity`, `power:P`, `power_over_p:P`, `exp_minus_one`,
    `power_drift:P:DRIFT`, or `tabulated:CSVPATH`."""
    p = _parts(spec, "family")
    try:
        if p[0] == "identity":
            return MusielakFamily.uniform(OrliczSpec.identity(), rho=rho)
        if p[0] == "power":
            return MusielakFamily.uniform(OrliczSpec.power(float(p[1])), rho=rho)
        if p[0] == "power_over_p":
            return MusielakFamily.uniform(OrliczSpec.power_over_p(float(p[1])), rho=rho)
        if p[0] == "exp_minus_one":
            return MusielakFamily.uniform(OrliczSpec.exp_minus_one(), rho=rho)
        if p[0] == "power_drift":
            return MusielakFamily.power_drift(float(p[1]), float(p[2]), rho=rho)
        if p[0] == "tabulated":
            points = read_tabulated_csv(":".join(p[1:]))
            return MusielakFamily.uniform(OrliczSpec.tabulated(points), rho=rho)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad family spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown family spec {spec!r}")


def orlicz_from_spec(spec: str) -> OrliczSpec:
    fam = family_from_spec(spec)
    if fam.kind != MusielakFamily.UNIFORM:
        raise ConfigError(f"{spec!r} does not name a single gauge function")
    return fam.specs[0]


def ideal_from_spec(spec: str, horizon: int) -> IdealOracle:
    """`finite`, `density:TOL`, or `summable:WEIGHTRULE:BOUND`."""
    p = _parts(spec, "ideal")
    try:
        if p[0] == "finite":
            return IdealOracle.finite(horizon)
        if p[0] == "density":
            return IdealOracle.density_zero(float(p[1]), horizon)
        if p[0] == "summable":
            return IdealOracle.summable(p[1], float(p[2]), horizon)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad ideal spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown ideal spec {spec!r}")


_LAMBDA_NAMES = {
    "identity": LambdaRule(LambdaRule.IDENTITY),
    "half": LambdaRule(LambdaRule.CEIL_RATIO, num=1, den=2),
    "minus_sqrt": LambdaRule(LambdaRule.MINUS_ISQRT),
    "sqrt": LambdaRule(LambdaRule.ISQRT),
}


def lambda_rule_from_spec(spec: str) -> LambdaRule:
    p = _parts(spec, "window rule")
    if p[0] in _LAMBDA_NAMES:
        return _LAMBDA_NAMES[p[0]]
    try:
        if p[0] == "ratio":
            return LambdaRule(LambdaRule.CEIL_RATIO, num=int(p[1]), den=int(p[2]))
        if p[0] == "const":
            return LambdaRule(LambdaRule.CONST_CAP, cap=int(p[1]))
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad window rule {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown window rule {spec!r}")


def scheme_from_spec(spec: str, alpha: float, horizon: int) -> WindowScheme:
    """`lambda:RULE` or `blocks:geometric:BASE` or `blocks:csv:PATH`."""
    p = _parts(spec, "scheme")
    try:
        if p[0] == "lambda":
            return LambdaWindows(lambda_rule_from_spec(":".join(p[1:])), alpha)
        if p[0] == "blocks":
            if p[1] == "geometric":
                theta = geometric_theta_within(int(p[2]), horizon)
            elif p[1] == "csv":
                theta = validate_theta(read_theta_csv(":".join(p[2:])))
            else:
                raise ConfigError(f"unknown blocks source {p[1]!r}")
            return LacunaryBlocks(theta, alpha)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad scheme spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown scheme spec {spec!r}")


def generator_from_spec(spec: str, horizon: int, seed: int) -> GeneratorSpec:
    """`spike:SUPPORT[:PARAM][:SPIKE[:BASE]]`, `oscillating:PERIOD[:AMP]`,
    `convergent:LIMIT[:SCALE[:EXP]]`, or `random:BOUND`."""
    p = _parts(spec, "generator")
    try:
        if p[0] == "spike":
            support = p[1]
            if support in ("powers", "multiples", "first"):
                param = int(p[2])
                rest = p[3:]
            else:
                param = 2
                rest = p[2:]
            spike = float(rest[0]) if rest else 1.0
            base = float(rest[1]) if len(rest) > 1 else 0.0
            return GeneratorSpec.spike_on(
                support, horizon, support_param=param, spike_value=spike, base_value=base
            )
        if p[0] == "oscillating":
            amp = float(p[2]) if len(p) > 2 else 1.0
            return GeneratorSpec.oscillating(int(p[1]), horizon, amplitude=amp)
        if p[0] == "convergent":
            scale = float(p[2]) if len(p) > 2 else 1.0
            exp = float(p[3]) if len(p) > 3 else 1.0
            return GeneratorSpec.convergent(
                float(p[1]), horizon, noise_scale=scale, noise_exponent=exp
            )
        if p[0] == "random":
            return GeneratorSpec.bounded_random(float(p[1]), seed, horizon)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad generator spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown generator spec {spec!r}")
