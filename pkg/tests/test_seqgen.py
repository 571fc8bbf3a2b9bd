"""Seeded generators: sequences, supports, and certified window pairs."""

import pytest

from summakit.convergence import LambdaRule, LambdaWindows, window_bounds
from summakit.errors import GenerationError, ValidationError
from summakit.seqgen import (
    GeneratorSpec,
    LiminfPositive,
    LimRatioOne,
    ViolatingLiminf,
    gen_lambda_mu_pair,
    gen_sequence,
    verify_pair_certificate,
)


class TestSequences:
    def test_spike_on_squares(self):
        x = gen_sequence(GeneratorSpec.spike_on("squares", 10))
        assert x.values == (1, 0, 0, 1, 0, 0, 0, 0, 1, 0)

    def test_oscillating_period_two(self):
        x = gen_sequence(GeneratorSpec.oscillating(2, 4))
        assert x.values == (-1.0, 1.0, -1.0, 1.0)

    def test_oscillating_period_four(self):
        x = gen_sequence(GeneratorSpec.oscillating(4, 6))
        assert x.values == (-1.0, -1.0, 1.0, 1.0, -1.0, -1.0)

    def test_convergent_plus_noise(self):
        x = gen_sequence(GeneratorSpec.convergent(5.0, 3))
        assert x.values == (6.0, 5.5, 5.0 + 1.0 / 3.0)

    def test_custom_roundtrip(self):
        x = gen_sequence(GeneratorSpec.custom((1.5, -2.0, 0.0)))
        assert x.values == (1.5, -2.0, 0.0)

    def test_supports(self):
        cubes = gen_sequence(GeneratorSpec.spike_on("cubes", 30))
        assert [j for j, v in enumerate(cubes.values, 1) if v] == [1, 8, 27]
        pows = gen_sequence(GeneratorSpec.spike_on("powers", 20, support_param=3))
        assert [j for j, v in enumerate(pows.values, 1) if v] == [1, 3, 9]
        first = gen_sequence(GeneratorSpec.spike_on("first", 10, support_param=4))
        assert sum(first.values) == 4
        mult = gen_sequence(GeneratorSpec.spike_on("multiples", 10, support_param=3))
        assert [j for j, v in enumerate(mult.values, 1) if v] == [3, 6, 9]

    def test_seed_determinism(self):
        a = gen_sequence(GeneratorSpec.bounded_random(2.0, seed=42, horizon=500))
        b = gen_sequence(GeneratorSpec.bounded_random(2.0, seed=42, horizon=500))
        c = gen_sequence(GeneratorSpec.bounded_random(2.0, seed=43, horizon=500))
        assert a.values == b.values
        assert a.values != c.values
        assert all(abs(v) <= 2.0 for v in a.values)

    def test_guards(self):
        with pytest.raises(ValidationError):
            GeneratorSpec.oscillating(1, 10)
        with pytest.raises(ValidationError):
            GeneratorSpec("nope", horizon=10)
        with pytest.raises(ValidationError):
            GeneratorSpec("custom", horizon=3, values=(1.0,))


class TestPairs:
    def test_identity_pair_ratio_one(self):
        pair = gen_lambda_mu_pair(LiminfPositive(1.0, 1.0), 1_000, variant=1)
        cert = pair.certificate
        assert pair.lam.kind == LambdaRule.IDENTITY
        assert cert.tail_min_ratio == 1.0

    def test_half_pair_tail_ratio(self):
        pair = gen_lambda_mu_pair(LiminfPositive(1.0, 1.0), 1_000, variant=0)
        # ceil(i/2) / i stays within a hair of 1/2 on the tail
        assert 0.5 <= pair.certificate.tail_min_ratio <= 0.5 + 1e-2

    def test_ratio_one_exact(self):
        pair = gen_lambda_mu_pair(LimRatioOne(beta=1.0), 1_000, variant=0)
        assert pair.certificate.envelope_late == 0.0

    def test_ratio_one_shrinking_envelope(self):
        pair = gen_lambda_mu_pair(LimRatioOne(beta=1.0), 10_000, variant=1)
        cert = pair.certificate
        assert pair.lam.kind == LambdaRule.MINUS_ISQRT
        assert 0.0 < cert.envelope_late <= cert.envelope_early

    def test_bounded_pairs_for_alpha_below_beta(self):
        pair = gen_lambda_mu_pair(LiminfPositive(0.5, 1.0), 1_000)
        assert pair.lam.kind == LambdaRule.CONST_CAP
        assert pair.certificate.tail_min_ratio > 0.0

    def test_growth_infeasible_raises_with_attempts(self):
        with pytest.raises(GenerationError, match="attempts"):
            gen_lambda_mu_pair(LimRatioOne(beta=0.5, alpha=0.5, require_growth=True), 1_000)
        with pytest.raises(GenerationError, match="attempts"):
            gen_lambda_mu_pair(LiminfPositive(0.5, 1.0, require_growth=True), 1_000)

    def test_violating_regime_collapses(self):
        pair = gen_lambda_mu_pair(ViolatingLiminf(1.0, 1.0), 10_000)
        cert = pair.certificate
        assert cert.tail_min_ratio < cert.ratio_early_min  # still collapsing
        assert cert.tail_min_ratio < 0.02

    def test_order_guard(self):
        with pytest.raises(ValidationError):
            gen_lambda_mu_pair(LiminfPositive(1.0, 0.5), 1_000)

    def test_certificates_reverify(self):
        for regime, variant in [
            (LiminfPositive(1.0, 1.0), 0),
            (LiminfPositive(0.7, 0.7), 2),
            (LimRatioOne(beta=1.0), 1),
            (ViolatingLiminf(0.5, 1.0), 0),
        ]:
            pair = gen_lambda_mu_pair(regime, 2_000, variant)
            assert verify_pair_certificate(pair)

    def test_generated_rules_pass_window_invariants(self):
        # nondecreasing and lam_i <= i, enforced exactly while building windows
        for variant in range(4):
            pair = gen_lambda_mu_pair(LiminfPositive(1.0, 1.0), 500, variant)
            window_bounds(LambdaWindows(pair.lam, 1.0), 500)
            window_bounds(LambdaWindows(pair.mu, 1.0), 500)
