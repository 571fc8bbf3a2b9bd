"""Gauge functions, conjugates, and the two induced norms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summakit.errors import DomainError, NumericError, ValidationError
from summakit.orlicz import (
    MusielakFamily,
    OrliczSpec,
    SequencePrefix,
    conjugate_eval,
    eval_orlicz,
    luxemburg_norm,
    modular,
    orlicz_norm,
    validate_orlicz,
)

from oracles import (
    grid_conjugate_max,
    grid_luxemburg,
    grid_orlicz_norm,
    power_conjugate,
)

BUILTINS = [
    OrliczSpec.identity(),
    OrliczSpec.power(1.5),
    OrliczSpec.power(2),
    OrliczSpec.power_over_p(2),
    OrliczSpec.power_over_p(3),
    OrliczSpec.exp_minus_one(),
]


class TestEval:
    def test_identity(self):
        assert eval_orlicz(OrliczSpec.identity(), 3.5) == 3.5

    def test_power_two(self):
        assert eval_orlicz(OrliczSpec.power(2), 3.0) == 9.0

    def test_exp_minus_one(self):
        assert eval_orlicz(OrliczSpec.exp_minus_one(), 1.0) == pytest.approx(
            math.exp(1.0) - 1.0, rel=1e-15
        )

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            eval_orlicz(OrliczSpec.power(2), -0.1)
        with pytest.raises(DomainError):
            eval_orlicz(OrliczSpec.tabulated([(0, 0), (1, 1)]), 2.0)

    def test_tabulated_interpolation(self):
        spec = OrliczSpec.tabulated([(0, 0), (1, 1), (2, 4)])
        assert eval_orlicz(spec, 0.5) == 0.5
        assert eval_orlicz(spec, 1.5) == 2.5


class TestValidation:
    @pytest.mark.parametrize("spec", BUILTINS, ids=lambda s: s.kind + str(s.p))
    def test_builtins_pass(self, spec):
        assert validate_orlicz(spec).passed

    def test_decreasing_tabulated_fails(self):
        report = validate_orlicz(OrliczSpec.tabulated([(0, 0), (1, 2), (2, 1)]))
        assert not report.passed
        assert "nondecreasing" in report.failed_checks()
        assert "convex" in report.failed_checks()

    def test_grid_too_small(self):
        with pytest.raises(ValidationError):
            validate_orlicz(OrliczSpec.power(2), grid_size=2)

    def test_constructor_guards(self):
        with pytest.raises(ValidationError):
            OrliczSpec.power(0.5)
        with pytest.raises(ValidationError):
            OrliczSpec.power_over_p(1.0)
        with pytest.raises(ValidationError):
            OrliczSpec.tabulated([(1, 1), (2, 2)])  # must start at u = 0


class TestConjugate:
    def test_identity_small_v(self):
        res = conjugate_eval(OrliczSpec.identity(), 0.5, 100.0, 1e-9)
        assert res.value == 0.0
        assert not res.hit_cap

    def test_identity_large_v_hits_cap(self):
        res = conjugate_eval(OrliczSpec.identity(), 2.0, 100.0, 1e-9)
        assert res.hit_cap
        assert res.value == pytest.approx(100.0, rel=1e-6)

    def test_power_over_p_two(self):
        oracle = grid_conjugate_max(lambda u: u**2 / 2.0, 1.0, 100.0)
        res = conjugate_eval(OrliczSpec.power_over_p(2), 1.0, 100.0, 1e-9)
        assert res.value == pytest.approx(oracle, abs=1e-7)
        assert res.value == pytest.approx(0.5, abs=1e-9)

    def test_power_over_p_three(self):
        oracle = grid_conjugate_max(lambda u: u**3 / 3.0, 2.0, 100.0)
        res = conjugate_eval(OrliczSpec.power_over_p(3), 2.0, 100.0, 1e-9)
        assert res.value == pytest.approx(oracle, abs=1e-6)
        assert res.value == pytest.approx(2.0**1.5 * (2.0 / 3.0), rel=1e-9)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_matches_analytic_conjugate(self, p):
        for v in np.linspace(0.1, 10.0, 25):
            res = conjugate_eval(OrliczSpec.power_over_p(p), float(v), 100.0, 1e-9)
            assert res.value == pytest.approx(power_conjugate(p, float(v)), rel=1e-6)

    def test_invalid_spec_rejected(self):
        bad = OrliczSpec.tabulated([(0, 0), (1, 2), (2, 1)])
        with pytest.raises(ValidationError):
            conjugate_eval(bad, 1.0)

    @pytest.mark.parametrize("spec", BUILTINS, ids=lambda s: s.kind + str(s.p))
    def test_youngs_inequality(self, spec):
        # truncated conjugate still dominates v*u - M(u) for u inside the cap
        us = np.linspace(0.0, 10.0, 21)
        vs = np.linspace(0.0, 10.0, 21)
        for v in vs:
            n_v = conjugate_eval(spec, float(v), search_cap=50.0, tol=1e-9).value
            for u in us:
                slack = eval_orlicz(spec, float(u)) + n_v - u * v
                assert slack >= -1e-8


class TestModular:
    def test_identity_sum(self):
        fam = MusielakFamily.uniform(OrliczSpec.identity())
        assert modular(fam, SequencePrefix((1.0, 2.0, 3.0)), 1.0) == 6.0

    def test_power_two(self):
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        x = SequencePrefix((3.0, 4.0))
        assert modular(fam, x, 1.0) == 25.0
        assert modular(fam, x, 0.5) == 6.25

    def test_domain_error_names_index(self):
        fam = MusielakFamily.uniform(OrliczSpec.tabulated([(0, 0), (1, 1)]))
        with pytest.raises(DomainError, match="term 2"):
            modular(fam, SequencePrefix((0.5, 3.0)), 1.0)

    def test_convexity_on_random_pairs(self):
        rng = np.random.default_rng(7)
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        for _ in range(50):
            x = rng.uniform(-3, 3, size=8)
            y = rng.uniform(-3, 3, size=8)
            mid = modular(fam, SequencePrefix(tuple((x + y) / 2)), 1.0)
            avg = (
                modular(fam, SequencePrefix(tuple(x)), 1.0)
                + modular(fam, SequencePrefix(tuple(y)), 1.0)
            ) / 2
            assert mid <= avg + 1e-10


class TestLuxemburg:
    def test_power_two_closed_form(self):
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        res = luxemburg_norm(fam, SequencePrefix((3.0, 4.0, 0.0)), 1e-9)
        assert res.value == pytest.approx(5.0, abs=1e-8)
        assert res.achieved_modular <= 1.0 + 1e-8

    def test_identity_unit(self):
        fam = MusielakFamily.uniform(OrliczSpec.identity())
        res = luxemburg_norm(fam, SequencePrefix((1.0, 0.0, 0.0)), 1e-9)
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_zero_prefix(self):
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        assert luxemburg_norm(fam, SequencePrefix((0.0, 0.0)), 1e-9).value == 0.0

    @pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
    def test_absolute_homogeneity(self, c):
        fam = MusielakFamily.uniform(OrliczSpec.power_over_p(3))
        rng = np.random.default_rng(11)
        for _ in range(20):
            vals = tuple(rng.uniform(-2, 2, size=6))
            base = luxemburg_norm(fam, SequencePrefix(vals), 1e-12).value
            scaled = luxemburg_norm(
                fam, SequencePrefix(tuple(c * v for v in vals)), 1e-12
            ).value
            assert scaled == pytest.approx(c * base, rel=1e-8)

    @given(
        st.lists(
            st.floats(-10, 10, allow_nan=False).map(
                lambda v: 0.0 if abs(v) < 1e-6 else v
            ),
            min_size=1,
            max_size=12,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_feasibility_certificate(self, vals):
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        x = SequencePrefix(tuple(vals))
        res = luxemburg_norm(fam, x, 1e-9)
        if x.is_zero():
            assert res.value == 0.0
        else:
            assert modular(fam, x, 1.0 / res.value) <= 1.0 + 1e-8


class TestOrliczNorm:
    def test_power_two_analytic(self):
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        res = orlicz_norm(fam, SequencePrefix((3.0, 4.0)), 1e-9)
        # (1/k)(1 + 25 k^2) minimized at k = 1/5
        assert res.value == pytest.approx(10.0, rel=1e-9)
        assert res.minimizer == pytest.approx(0.2, rel=1e-6)

    def test_identity_boundary(self):
        fam = MusielakFamily.uniform(OrliczSpec.identity())
        res = orlicz_norm(fam, SequencePrefix((1.0, 0.0)), 1e-9)
        assert res.hit_boundary
        assert res.value == pytest.approx(1.0, abs=1e-5)

    def test_zero_prefix(self):
        fam = MusielakFamily.uniform(OrliczSpec.identity())
        assert orlicz_norm(fam, SequencePrefix((0.0,)), 1e-9).value == 0.0

    def test_sandwich_on_random_prefixes(self):
        rng = np.random.default_rng(3)
        fams = [
            MusielakFamily.uniform(OrliczSpec.power(2)),
            MusielakFamily.uniform(OrliczSpec.power_over_p(3)),
            MusielakFamily.uniform(OrliczSpec.exp_minus_one()),
        ]
        for trial in range(60):
            fam = fams[trial % len(fams)]
            vals = tuple(rng.uniform(-2, 2, size=rng.integers(1, 10)))
            if not any(vals):
                continue
            lux = luxemburg_norm(fam, SequencePrefix(vals), 1e-10).value
            orl = orlicz_norm(fam, SequencePrefix(vals), 1e-10).value
            assert lux <= orl + 1e-9
            assert orl <= 2.0 * lux + 1e-6


class TestGridEquivalence:
    def test_both_norms_match_dense_grid(self):
        rng = np.random.default_rng(17)
        specs = [OrliczSpec.power(2), OrliczSpec.power_over_p(3), OrliczSpec.exp_minus_one()]
        for trial in range(100):
            spec = specs[trial % len(specs)]
            fam = MusielakFamily.uniform(spec)
            vals = tuple(rng.uniform(-2, 2, size=rng.integers(1, 21)))
            if not any(vals):
                continue
            x = SequencePrefix(vals)

            def mod_at(scale: float) -> float:
                return modular(fam, x, scale)

            lux = luxemburg_norm(fam, x, 1e-9).value
            assert lux == pytest.approx(grid_luxemburg(mod_at), abs=1e-4)

            k_max = spec.domain_cap / max(abs(v) for v in vals) * (1 - 1e-12)
            orl = orlicz_norm(fam, x, 1e-9).value
            assert orl == pytest.approx(
                grid_orlicz_norm(mod_at, min(k_max, 1e6), points=20_000), abs=1e-4
            )


class TestMusielakFamily:
    def test_cycle_and_rho(self):
        fam = MusielakFamily.cycle((OrliczSpec.identity(), OrliczSpec.power(2)), rho=2.0)
        assert fam.spec_at(1).kind == "identity"
        assert fam.spec_at(2).kind == "power"
        assert fam.spec_at(3).kind == "identity"
        assert fam.rho_at(5) == 2.0

    def test_power_drift_limit(self):
        fam = MusielakFamily.power_drift(2.0, 1.0)
        assert fam.spec_at(1).p == 3.0
        assert fam.spec_at(100).p == pytest.approx(2.01)
        assert fam.pointwise_limit_at(1.5) == pytest.approx(2.25)

    def test_validate_sample(self):
        fam = MusielakFamily.uniform(OrliczSpec.power(2))
        fam.validate_sample(range(1, 20))
        with pytest.raises(ValidationError):
            MusielakFamily.uniform(OrliczSpec.identity(), rho=-1.0)

    def test_nonuniform_limit_is_none(self):
        fam = MusielakFamily.cycle((OrliczSpec.identity(), OrliczSpec.power(2)))
        assert fam.pointwise_limit_at(1.0) is None


def test_bracket_failure_raises_numeric_error():
    # a bounded gauge below 1 makes every scale feasible; the bracket search
    # must fail loudly instead of returning a fake norm
    spec = OrliczSpec.tabulated([(0.0, 0.0), (1.0, 0.001), (2.0, 0.01)])
    fam = MusielakFamily.uniform(spec)
    with pytest.raises(NumericError):
        luxemburg_norm(fam, SequencePrefix((0.5,)), 1e-9)
