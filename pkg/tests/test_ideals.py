"""Three-valued ideal membership and its structural evidence."""

import math

import pytest

from summakit.errors import ConfigError, ValidationError
from summakit.ideals import (
    IdealOracle,
    Verdict,
    admissibility_selfcheck,
    membership,
)

from oracles import density_zero_verdict


class TestDensityZero:
    def test_squares_in(self):
        ideal = IdealOracle.density_zero(0.01, 10_000)
        squares = frozenset(k * k for k in range(1, 101))
        v = membership(ideal, squares)
        assert v.state is Verdict.IN
        # 30 squares in (5000, 10000]: 71^2 .. 100^2
        assert v.statistic == 30 / 5000

    def test_evens_out(self):
        ideal = IdealOracle.density_zero(0.01, 10_000)
        v = membership(ideal, lambda j: j % 2 == 0)
        assert v.state is Verdict.OUT
        assert v.statistic == 0.5

    def test_inconclusive_band(self):
        ideal = IdealOracle.density_zero(0.01, 10_000)
        # tail density 0.05 sits inside the (tol, 10 tol) hysteresis band
        members = frozenset(range(5001, 5251))
        assert membership(ideal, members).state is Verdict.INCONCLUSIVE

    def test_matches_recomputed_verdict(self):
        ideal = IdealOracle.density_zero(0.02, 2_000)
        for density in (0.0, 0.01, 0.05, 0.3):
            step = int(1 / density) if density else 10**9
            members = set(range(1, 2001, step)) if density else set()
            got = membership(ideal, frozenset(members)).state.value
            assert got == density_zero_verdict(members, 2_000, 0.02)

    def test_monotone_evidence(self):
        # enlarging the set never moves the verdict from Out to In
        ideal = IdealOracle.density_zero(0.01, 1_000)
        a = frozenset(range(501, 1001, 2))
        assert membership(ideal, a).state is Verdict.OUT
        b = a | frozenset(range(502, 1001, 4))
        assert membership(ideal, b).state is Verdict.OUT


class TestFinite:
    def test_small_set_in(self):
        assert membership(IdealOracle.finite(1000), frozenset({1, 2, 3})).state is Verdict.IN

    def test_tail_heavy_out(self):
        ideal = IdealOracle.finite(1000)
        assert membership(ideal, frozenset(range(900, 1001))).state is Verdict.OUT

    def test_singletons_in_everywhere(self):
        ideal = IdealOracle.finite(200)
        for m in (1, 150, 200):
            assert membership(ideal, frozenset({m})).state is Verdict.IN


class TestSummable:
    def test_inverse_square_always_within_large_bound(self):
        ideal = IdealOracle.summable("inverse_square", 10.0, 10_000)
        v = membership(ideal, lambda j: True)
        assert v.state is Verdict.IN
        assert v.statistic < math.pi**2 / 6 + 1e-9

    def test_two_valued(self):
        ideal = IdealOracle.summable("inverse", 1.0, 1_000)
        v = membership(ideal, lambda j: True)  # harmonic partial sum > 1
        assert v.state is Verdict.OUT


class TestStructure:
    def test_horizon_guard(self):
        with pytest.raises(ConfigError):
            membership(IdealOracle.density_zero(0.01, 5), frozenset())

    def test_bad_params(self):
        with pytest.raises(ValidationError):
            IdealOracle.density_zero(0.0, 100)
        with pytest.raises(ValidationError):
            IdealOracle.summable("nope", 1.0, 100)
        with pytest.raises(ValidationError):
            IdealOracle("weird", horizon=100)

    def test_determinism(self):
        ideal = IdealOracle.density_zero(0.01, 5_000)
        members = frozenset(k * k for k in range(1, 71))
        assert membership(ideal, members) == membership(ideal, members)

    @pytest.mark.parametrize(
        "ideal",
        [
            IdealOracle.finite(2_000),
            IdealOracle.density_zero(0.01, 2_000),
            IdealOracle.summable("inverse_square", 10.0, 2_000),
        ],
        ids=["finite", "density_zero", "summable"],
    )
    def test_selfcheck_no_violations(self, ideal):
        report = admissibility_selfcheck(ideal, samples=100)
        assert report.violations == 0

    def test_selfcheck_needs_samples(self):
        with pytest.raises(ValidationError):
            admissibility_selfcheck(IdealOracle.finite(100), samples=0)

    def test_with_horizon(self):
        ideal = IdealOracle.density_zero(0.01, 100)
        assert ideal.with_horizon(500).horizon == 500
        assert ideal.with_horizon(500).tol == 0.01
