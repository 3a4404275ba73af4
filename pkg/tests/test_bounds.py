"""Interval evaluation of every sandwich bound: anchors, containment,
gap formulas, limits, and domain handling."""

from fractions import Fraction as F

import mpmath
import pytest
from mpmath import mp, mpf

from entropy_bounds import (
    DEFAULT_CONTEXT,
    DomainError,
    best_interval,
    binomial_entropy_oracle,
    entropy_binomial_bounds,
    entropy_binomial_stirling_m1,
    entropy_poisson_ct,
    entropy_poisson_large,
    entropy_poisson_small,
    expected_log_binomial,
    expected_log_binomial_bounds,
    expected_log_poisson,
    expected_log_poisson_bounds,
    poisson_coeffs,
    poisson_entropy_oracle,
    relative_entropy_bounds,
    relative_entropy_exact,
    relative_entropy_oracle,
    stirling_m1_constants,
)
from golden_data import FIGURE_GAPS


def frac_mpf(x: F) -> mpf:
    with mp.workprec(320):
        return mpf(x.numerator) / x.denominator


class TestSmallMeanPoisson:
    def test_zero_is_exact(self):
        rep = entropy_poisson_small(0, m=3)
        assert rep.lower == rep.upper == 0
        assert rep.gap == 0

    def test_contains_oracle(self):
        h1, _ = poisson_entropy_oracle(1)
        assert entropy_poisson_small(1, m=3).interval.contains(h1)

    def test_nested_family_at_half(self):
        value, _ = poisson_entropy_oracle(0.5)
        gaps = []
        for m in range(1, 7):
            rep = entropy_poisson_small(0.5, m)
            assert rep.interval.contains(value)
            gaps.append(rep.gap)
        assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))

    @pytest.mark.parametrize("lam", [0.25, 0.5, 1])
    def test_convergence_below_one(self, lam):
        gaps = [entropy_poisson_small(lam, m).gap for m in range(1, 9)]
        assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
        assert gaps[-1] < mpf("1e-8")

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_poisson_small(-0.5)


class TestLargeMeanPoisson:
    def test_order_one_gap_closed_form(self):
        rep = entropy_poisson_large(10, m=1)
        assert abs(rep.gap - frac_mpf(F(1, 10) + F(1, 600))) < mpf("1e-70")

    @pytest.mark.parametrize("m,lam", sorted(FIGURE_GAPS))
    def test_quoted_gap_values(self, m, lam):
        quoted = FIGURE_GAPS[(m, lam)]
        gap = entropy_poisson_large(lam, m).gap
        assert abs(float(gap) / quoted - 1) < 0.1

    def test_contains_oracle(self):
        value, _ = poisson_entropy_oracle(10)
        assert entropy_poisson_large(10, m=2).interval.contains(value)

    @pytest.mark.parametrize("m", [1, 3, 5])
    def test_gap_equals_gap_polynomial(self, m):
        cs = poisson_coeffs(m)
        lam = mpf(7)
        rep = entropy_poisson_large(lam, m)
        with mp.workprec(320):
            direct = sum(frac_mpf(c) / lam**k for k, c in sorted(cs.a.items()))
            assert abs(rep.gap - direct) < mpf("1e-70")

    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_gap_monotone_in_lambda(self, m):
        lams = [0.5, 1, 2, 5, 10, 50, 100]
        gaps = [entropy_poisson_large(lam, m).gap for lam in lams]
        assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_poisson_large(0, m=1)

    def test_report_consistency(self):
        rep = entropy_poisson_large(3, m=2)
        with mp.workprec(320):
            assert abs(rep.midpoint - (rep.lower + rep.upper) / 2) < mpf("1e-70")
            assert abs(rep.gap - (rep.upper - rep.lower)) < mpf("1e-70")


class TestCoverThomas:
    def test_zero_value(self):
        with mp.workprec(128):
            want = mpmath.log(2 * mpmath.pi * mpmath.e / 12) / 2
        assert abs(entropy_poisson_ct(0) - want) < mpf("1e-30")
        assert abs(entropy_poisson_ct(0) - mpf("0.1765")) < mpf("1e-3")

    @pytest.mark.parametrize("lam", [1, 10])
    def test_upper_bounds_oracle(self, lam):
        value, _ = poisson_entropy_oracle(lam)
        assert entropy_poisson_ct(lam) >= value

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_poisson_ct(-2)


class TestRelativeEntropyExact:
    def test_zero_probability(self):
        assert relative_entropy_exact(12, 0) == 0

    def test_single_trial(self):
        with mp.workprec(320):
            p = mpf(0.4)
            want = p + (1 - p) * mpmath.log(1 - p)
        assert abs(relative_entropy_exact(1, 0.4) - want) < mpf("1e-70")

    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9, 1.0])
    def test_matches_oracle(self, p):
        v = relative_entropy_exact(12, p)
        o = relative_entropy_oracle(12, p)
        assert abs(v - o) <= mpf("1e-25") * max(1, abs(o))


class TestRelativeEntropyBounds:
    def test_contains_oracle(self):
        value = relative_entropy_oracle(100, 0.2)
        assert relative_entropy_bounds(100, 0.2, m=2).interval.contains(value)

    def test_first_order_asymptote(self):
        # n (D - leading term) tends to p^2 / (12 q) at rate ~ 1/n
        with mp.workprec(320):
            p = mpf(0.3)
            q = 1 - p
            target = p**2 / (12 * q)
            leading = -(p + mpmath.log(q)) / 2
            errs = []
            for n in (10**2, 10**3, 10**4):
                d = relative_entropy_oracle(n, p)
                errs.append(abs(n * (d - leading) - target))
            assert errs[0] > errs[1] > errs[2]
            assert errs[2] < mpf("1e-5")

    @pytest.mark.parametrize("p", [0, 1])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            relative_entropy_bounds(10, p, m=1)


class TestBinomialEntropyBounds:
    def test_contains_oracle(self):
        value = binomial_entropy_oracle(50, 0.5)
        assert entropy_binomial_bounds(50, 0.5, m=2).interval.contains(value)

    def test_symmetric_in_p(self):
        # dyadic p so that q is exactly representable
        a = entropy_binomial_bounds(40, 0.25, m=2)
        b = entropy_binomial_bounds(40, 0.75, m=2)
        assert a.lower == b.lower and a.upper == b.upper

    @pytest.mark.parametrize("m", [1, 2])
    def test_poisson_limit(self, m):
        # at p = 5/n the interval approaches the large-mean interval for H(5)
        t2 = entropy_poisson_large(5, m)
        diffs = []
        for n in (10**3, 10**4):
            with mp.workprec(320):
                p = mpf(5) / n
            rep = entropy_binomial_bounds(n, p, m)
            diffs.append(max(abs(rep.lower - t2.lower), abs(rep.upper - t2.upper)))
        assert diffs[1] < diffs[0]
        assert diffs[1] < mpf("2e-3")


class TestStirlingOrderOne:
    def test_contains_oracle(self):
        value = binomial_entropy_oracle(30, 0.4)
        assert entropy_binomial_stirling_m1(30, 0.4).interval.contains(value)

    def test_matches_manual_assembly(self):
        c1, c2, c3, c4 = stirling_m1_constants()
        n = 25
        rep = entropy_binomial_stirling_m1(n, 0.4)
        with mp.workprec(320):
            p = mpf(0.4)
            u = p * (1 - p)
            base = mpmath.log(2 * mpmath.pi * n * u) / 2 + mpf(1) / 2
            lower = base + c1(u) / n + c2(u) / n**2 + c3(u) / n**3
            upper = base + c4(u) / n
            assert abs(rep.lower - lower) < mpf("1e-70")
            assert abs(rep.upper - upper) < mpf("1e-70")

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_binomial_stirling_m1(10, 1)


class TestExpectedLogPoisson:
    def test_contains_oracle(self):
        value = expected_log_poisson(5)
        assert expected_log_poisson_bounds(5, m=2).interval.contains(value)

    def test_order_one_gap_closed_form(self):
        # mu_4(10) / (3 * 10^4) = 310 / 30000
        rep = expected_log_poisson_bounds(10, m=1)
        assert abs(rep.gap - frac_mpf(F(310, 30000))) < mpf("1e-70")

    def test_gap_decays_like_inverse_square(self):
        s = mpf(1000)
        gap = expected_log_poisson_bounds(s, m=1).gap
        assert abs(gap * s**2 - 1) < mpf("0.01")

    def test_domain(self):
        with pytest.raises(DomainError):
            expected_log_poisson_bounds(0, m=1)


class TestExpectedLogBinomial:
    def test_contains_shifted_oracle(self):
        with mp.workprec(320):
            shifted = expected_log_binomial(20, 0.5) + mpmath.log(20 * mpf(0.5))
        assert expected_log_binomial_bounds(20, 0.5, m=1).interval.contains(shifted)

    def test_gap_closed_form(self):
        from entropy_bounds import binomial_central_moment

        n, m = 12, 2
        rep = expected_log_binomial_bounds(n, 0.25, m=m)
        with mp.workprec(320):
            s = mpf(0.25)
            k = 2 * m + 2
            direct = binomial_central_moment(k).poly(n, s) / ((2 * m + 1) * (n * s) ** k)
            assert abs(rep.gap - direct) < mpf("1e-70")

    def test_single_trial_degenerates(self):
        # B_0 = 0 identically, so the shifted oracle value is log 1 = 0
        with mp.workprec(320):
            shifted = expected_log_binomial(1, 0.3) + mpmath.log(mpf(0.3))
        rep = expected_log_binomial_bounds(1, 0.3, m=1)
        assert rep.interval.contains(shifted)
        assert abs(shifted) < mpf("1e-70")


class TestBestInterval:
    def test_picks_minimum_gap(self):
        reports = [entropy_poisson_large(10, m) for m in range(1, 7)]
        best = best_interval(entropy_poisson_large, 10)
        assert best.gap == min(r.gap for r in reports)

    def test_still_contains_oracle(self):
        value, _ = poisson_entropy_oracle(10)
        assert best_interval(entropy_poisson_large, 10).interval.contains(value)
