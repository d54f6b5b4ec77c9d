"""Unit tests of the closed forms against independent references.

Expected constants were frozen from 40-digit evaluations of the defining
expressions (and, for the pmfs, from the direct conditional series), so a
regression in any closed form shows up against a value it did not produce.
"""

import math

import pytest
from scipy.special import eval_laguerre

from hspstats import (
    NO_FILTER,
    Pmf,
    FilterBranch,
    FilterSpec,
    NoHeraldError,
    PairStatistics,
    PerfectHeraldError,
    SeriesOverflowError,
    SourceParams,
    UndefinedMomentError,
    ValidationError,
    XiKind,
    asymptotic_tail_check,
    binomial_loss,
    conditional_pmf_series,
    effective_dark_count,
    exp_partial_sum,
    g2_from_pmf,
    herald_click_probability,
    herald_filter_convolution_oracle,
    herald_gain_ratio,
    herald_prob,
    input_pmf,
    laguerre,
    moments_closed_form,
    moments_from_pmf,
    signal_pmf,
    unconditioned_pmf,
    xi,
    xi_kind_for,
    xi_limit,
)

REF = SourceParams(0.01, 0.5, 0.5, 1e-4)
POISSON = PairStatistics.POISSON
THERMAL = PairStatistics.THERMAL


def max_term_dev(a, b):
    return max(abs(a.prob(i) - b.prob(i)) for i in range(max(len(a), len(b))))


class TestBinomialLoss:
    def test_symmetric(self):
        assert binomial_loss(2, 1, 0.5) == 0.5

    def test_lossless(self):
        assert binomial_loss(5, 5, 1.0) == 1.0

    def test_direct_expansion(self):
        assert binomial_loss(3, 1, 0.2) == pytest.approx(0.384, abs=1e-15)

    def test_rows_sum_to_one(self):
        for N in (0, 1, 5, 40):
            total = math.fsum(binomial_loss(N, n, 0.37) for n in range(N + 1))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValidationError):
            binomial_loss(2, 3, 0.5)


class TestHeraldProb:
    def test_vacuum_only_dark_counts(self):
        assert herald_prob(0, SourceParams(0.0, 0.5, 0.5, 1e-4)) == 1e-4

    def test_single_photon(self):
        assert herald_prob(1, SourceParams(0.01, 0.5, 0.5, 0.0)) == pytest.approx(0.5)

    def test_two_photons_with_darks(self):
        assert herald_prob(2, REF) == pytest.approx(0.750025, abs=1e-15)

    def test_monotone(self):
        p = SourceParams(0.3, 0.21, 0.9, 3e-3)
        values = [herald_prob(N, p) for N in range(60)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_perfect_detector(self):
        assert herald_prob(3, SourceParams(0.1, 1.0, 0.5, 0.0)) == 1.0


class TestInputPmf:
    def test_vacuum(self):
        assert input_pmf(POISSON, 0.0, 0) == 1.0
        assert input_pmf(POISSON, 0.0, 3) == 0.0

    def test_thermal_mu_one(self):
        assert input_pmf(THERMAL, 1.0, 1) == 0.25

    def test_poisson_value(self):
        assert input_pmf(POISSON, 0.01, 2) == pytest.approx(4.9502491687458403e-05, rel=1e-14)

    def test_both_normalize(self):
        for stat in (POISSON, THERMAL):
            total = math.fsum(input_pmf(stat, 0.8, N) for N in range(400))
            assert total == pytest.approx(1.0, abs=1e-12)


class TestLaguerre:
    def test_first_two_orders(self):
        for x in (-3.0, 0.0, 1.7):
            assert laguerre(0, x) == 1.0
            assert laguerre(1, x) == 1.0 - x

    def test_at_zero(self):
        assert all(laguerre(n, 0.0) == 1.0 for n in range(51))

    def test_sum_formula_value(self):
        # direct expansion 1 + 6 + 3*4/2 + 8/6 = 43/3
        assert laguerre(3, -2.0) == pytest.approx(43.0 / 3.0, rel=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 17, 40])
    @pytest.mark.parametrize("x", [-11.0, -2.0, -1e-3, 0.5, 4.0, 30.0])
    def test_against_scipy(self, n, x):
        assert laguerre(n, x) == pytest.approx(float(eval_laguerre(n, x)), rel=1e-10)

    def test_order_cap(self):
        with pytest.raises(SeriesOverflowError):
            laguerre(501, -1.0)

    def test_overflow_carries_order(self):
        with pytest.raises(SeriesOverflowError) as info:
            laguerre(500, -1e12)
        assert 0 < info.value.order <= 500


class TestExpPartialSum:
    def test_small_orders(self):
        assert exp_partial_sum(0, 3.0) == 1.0
        assert exp_partial_sum(2, 3.0) == 1.0 + 3.0 + 4.5

    def test_converges_to_exp(self):
        assert exp_partial_sum(60, 5.0) == pytest.approx(math.exp(5.0), rel=1e-14)

    def test_rejects_negative_argument(self):
        with pytest.raises(ValidationError):
            exp_partial_sum(3, -1.0)


class TestXi:
    def test_poisson_values_reference(self):
        assert xi(XiKind.POISSON_UNFILTERED, 0, REF) == pytest.approx(
            0.51044164672069037, rel=1e-13)
        assert xi(XiKind.POISSON_UNFILTERED, 1, REF) == pytest.approx(
            98.544552886558932, rel=1e-13)

    def test_perfect_source_single_photon_factors(self):
        # eta_s = eta_h = 1, d_h = 0: xi_p(1) = e^mu/(e^mu - 1),
        # xi_t(1) = (1 + mu)/mu
        for mu in (0.001, 0.01, 0.1, 1.0):
            p = SourceParams(mu, 1.0, 1.0, 0.0)
            assert xi(XiKind.POISSON_UNFILTERED, 1, p) == pytest.approx(
                math.exp(mu) / math.expm1(mu), rel=1e-13)
            assert xi(XiKind.THERMAL_UNFILTERED, 1, p) == pytest.approx(
                (1.0 + mu) / mu, rel=1e-13)

    def test_vacuum_elimination_is_exact(self):
        p = SourceParams(0.37, 1.0, 1.0, 0.0)
        assert xi(XiKind.POISSON_UNFILTERED, 0, p) == 0.0
        assert xi(XiKind.THERMAL_UNFILTERED, 0, p) == 0.0

    def test_filtered_kinds_require_matching_branch(self):
        with pytest.raises(ValidationError):
            xi(XiKind.SIGNAL_FILTERED, 0, REF, NO_FILTER)
        with pytest.raises(ValidationError):
            xi(XiKind.POISSON_UNFILTERED, 0, REF, FilterSpec(FilterBranch.HERALD, 0.5))

    def test_reduction_to_thermal_at_full_fraction(self):
        sig = FilterSpec(FilterBranch.SIGNAL, 1.0)
        her = FilterSpec(FilterBranch.HERALD, 1.0)
        for n in range(51):
            ref = xi(XiKind.THERMAL_UNFILTERED, n, REF)
            assert xi(XiKind.SIGNAL_FILTERED, n, REF, sig) == pytest.approx(ref, rel=1e-12)
            assert xi(XiKind.HERALD_FILTERED, n, REF, her) == pytest.approx(ref, rel=1e-12)

    def test_herald_filtered_survives_perfect_heralding_branch(self):
        # (1-eta_h)^n multiplies a divergent factor at eta_h = 1; the
        # absorbed evaluation must stay finite and match the oracle
        p = SourceParams(0.2, 1.0, 0.6, 1e-3)
        filt = FilterSpec(FilterBranch.HERALD, 0.5)
        closed = signal_pmf(POISSON, p, filt)
        oracle = herald_filter_convolution_oracle(p, 0.5)
        assert max_term_dev(closed, oracle) < 1e-12

    def test_no_herald_error(self):
        with pytest.raises(NoHeraldError):
            xi(XiKind.POISSON_UNFILTERED, 0, SourceParams(0.0, 0.5, 0.5, 0.0))


class TestXiLimit:
    def test_certain_dark_counts(self):
        assert xi_limit(XiKind.POISSON_UNFILTERED, SourceParams(0.01, 0.5, 0.5, 1.0)) == 1.0

    def test_thermal_value_reference(self):
        assert xi_limit(XiKind.THERMAL_UNFILTERED, REF) == pytest.approx(
            197.05882352941176, rel=1e-13)

    def test_bounds_xi_over_range(self):
        lim_p = xi_limit(XiKind.POISSON_UNFILTERED, REF)
        lim_t = xi_limit(XiKind.THERMAL_UNFILTERED, REF)
        for n in range(201):
            assert xi(XiKind.POISSON_UNFILTERED, n, REF) <= lim_p * (1 + 1e-12)
            assert xi(XiKind.THERMAL_UNFILTERED, n, REF) <= lim_t * (1 + 1e-12)

    def test_no_herald(self):
        with pytest.raises(NoHeraldError):
            xi_limit(XiKind.POISSON_UNFILTERED, SourceParams(0.0, 0.5, 0.5, 0.0))

    def test_filtered_kind_rejected(self):
        with pytest.raises(ValidationError):
            xi_limit(XiKind.HERALD_FILTERED, REF)


class TestHeraldGainRatio:
    def test_small_mu_limit(self):
        p = SourceParams(1e-12, 0.5, 0.5, 1e-4)
        expected = 1.0 - 0.5 + 0.5 / 1e-4
        assert herald_gain_ratio(POISSON, p) == pytest.approx(expected, rel=1e-6)
        assert herald_gain_ratio(THERMAL, p) == pytest.approx(expected, rel=1e-6)

    def test_statistics_agree_at_tiny_mu(self):
        p = SourceParams(1e-9, 0.7, 0.4, 2e-4)
        rp = herald_gain_ratio(POISSON, p)
        rt = herald_gain_ratio(THERMAL, p)
        assert rp == pytest.approx(rt, rel=1e-6)

    def test_uninformative_herald(self):
        p = SourceParams(0.05, 0.0, 0.5, 1e-3)
        assert herald_gain_ratio(POISSON, p) == pytest.approx(1.0, rel=1e-12)

    def test_perfect_herald_reported_distinctly(self):
        with pytest.raises(PerfectHeraldError):
            herald_gain_ratio(POISSON, SourceParams(0.01, 1.0, 1.0, 0.0))


class TestConditionalSeries:
    def test_matches_frozen_value(self):
        pmf = conditional_pmf_series(POISSON, REF)
        assert pmf.prob(1) == pytest.approx(0.49026529939294700, rel=1e-12)

    def test_matches_closed_form_everywhere(self):
        for stat in (POISSON, THERMAL):
            series = conditional_pmf_series(stat, REF)
            closed = signal_pmf(stat, REF)
            assert max_term_dev(series, closed) < 1e-12

    def test_certain_dark_count_leaves_statistics_unchanged(self):
        p = SourceParams(0.3, 0.5, 0.7, 1.0)
        pmf = conditional_pmf_series(POISSON, p)
        a = p.mu * p.eta_s
        for n in range(len(pmf)):
            assert pmf.prob(n) == pytest.approx(math.exp(-a) * a**n / math.factorial(n),
                                                abs=1e-12)

    def test_perfect_source_eliminates_vacuum(self):
        pmf = conditional_pmf_series(POISSON, SourceParams(0.01, 1.0, 1.0, 0.0))
        assert pmf.prob(0) == 0.0

    def test_no_herald(self):
        with pytest.raises(NoHeraldError):
            conditional_pmf_series(POISSON, SourceParams(0.0, 0.5, 0.5, 0.0))

    def test_respects_tolerance_contract(self):
        pmf = conditional_pmf_series(THERMAL, SourceParams(0.9, 0.3, 0.8, 1e-3), tol=1e-9)
        assert pmf.tail_bound <= 1e-9
        assert math.fsum(pmf.probs) >= 1.0 - pmf.tail_bound


class TestSignalPmf:
    def test_perfect_source_poisson(self):
        for mu in (0.001, 0.01, 0.1, 1.0):
            pmf = signal_pmf(POISSON, SourceParams(mu, 1.0, 1.0, 0.0))
            assert pmf.prob(0) == 0.0
            assert abs(pmf.prob(1) - mu / math.expm1(mu)) < 1e-12

    def test_perfect_source_thermal(self):
        for mu in (0.001, 0.01, 0.1, 1.0):
            pmf = signal_pmf(THERMAL, SourceParams(mu, 1.0, 1.0, 0.0))
            assert abs(pmf.prob(1) - 1.0 / (1.0 + mu)) < 1e-12

    def test_thermal_filter_rejected(self):
        with pytest.raises(ValidationError):
            signal_pmf(THERMAL, REF, FilterSpec(FilterBranch.SIGNAL, 0.5))

    def test_tail_bound_honored(self):
        for tol in (1e-6, 1e-9, 1e-12):
            pmf = signal_pmf(POISSON, REF, NO_FILTER, tol)
            assert pmf.tail_bound <= tol
            assert math.fsum(pmf.probs) >= 1.0 - tol

    def test_herald_filtered_matches_oracle_at_deep_filter(self):
        filt = FilterSpec(FilterBranch.HERALD, 0.1)
        closed = signal_pmf(POISSON, REF, filt)
        oracle = herald_filter_convolution_oracle(REF, 0.1)
        assert max_term_dev(closed, oracle) < 1e-10

    def test_vacuum_input(self):
        pmf = signal_pmf(POISSON, SourceParams(0.0, 0.5, 0.5, 1e-4))
        assert pmf.prob(0) == pytest.approx(1.0, abs=1e-14)


class TestConvolutionOracle:
    def test_full_fraction_equals_thermal(self):
        oracle = herald_filter_convolution_oracle(REF, 1.0)
        thermal = signal_pmf(THERMAL, REF)
        assert max_term_dev(oracle, thermal) < 1e-12

    def test_vacuum_with_darks(self):
        oracle = herald_filter_convolution_oracle(SourceParams(0.0, 0.5, 0.5, 1e-3), 0.5)
        assert oracle.prob(0) == pytest.approx(1.0, abs=1e-13)

    def test_no_herald(self):
        with pytest.raises(NoHeraldError):
            herald_filter_convolution_oracle(SourceParams(0.0, 0.5, 0.5, 0.0), 0.5)


class TestEffectiveDarkCount:
    def test_dominates_bare_rate(self):
        assert effective_dark_count(REF, 0.1) > REF.d_h

    def test_equality_at_full_fraction(self):
        assert effective_dark_count(REF, 1.0) == REF.d_h

    def test_equality_without_heralding(self):
        p = SourceParams(0.0, 0.5, 0.5, 1e-4)
        assert effective_dark_count(p, 0.3) == p.d_h

    def test_closed_expression(self):
        p = SourceParams(0.2, 0.7, 0.5, 1e-3)
        expected = 1.0 - (1.0 - p.d_h) * math.exp(-p.mu * p.eta_h * (1.0 - 0.25))
        assert effective_dark_count(p, 0.25) == pytest.approx(expected, rel=1e-14)


class TestHeraldClickProbability:
    def test_reference_rate(self):
        assert herald_click_probability(POISSON, REF) == pytest.approx(
            5.0870220552369549e-3, rel=1e-13)

    def test_matches_series_denominator(self):
        for stat in (POISSON, THERMAL):
            p = SourceParams(0.3, 0.4, 0.8, 2e-3)
            direct = math.fsum(
                input_pmf(stat, p.mu, N) * herald_prob(N, p) for N in range(300)
            )
            assert herald_click_probability(stat, p) == pytest.approx(direct, rel=1e-12)


class TestMoments:
    def test_certain_dark_counts_keep_poisson(self):
        p = SourceParams(0.3, 0.5, 0.6, 1.0)
        m = moments_closed_form(p)
        a = p.mu * p.eta_s
        assert m.mean == pytest.approx(a, rel=1e-13)
        assert m.variance == pytest.approx(a, rel=1e-13)
        assert m.fano == pytest.approx(1.0, rel=1e-13)
        assert m.g2 == pytest.approx(1.0, rel=1e-10)

    def test_fano_at_optimal_pump(self):
        m = moments_closed_form(SourceParams(0.016, 0.5, 0.5, 1e-4))
        assert m.fano == pytest.approx(0.51210642253485686, rel=1e-13)

    def test_consistent_with_pmf_moments(self):
        closed = moments_closed_form(REF)
        direct = moments_from_pmf(signal_pmf(POISSON, REF, NO_FILTER, 1e-13))
        assert closed.mean == pytest.approx(direct.mean, rel=1e-9)
        assert closed.variance == pytest.approx(direct.variance, rel=1e-9)

    def test_no_herald(self):
        with pytest.raises(NoHeraldError):
            moments_closed_form(SourceParams(0.0, 0.5, 0.5, 0.0))

    def test_zero_mean_leaves_ratios_undefined(self):
        m = moments_closed_form(SourceParams(0.0, 0.5, 0.5, 1e-4))
        assert m.mean == 0.0
        assert m.fano is None and m.g2 is None


class TestG2:
    def test_poisson_is_one(self):
        a = 0.7
        probs = [math.exp(-a) * a**n / math.factorial(n) for n in range(60)]
        pmf = Pmf(tuple(probs), 1e-12)
        assert g2_from_pmf(pmf) == pytest.approx(1.0, abs=1e-10)

    def test_thermal_is_two(self):
        a = 0.4
        probs = [(a / (1 + a)) ** n / (1 + a) for n in range(120)]
        pmf = Pmf(tuple(probs), 1e-12)
        assert g2_from_pmf(pmf) == pytest.approx(2.0, abs=1e-10)

    def test_heralded_source_is_sub_poisson(self):
        assert g2_from_pmf(signal_pmf(POISSON, REF)) < 1.0

    def test_zero_mean(self):
        with pytest.raises(UndefinedMomentError):
            g2_from_pmf(signal_pmf(POISSON, SourceParams(0.0, 0.5, 0.5, 1e-4)))


class TestAsymptote:
    def test_full_fraction_degenerates(self):
        exact0, asym0 = asymptotic_tail_check(REF, 1.0, 0)
        assert asym0 > 0.0
        assert exact0 > 0.0
        _, asym3 = asymptotic_tail_check(REF, 1.0, 3)
        assert asym3 == 0.0

    def test_exact_side_matches_oracle(self):
        oracle = herald_filter_convolution_oracle(REF, 0.1)
        for n in range(4):
            exact, _ = asymptotic_tail_check(REF, 0.1, n)
            assert exact == pytest.approx(oracle.prob(n), abs=1e-12)

    def test_approximation_tracks_tail_decay(self):
        # deep mode filter: extraneous photons dominate the multi-photon
        # tail, whose per-step decay the simplified form then reproduces
        # even though each step shrinks the probability by ~10^3
        p = SourceParams(0.01, 0.5, 0.5, 1e-4)
        for n in range(8, 17):
            e0, a0 = asymptotic_tail_check(p, 0.001, n)
            e1, a1 = asymptotic_tail_check(p, 0.001, n + 1)
            assert e1 / e0 == pytest.approx(a1 / a0, rel=0.25)


class TestUnconditioned:
    def test_matches_base_laws(self):
        a = REF.mu * REF.eta_s
        assert unconditioned_pmf(POISSON, REF, NO_FILTER, 2) == pytest.approx(
            math.exp(-a) * a**2 / 2, rel=1e-13)
        assert unconditioned_pmf(THERMAL, REF, NO_FILTER, 2) == pytest.approx(
            (a / (1 + a)) ** 2 / (1 + a), rel=1e-13)

    def test_xi_times_base_recovers_pmf(self):
        filt = FilterSpec(FilterBranch.HERALD, 0.1)
        kind = xi_kind_for(POISSON, filt)
        pmf = signal_pmf(POISSON, REF, filt)
        for n in range(len(pmf)):
            recon = unconditioned_pmf(POISSON, REF, filt, n) * xi(kind, n, REF, filt)
            assert recon == pytest.approx(pmf.prob(n), rel=1e-12, abs=1e-300)
