"""Cross-validation matrix: closed forms vs. series, convolution, and MC.

Every closed-form pmf in this package has at least one independent route:
the direct conditional series, the filtered-source convolution, a
substituted series for the signal-filtered case, and the Monte Carlo
simulation.  ``run_verification`` exercises all of them over randomized
configurations and returns one report row per check.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import XiKind
from .errors import ValidationError
from .model import FilterBranch, FilterSpec, NO_FILTER, PairStatistics, SourceParams
from .montecarlo import McConfig, simulate

__all__ = ["CheckResult", "MATRIX_SIZES", "sample_configurations", "run_verification"]

# (number of random box configurations, Monte Carlo trials per MC check)
MATRIX_SIZES = {
    "tiny": (12, 100_000),
    "default": (200, 400_000),
    "full": (400, 2_000_000),
}

# parameter box for randomized configurations
BOX_MU = (1e-4, 1.0)
BOX_ETA = (0.05, 1.0)
BOX_DH = (0.0, 1e-2)
BOX_F = (0.05, 1.0)

SERIES_TOL = 1e-10          # per-term, closed form vs. independent series
REDUCTION_TOL = 1e-12       # f = 1 reduction of the filtered factors
MOMENT_TOL = 1e-9           # relative, closed moments vs. pmf moments
MC_TOL = 1.0                # deviations in units of 5 sigma


@dataclass(frozen=True)
class CheckResult:
    check: str
    cases: int
    max_deviation: float
    tolerance: float
    passed: bool


def sample_configurations(count: int, seed: int = 20260809) -> list:
    """Random (params, f) draws from the validated parameter box.

    mu and nonzero d_h are log-uniform; one draw in five pins d_h = 0 and,
    independently, f = 1, so the boundary cases stay exercised.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        mu = math.exp(rng.uniform(math.log(BOX_MU[0]), math.log(BOX_MU[1])))
        eta_h = rng.uniform(*BOX_ETA)
        eta_s = rng.uniform(*BOX_ETA)
        if rng.random() < 0.2:
            d_h = 0.0
        else:
            d_h = math.exp(rng.uniform(math.log(1e-6), math.log(BOX_DH[1])))
        f = 1.0 if rng.random() < 0.2 else rng.uniform(*BOX_F)
        out.append((SourceParams(mu, eta_h, eta_s, d_h), float(f)))
    return out


def _max_term_deviation(pmf_a, pmf_b) -> float:
    n = max(len(pmf_a), len(pmf_b))
    return max(abs(pmf_a.prob(i) - pmf_b.prob(i)) for i in range(n))


def _series_checks(configs) -> dict:
    dev_p = dev_t = dev_s = dev_h = 0.0
    tol = 1e-12
    for params, f in configs:
        closed_p = analytic.signal_pmf(PairStatistics.POISSON, params, NO_FILTER, tol)
        series_p = analytic.conditional_pmf_series(PairStatistics.POISSON, params, tol)
        dev_p = max(dev_p, _max_term_deviation(closed_p, series_p))

        closed_t = analytic.signal_pmf(PairStatistics.THERMAL, params, NO_FILTER, tol)
        series_t = analytic.conditional_pmf_series(PairStatistics.THERMAL, params, tol)
        dev_t = max(dev_t, _max_term_deviation(closed_t, series_t))

        # signal filter: the kept mode is a thermal source with mean mu*f
        # heralded against an inflated dark rate, so the generic series at
        # those substituted parameters is an independent route
        sig = FilterSpec(FilterBranch.SIGNAL, f)
        closed_s = analytic.signal_pmf(PairStatistics.POISSON, params, sig, tol)
        sub = SourceParams(
            params.mu * f, params.eta_h, params.eta_s,
            analytic.effective_dark_count(params, f),
        )
        series_s = analytic.conditional_pmf_series(PairStatistics.THERMAL, sub, tol)
        dev_s = max(dev_s, _max_term_deviation(closed_s, series_s))

        her = FilterSpec(FilterBranch.HERALD, f)
        closed_h = analytic.signal_pmf(PairStatistics.POISSON, params, her, tol)
        oracle_h = analytic.herald_filter_convolution_oracle(params, f, tol)
        dev_h = max(dev_h, _max_term_deviation(closed_h, oracle_h))
    return {
        "poisson_closed_vs_series": dev_p,
        "thermal_closed_vs_series": dev_t,
        "signal_filtered_vs_substituted_series": dev_s,
        "herald_filtered_vs_convolution": dev_h,
    }


def _reduction_check(configs) -> float:
    """xi_s and xi_h at f = 1 against xi_t, n = 0..50, scale-aware."""
    full_signal = FilterSpec(FilterBranch.SIGNAL, 1.0)
    full_herald = FilterSpec(FilterBranch.HERALD, 1.0)
    worst = 0.0
    for params, _ in configs:
        if params.d_h == 0.0 and params.mu * params.eta_h == 0.0:
            continue
        for n in range(51):
            ref = analytic.xi(XiKind.THERMAL_UNFILTERED, n, params)
            scale = max(1.0, abs(ref))
            xs = analytic.xi(XiKind.SIGNAL_FILTERED, n, params, full_signal)
            xh = analytic.xi(XiKind.HERALD_FILTERED, n, params, full_herald)
            worst = max(worst, abs(xs - ref) / scale, abs(xh - ref) / scale)
    return worst


def _moment_check(configs) -> float:
    worst = 0.0
    for params, _ in configs:
        closed = analytic.moments_closed_form(params)
        pmf = analytic.signal_pmf(PairStatistics.POISSON, params, NO_FILTER, 1e-13)
        direct = analytic.moments_from_pmf(pmf)
        scale_m = max(abs(closed.mean), 1e-300)
        scale_v = max(abs(closed.variance), 1e-300)
        worst = max(
            worst,
            abs(closed.mean - direct.mean) / scale_m,
            abs(closed.variance - direct.variance) / scale_v,
        )
    return worst


def mc_acceptance_matrix() -> list:
    """Canonical configurations exercised end-to-end by the simulator."""
    return [
        ("poisson_baseline", PairStatistics.POISSON,
         SourceParams(0.01, 0.5, 0.5, 1e-4), NO_FILTER),
        ("thermal_baseline", PairStatistics.THERMAL,
         SourceParams(0.05, 0.4, 0.6, 1e-3), NO_FILTER),
        ("dark_dominated", PairStatistics.POISSON,
         SourceParams(1e-3, 0.3, 0.7, 5e-3), NO_FILTER),
        ("bright_source", PairStatistics.POISSON,
         SourceParams(0.5, 0.9, 0.8, 1e-4), NO_FILTER),
        ("signal_filtered", PairStatistics.POISSON,
         SourceParams(0.01, 0.5, 0.5, 1e-4), FilterSpec(FilterBranch.SIGNAL, 0.1)),
        ("herald_filtered", PairStatistics.POISSON,
         SourceParams(0.01, 0.5, 0.5, 1e-4), FilterSpec(FilterBranch.HERALD, 0.1)),
    ]


def mc_deviation(
    est,
    stat: PairStatistics,
    params: SourceParams,
    filt: FilterSpec = NO_FILTER,
    min_prob: float = 1e-6,
) -> float:
    """Worst bin deviation of an estimate from the closed form, in units of
    five binomial standard deviations of the analytic probability."""
    pmf = analytic.signal_pmf(stat, params, filt)
    worst = 0.0
    for n in range(len(est.pmf_hat) - 1):      # cap bin excluded: clamped mass
        p = pmf.prob(n)
        if p < min_prob:
            continue
        sigma = math.sqrt(p * (1.0 - p) / est.heralded)
        worst = max(worst, abs(est.pmf_hat[n] - p) / (5.0 * sigma))
    return worst


def _mc_checks(trials: int, seed: int) -> dict:
    worst_pmf = 0.0
    worst_rate = 0.0
    for i, (name, stat, params, filt) in enumerate(mc_acceptance_matrix()):
        est = simulate(McConfig(params=params, stat=stat, filt=filt, trials=trials, seed=seed + i))
        worst_pmf = max(worst_pmf, mc_deviation(est, stat, params, filt))
        rate = analytic.herald_click_probability(stat, params, filt)
        sigma = math.sqrt(rate * (1.0 - rate) / trials)
        worst_rate = max(worst_rate, abs(est.herald_rate - rate) / (5.0 * sigma))
    return {"mc_vs_closed_pmf": worst_pmf, "mc_herald_rate_vs_closed": worst_rate}


def run_verification(
    matrix: str = "default",
    tolerance: float | None = None,
    trials: int | None = None,
    seed: int = 20260809,
    with_mc: bool = True,
) -> list:
    """Run every cross-check and return a list of :class:`CheckResult`.

    ``tolerance``, when given, overrides the default tolerance of every
    check (useful to prove the checks can fail).  ``trials`` overrides the
    per-check Monte Carlo trial count of the chosen matrix.
    """
    if matrix not in MATRIX_SIZES:
        raise ValidationError(f"matrix must be one of {sorted(MATRIX_SIZES)}, got {matrix!r}")
    n_configs, mc_trials = MATRIX_SIZES[matrix]
    if trials is not None:
        if trials < 1:
            raise ValidationError(f"trials must be >= 1, got {trials}")
        mc_trials = trials
    configs = sample_configurations(n_configs, seed)

    results = []

    def add(check: str, cases: int, dev: float, default_tol: float):
        tol = default_tol if tolerance is None else tolerance
        results.append(CheckResult(check, cases, dev, tol, dev <= tol))

    for name, dev in _series_checks(configs).items():
        add(name, n_configs, dev, SERIES_TOL)
    add("filtered_reduction_at_f1", n_configs, _reduction_check(configs), REDUCTION_TOL)
    add("moments_closed_vs_pmf", n_configs, _moment_check(configs), MOMENT_TOL)
    if with_mc:
        n_mc = len(mc_acceptance_matrix())
        for name, dev in _mc_checks(mc_trials, seed).items():
            add(name, n_mc, dev, MC_TOL)
    return results
