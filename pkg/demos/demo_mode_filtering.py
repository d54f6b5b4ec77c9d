"""What a mode filter does to heralded statistics, branch by branch.

Keeping a single mode (fraction f of the light) purifies the output but
costs statistics.  A filter on the signal branch turns the heralds of the
discarded modes into extra background clicks, inflating the vacuum term.
A filter on the heralding branch leaves extraneous signal photons in the
output, inflating the multi-photon tail instead; the exact tail is checked
against the independent convolution construction.
Run:  python demos/demo_mode_filtering.py
"""

from hspstats import (
    NO_FILTER,
    FilterBranch,
    FilterSpec,
    PairStatistics,
    SourceParams,
    effective_dark_count,
    herald_filter_convolution_oracle,
    signal_pmf,
    unconditioned_pmf,
    xi,
    xi_kind_for,
)

params = SourceParams(mu=0.01, eta_h=0.5, eta_s=0.5, d_h=1e-4)
F = 0.1
POISSON = PairStatistics.POISSON


def term(filt, n):
    kind = xi_kind_for(POISSON, filt)
    return unconditioned_pmf(POISSON, params, filt, n) * xi(kind, n, params, filt)


sig_filter = FilterSpec(FilterBranch.SIGNAL, F)
her_filter = FilterSpec(FilterBranch.HERALD, F)

unfiltered = signal_pmf(POISSON, params)
sig = signal_pmf(POISSON, params, sig_filter)
her = signal_pmf(POISSON, params, her_filter)

print(f"mu = {params.mu}, eta = {params.eta_h}, d_h = {params.d_h}, f = {F}\n")
print(f"{'n':>2} {'unfiltered':>12} {'signal filt.':>12} {'herald filt.':>12}")
for n in range(6):
    print(f"{n:>2} {term(NO_FILTER, n):12.4e} {term(sig_filter, n):12.4e} "
          f"{term(her_filter, n):12.4e}")

nu = effective_dark_count(params, F)
print(f"\nsignal filter: effective dark rate grows {params.d_h:.1e} -> {nu:.3e},")
print(f"so vacuum re-enters: p(0) = {sig.prob(0):.3f} vs {unfiltered.prob(0):.3f} unfiltered.")
print(f"herald filter: p(1) stays high ({her.prob(1):.3f}) but extraneous photons")
print(f"lift p(2) to {her.prob(2):.2e} vs {unfiltered.prob(2):.2e} unfiltered.")

oracle = herald_filter_convolution_oracle(params, F)
dev = max(abs(her.prob(n) - oracle.prob(n)) for n in range(max(len(her), len(oracle))))
print(f"\nclosed form vs convolution construction: max deviation {dev:.2e}")
print("=> dimming controls the herald-filter penalty, making the heralding")
print("branch the better place for a mode filter.")
