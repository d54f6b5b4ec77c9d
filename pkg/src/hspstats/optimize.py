"""Optimal dimming and parameter sweeps.

The Fano ratio (Delta n)^2/<n> of a heralded Poisson source tends to 1 both
as mu -> 0 (dark counts dominate) and as mu grows (vacuum suppression is
lost), with a single interior minimum.  ``optimize_mu`` locates it by
golden-section search on log(mu); ``sweep`` tabulates moments and leading
pmf terms along one parameter axis.
"""

import math
from dataclasses import dataclass

from .analytic import moments_closed_form, moments_from_pmf, signal_pmf
from .errors import BracketError, HspsError, ValidationError
from .model import (
    NO_FILTER,
    FilterSpec,
    MomentSummary,
    PairStatistics,
    SourceParams,
)

__all__ = ["OptimizeResult", "SweepResult", "SweepRow", "optimize_mu", "sweep", "fano_ratio"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

SWEEP_AXES = ("mu", "eta_h", "eta_s", "d_h", "f")


@dataclass(frozen=True)
class OptimizeResult:
    """Outcome of the one-dimensional dimming optimization."""

    mu_opt: float
    fano_opt: float
    evaluations: int
    bracket: tuple[float, float]


@dataclass(frozen=True)
class SweepRow:
    """One grid point: the swept value, its moments, leading pmf terms, or
    the error message that prevented evaluation."""

    value: float
    moments: MomentSummary | None
    pmf_head: tuple | None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    grid: tuple
    rows: tuple


def fano_ratio(mu: float, eta_h: float, eta_s: float, d_h: float) -> float:
    """(Delta n)^2 / <n> for a Poisson source at pump level mu."""
    summary = moments_closed_form(SourceParams(mu, eta_h, eta_s, d_h))
    if summary.fano is None:
        raise ValidationError("Fano ratio undefined: the mean photon number is zero")
    return summary.fano


def optimize_mu(
    eta_h: float,
    eta_s: float,
    d_h: float,
    bounds: tuple[float, float] = (1e-6, 10.0),
    rel_tol: float = 1e-4,
    pre_scan: bool = False,
) -> OptimizeResult:
    """Minimize the Fano ratio over the pump level mu.

    Golden-section search on log(mu) down to a relative width rel_tol.
    The bracket is validated first: an interior probe must beat both ends,
    otherwise the search would silently slide to a boundary.  With
    ``pre_scan`` a 16-point log-spaced scan picks the probe and shrinks the
    bracket before validation.
    """
    mu_lo, mu_hi = float(bounds[0]), float(bounds[1])
    if not 0.0 < mu_lo < mu_hi:
        raise ValidationError(f"need 0 < mu_lo < mu_hi, got {bounds!r}")
    if d_h <= 0.0:
        raise ValidationError(
            "optimal dimming needs d_h > 0: without dark counts the Fano "
            "ratio has no interior minimum (its infimum sits at mu = 0)"
        )
    if not rel_tol > 0.0:
        raise ValidationError(f"rel_tol must be > 0, got {rel_tol!r}")

    evaluations = 0

    def objective(log_mu: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return fano_ratio(math.exp(log_mu), eta_h, eta_s, d_h)

    a, b = math.log(mu_lo), math.log(mu_hi)
    f_lo, f_hi = objective(a), objective(b)

    if pre_scan:
        grid = [a + (b - a) * i / 15 for i in range(16)]
        values = [f_lo] + [objective(x) for x in grid[1:-1]] + [f_hi]
        k = min(range(16), key=values.__getitem__)
        if k in (0, 15):
            raise BracketError(
                f"no interior minimum in [{mu_lo!r}, {mu_hi!r}]: the 16-point "
                "pre-scan is minimal at a boundary; widen the bracket"
            )
        a, b = grid[k - 1], grid[k + 1]
        f_lo, f_hi = values[k - 1], values[k + 1]
        probe, f_probe = grid[k], values[k]
    else:
        probe = b - (b - a) * _INV_PHI
        f_probe = objective(probe)
        if not (f_probe < f_lo and f_probe < f_hi):
            raise BracketError(
                f"bracket [{mu_lo!r}, {mu_hi!r}] failed the unimodality probe "
                "(interior point does not beat both ends); run with "
                "pre_scan=True or supply a bracket enclosing the minimum"
            )

    # golden-section refinement on [a, b] with one interior point warm
    c = a + (b - a) * (1.0 - _INV_PHI)
    d = a + (b - a) * _INV_PHI
    if pre_scan or not math.isclose(probe, c):
        f_c = objective(c)
    else:
        f_c = f_probe
    f_d = objective(d)
    while (b - a) > rel_tol:
        if f_c < f_d:
            b, d, f_d = d, c, f_c
            c = a + (b - a) * (1.0 - _INV_PHI)
            f_c = objective(c)
        else:
            a, c, f_c = c, d, f_d
            d = a + (b - a) * _INV_PHI
            f_d = objective(d)
    log_opt = (a + b) / 2.0
    mu_opt = math.exp(log_opt)
    return OptimizeResult(
        mu_opt=mu_opt,
        fano_opt=fano_ratio(mu_opt, eta_h, eta_s, d_h),
        evaluations=evaluations,
        bracket=(mu_lo, mu_hi),
    )


def sweep(
    params: SourceParams,
    stat: PairStatistics = PairStatistics.POISSON,
    filt: FilterSpec = NO_FILTER,
    axis: str = "mu",
    grid: tuple = (),
    tol: float = 1e-12,
    pmf_head: int = 4,
) -> SweepResult:
    """Evaluate moments and leading pmf terms along one parameter axis.

    Points are evaluated independently and in grid order; a point that
    raises a domain error is marked failed instead of aborting the sweep.
    """
    if axis not in SWEEP_AXES:
        raise ValidationError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    grid = tuple(float(v) for v in grid)
    if not grid:
        raise ValidationError("sweep grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("sweep grid must be strictly increasing")

    rows = []
    for value in grid:
        try:
            p, fl = _substitute(params, filt, axis, value)
            pmf = signal_pmf(stat, p, fl, tol)
            moments = moments_from_pmf(pmf)
            rows.append(SweepRow(value, moments, tuple(pmf.probs[:pmf_head])))
        except HspsError as exc:
            rows.append(SweepRow(value, None, None, error=str(exc)))
    return SweepResult(axis=axis, grid=grid, rows=tuple(rows))


def _substitute(
    params: SourceParams, filt: FilterSpec, axis: str, value: float
) -> tuple[SourceParams, FilterSpec]:
    fields = {
        "mu": params.mu,
        "eta_h": params.eta_h,
        "eta_s": params.eta_s,
        "d_h": params.d_h,
    }
    if axis == "f":
        return params, FilterSpec(filt.branch, value)
    fields[axis] = value
    return SourceParams(**fields), filt
