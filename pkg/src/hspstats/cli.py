"""Command-line surface: pmf, moments, optimize, sweep, simulate, verify.

Every command emits an :class:`~hspstats.records.OutputRecord` as CSV or
JSON (``--format``), to stdout or ``--out``.  Physical inputs are flags; a
flat ``key = value`` config file (``--config``) may supply defaults, with
flags taking precedence.

Exit statuses: 0 success, 1 usage error, 2 domain error (no-herald and
friends), 3 verification failure.
"""

import argparse
import sys

from . import analytic, optimize as opt, records
from .errors import HspsError
from .model import (
    FilterBranch,
    FilterSpec,
    PairStatistics,
    SourceParams,
    to_record,
)
from .montecarlo import McConfig, simulate
from .verify import MATRIX_SIZES, run_verification

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3

DEFAULTS = {
    "stat": "poisson",
    "mu": None,
    "eta_h": 1.0,
    "eta_s": 1.0,
    "dark": 0.0,
    "filter": "none",
    "f": 1.0,
    "tol": analytic.DEFAULT_TOL,
    "nmax": None,
    "trials": None,
    "seed": 0,
    "n_cap": 64,
    "format": "csv",
    "out": None,
    "matrix": "default",
    "tolerance": None,
    "mu_lo": 1e-6,
    "mu_hi": 10.0,
    "rel_tol": 1e-4,
    "pre_scan": False,
    "axis": "mu",
    "grid": None,
    "logspace": None,
    "no_mc": False,
}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as exit status 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_physics_flags(p: Parser):
    p.add_argument("--stat", choices=["poisson", "thermal"], help="pair-number law")
    p.add_argument("--mu", type=float, help="mean pairs per time bin")
    p.add_argument("--eta-h", dest="eta_h", type=float, help="heralding-branch transmission")
    p.add_argument("--eta-s", dest="eta_s", type=float, help="signal-branch transmission")
    p.add_argument("--dark", type=float, help="dark-count probability per bin")
    p.add_argument("--filter", choices=["none", "signal", "herald"], help="filtered branch")
    p.add_argument("--f", type=float, help="transmitted mode fraction")


def _add_output_flags(p: Parser):
    p.add_argument("--format", choices=list(records.FORMATS), help="output encoding")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.add_argument("--config", help="flat key=value file supplying flag defaults")


def build_parser() -> Parser:
    parser = Parser(prog="hspstats", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmf", help="heralded vs unheralded photon-number table")
    _add_physics_flags(p)
    p.add_argument("--tol", type=float, help="pmf tail tolerance")
    p.add_argument("--nmax", type=int, help="emit rows for n = 0..nmax")
    _add_output_flags(p)

    p = sub.add_parser("moments", help="mean, variance, Fano ratio, g2")
    _add_physics_flags(p)
    p.add_argument("--tol", type=float, help="pmf tail tolerance")
    _add_output_flags(p)

    p = sub.add_parser("optimize", help="pump level minimizing the Fano ratio")
    p.add_argument("--eta-h", dest="eta_h", type=float, help="heralding-branch transmission")
    p.add_argument("--eta-s", dest="eta_s", type=float, help="signal-branch transmission")
    p.add_argument("--dark", type=float, help="dark-count probability per bin")
    p.add_argument("--mu-lo", dest="mu_lo", type=float, help="bracket lower end")
    p.add_argument("--mu-hi", dest="mu_hi", type=float, help="bracket upper end")
    p.add_argument("--rel-tol", dest="rel_tol", type=float, help="relative tolerance on mu")
    p.add_argument("--pre-scan", dest="pre_scan", action="store_const", const=True,
                   help="16-point grid scan before the search")
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="moments and leading pmf terms along one axis")
    _add_physics_flags(p)
    p.add_argument("--axis", choices=list(opt.SWEEP_AXES), help="swept parameter")
    p.add_argument("--grid", help="comma-separated grid values")
    p.add_argument("--logspace", nargs=3, metavar=("START", "STOP", "POINTS"),
                   help="log-spaced grid")
    p.add_argument("--tol", type=float, help="pmf tail tolerance")
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the heralded pmf")
    _add_physics_flags(p)
    p.add_argument("--trials", type=int, help="number of simulated time bins")
    p.add_argument("--seed", type=int, help="64-bit reproducibility seed")
    p.add_argument("--n-cap", dest="n_cap", type=int, help="histogram clamp")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="closed form vs series vs convolution vs MC")
    p.add_argument("--matrix", choices=sorted(MATRIX_SIZES), help="matrix size")
    p.add_argument("--tolerance", type=float, help="override every check tolerance")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per check")
    p.add_argument("--seed", type=int, help="sampling seed")
    p.add_argument("--no-mc", dest="no_mc", action="store_const", const=True,
                   help="skip the Monte Carlo checks")
    _add_output_flags(p)
    return parser


def _read_config(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    return out


def _coerce(key: str, value):
    """Config-file strings to the type the flag would have produced."""
    if not isinstance(value, str):
        return value
    if key in ("stat", "filter", "format", "out", "matrix", "axis", "grid"):
        return value
    if key in ("nmax", "trials", "seed", "n_cap"):
        return int(value)
    if key in ("pre_scan", "no_mc"):
        return value.lower() in ("1", "true", "yes", "on")
    if key == "logspace":
        return value.split(",")
    return float(value)


def _settings(args: argparse.Namespace) -> dict:
    merged = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        for key, value in _read_config(config_path).items():
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            merged[key] = _coerce(key, value)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        merged[key] = value
    return merged


def _physics(s: dict) -> tuple[PairStatistics, SourceParams, FilterSpec]:
    if s["mu"] is None:
        raise UsageError("--mu is required (flag or config file)")
    stat = PairStatistics(s["stat"])
    params = SourceParams(s["mu"], s["eta_h"], s["eta_s"], s["dark"])
    filt = FilterSpec(FilterBranch(s["filter"]), s["f"] if s["filter"] != "none" else 1.0)
    return stat, params, filt


def _echo_inputs(stat, params, filt, extra: dict | None = None) -> dict:
    inputs = {"stat": stat.value}
    inputs.update(to_record(params, filt))
    if extra:
        inputs.update(extra)
    return inputs


def cmd_pmf(s: dict) -> records.OutputRecord:
    stat, params, filt = _physics(s)
    kind = analytic.xi_kind_for(stat, filt)
    pmf = analytic.signal_pmf(stat, params, filt, s["tol"])
    n_top = len(pmf) - 1 if s["nmax"] is None else s["nmax"]
    rows = []
    for n in range(n_top + 1):
        base = analytic.unconditioned_pmf(stat, params, filt, n)
        factor = analytic.xi(kind, n, params, filt)
        rows.append({
            "n": n,
            "p_heralded": base * factor,
            "p_unheralded": base,
            "xi": factor,
        })
    inputs = _echo_inputs(stat, params, filt, {"tol": s["tol"], "tail_bound": pmf.tail_bound})
    return records.OutputRecord(records.SCHEMA_VERSION, "pmf", inputs, rows)


def cmd_moments(s: dict) -> records.OutputRecord:
    stat, params, filt = _physics(s)
    if stat is PairStatistics.POISSON and filt.branch is FilterBranch.NONE:
        summary = analytic.moments_closed_form(params)
        source = "closed_form"
    else:
        summary = analytic.moments_from_pmf(analytic.signal_pmf(stat, params, filt, s["tol"]))
        source = "pmf"
    rows = [{
        "mean": summary.mean,
        "variance": summary.variance,
        "fano": summary.fano,
        "g2": summary.g2,
        "source": source,
    }]
    return records.OutputRecord(
        records.SCHEMA_VERSION, "moments",
        _echo_inputs(stat, params, filt, {"tol": s["tol"]}), rows,
    )


def cmd_optimize(s: dict) -> records.OutputRecord:
    result = opt.optimize_mu(
        s["eta_h"], s["eta_s"], s["dark"],
        bounds=(s["mu_lo"], s["mu_hi"]),
        rel_tol=s["rel_tol"],
        pre_scan=s["pre_scan"],
    )
    inputs = {
        "eta_h": s["eta_h"], "eta_s": s["eta_s"], "d_h": s["dark"],
        "mu_lo": s["mu_lo"], "mu_hi": s["mu_hi"], "rel_tol": s["rel_tol"],
    }
    rows = [{
        "mu_opt": result.mu_opt,
        "fano_opt": result.fano_opt,
        "evaluations": result.evaluations,
    }]
    return records.OutputRecord(records.SCHEMA_VERSION, "optimize", inputs, rows)


def _parse_grid(s: dict) -> tuple:
    if (s["grid"] is None) == (s["logspace"] is None):
        raise UsageError("provide exactly one of --grid or --logspace")
    if s["grid"] is not None:
        try:
            grid = tuple(float(v) for v in str(s["grid"]).split(",") if v.strip())
        except ValueError as exc:
            raise UsageError(f"bad --grid: {exc}") from exc
        if not grid:
            raise UsageError("--grid must contain at least one value")
        return grid
    start, stop, points = s["logspace"]
    start, stop, points = float(start), float(stop), int(points)
    if start <= 0 or stop <= start or points < 2:
        raise UsageError("--logspace needs 0 < START < STOP and POINTS >= 2")
    ratio = (stop / start) ** (1.0 / (points - 1))
    return tuple(start * ratio**i for i in range(points))


def cmd_sweep(s: dict) -> records.OutputRecord:
    stat, params, filt = _physics(s)
    grid = _parse_grid(s)
    result = opt.sweep(params, stat, filt, s["axis"], grid, s["tol"])
    rows = []
    for row in result.rows:
        if row.error is not None:
            rows.append({result.axis: row.value, "mean": None, "variance": None,
                         "fano": None, "g2": None, "p0": None, "p1": None,
                         "p2": None, "p3": None, "error": row.error})
            continue
        head = list(row.pmf_head) + [None] * (4 - len(row.pmf_head))
        rows.append({
            result.axis: row.value,
            "mean": row.moments.mean,
            "variance": row.moments.variance,
            "fano": row.moments.fano,
            "g2": row.moments.g2,
            "p0": head[0], "p1": head[1], "p2": head[2], "p3": head[3],
            "error": None,
        })
    inputs = _echo_inputs(stat, params, filt, {"axis": s["axis"], "tol": s["tol"]})
    return records.OutputRecord(records.SCHEMA_VERSION, "sweep", inputs, rows)


def cmd_simulate(s: dict) -> records.OutputRecord:
    stat, params, filt = _physics(s)
    trials = 1_000_000 if s["trials"] is None else s["trials"]
    if trials < 1:
        raise UsageError(f"--trials must be >= 1, got {trials}")
    config = McConfig(params=params, stat=stat, filt=filt,
                      trials=trials, seed=s["seed"], n_cap=s["n_cap"])
    est = simulate(config)
    rows = [
        {
            "n": n,
            "pmf_hat": est.pmf_hat[n],
            "stderr": est.stderr[n],
            "herald_rate": est.herald_rate,
            "heralded": est.heralded,
            "cap_mass": est.cap_mass,
        }
        for n in range(len(est.pmf_hat))
    ]
    inputs = _echo_inputs(stat, params, filt,
                          {"trials": trials, "seed": s["seed"], "n_cap": s["n_cap"]})
    return records.OutputRecord(records.SCHEMA_VERSION, "simulate", inputs, rows)


def cmd_verify(s: dict) -> tuple[records.OutputRecord, bool]:
    results = run_verification(
        matrix=s["matrix"],
        tolerance=s["tolerance"],
        trials=s["trials"],
        seed=s["seed"],
        with_mc=not s["no_mc"],
    )
    rows = [
        {
            "check": r.check,
            "cases": r.cases,
            "max_deviation": r.max_deviation,
            "tolerance": r.tolerance,
            "status": "pass" if r.passed else "fail",
        }
        for r in results
    ]
    inputs = {"matrix": s["matrix"], "seed": s["seed"]}
    if s["tolerance"] is not None:
        inputs["tolerance"] = s["tolerance"]
    record = records.OutputRecord(records.SCHEMA_VERSION, "verify", inputs, rows)
    return record, all(r.passed for r in results)


def _emit(record: records.OutputRecord, s: dict):
    text = records.render(record, s["format"])
    if s["out"]:
        with open(s["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        s = _settings(args)
        if args.command == "pmf":
            record = cmd_pmf(s)
        elif args.command == "moments":
            record = cmd_moments(s)
        elif args.command == "optimize":
            record = cmd_optimize(s)
        elif args.command == "sweep":
            record = cmd_sweep(s)
        elif args.command == "simulate":
            record = cmd_simulate(s)
        else:
            record, ok = cmd_verify(s)
            _emit(record, s)
            return EXIT_OK if ok else EXIT_VERIFY
        _emit(record, s)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HspsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
