"""Command line front end.

Subcommands: ``fit``, ``screen``, ``twostep``, ``tune`` and ``diagnose``
work on delimited files with a header row; ``simulate`` replays the
built-in benchmark scenarios.  Every command writes a JSON report (stdout
unless ``--output`` is given) embedding the resolved configuration, with
floats printed at 17 significant digits.

Exit status: 0 success, 1 usage error (no report written), 2 data or
solver infeasibility error, 3 the requested fit did not converge within
its iteration budget (the report is still written).
"""

import argparse
import csv
import sys

import numpy as np

from .bench import run_benchmark, tune_lambda
from .bench import METHODS as BENCH_METHODS
from .data import load_csv, standardize
from .errors import (
    BridgexError,
    DataError,
    InvalidGamma,
    InvalidSpec,
    UsageError,
)
from .inference import eigen_diagnostics, standard_errors
from .reportio import dumps, write_frequency_csv, write_report
from .scenarios import scenario
from .screening import marginal_screen, two_step_fit
from .solvers import PenaltySpec, bridge_fit, enet_fit, lasso_fit, ols_fit, ridge_fit

_FIT_METHODS = ("bridge", "ols", "ridge", "lasso", "enet")
_TUNE_METHODS = ("bridge", "ridge", "lasso", "enet", "twostep")


def parse_grid(text: str) -> np.ndarray:
    """A single value, or "start:stop:count:log" for a logarithmic grid."""
    parts = text.split(":")
    if len(parts) == 1:
        try:
            lam = float(parts[0])
        except ValueError:
            raise UsageError(f"not a number: {text!r}") from None
        if not np.isfinite(lam) or lam < 0:
            raise UsageError("lambda must be finite and nonnegative")
        return np.array([lam])
    if len(parts) != 4 or parts[3] != "log":
        raise UsageError(f"grid spec must look like start:stop:count:log, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid spec {text!r}") from None
    if not (0 < start <= stop) or count < 1:
        raise UsageError("grid needs 0 < start <= stop and count >= 1")
    return np.logspace(np.log10(start), np.log10(stop), count)


def _single_lambda(text: str) -> float:
    grid = parse_grid(text)
    if grid.size != 1:
        raise UsageError("this command takes a single lambda, not a grid")
    return float(grid[0])


def _check_gamma(gamma: float) -> float:
    if not 0.0 < gamma < 1.0:
        raise UsageError(f"gamma must lie strictly between 0 and 1, got {gamma}")
    return gamma


def _load_raw(path, response):
    # an unknown response column is a usage mistake, not a broken file
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            header = next(csv.reader(fh), None)
    except OSError as err:
        raise DataError(str(err)) from None
    if header is not None and response not in [h.strip() for h in header]:
        raise UsageError(f"{path} has no column named {response!r}")
    return load_csv(path, response)


def _load(path, response):
    raw, names = _load_raw(path, response)
    return standardize(raw), names


def _config_dict(args, **extra) -> dict:
    base = {
        "command": args.command,
        "input_path": getattr(args, "input", None),
        "response_column": getattr(args, "response", None),
        "method": getattr(args, "method", None),
        "lambda": getattr(args, "lam", None),
        "gamma": getattr(args, "gamma", None),
        "scenario_id": getattr(args, "scenario", None),
        "replicates": getattr(args, "replicates", None),
        "seed": getattr(args, "seed", None),
        "output_path": getattr(args, "output", None),
    }
    base.update(extra)
    return base


def _fit_block(fit, names, train) -> dict:
    values = fit.coefficients.values
    slopes = values / train.column_scales
    intercept = train.centering_offsets[-1] - float(
        slopes @ train.centering_offsets[:-1]
    )
    return {
        "covariates": list(names),
        "coefficients": [float(v) for v in values],
        "coefficients_original_scale": [float(v) for v in slopes],
        "intercept_original_scale": intercept,
        "selected": [int(j) for j in fit.coefficients.nonzero_indices],
        "n_selected": fit.coefficients.n_selected,
        "objective": fit.objective,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "method": fit.method,
        "warning": fit.warning,
    }


def _fit_dispatch(method, train, lam, gamma, lam2):
    if method == "ols":
        if lam is not None:
            raise UsageError("ols takes no --lambda")
        return ols_fit(train)
    if lam is None:
        raise UsageError(f"--lambda is required for method {method!r}")
    if method == "bridge":
        return bridge_fit(train, PenaltySpec(lam, _check_gamma(gamma)))
    if method == "ridge":
        return ridge_fit(train, lam)
    if method == "lasso":
        return lasso_fit(train, PenaltySpec(lam, 1.0))
    if method == "enet":
        return enet_fit(train, lam, lam2)
    raise UsageError(f"unknown method {method!r}")


def _cmd_fit(args):
    train, names = _load(args.input, args.response)
    lam = None if args.lam is None else _single_lambda(args.lam)
    fit = _fit_dispatch(args.method, train, lam, args.gamma, args.lambda2)
    report = {"config": _config_dict(args, lambda2=args.lambda2)}
    report.update(_fit_block(fit, names, train))
    if args.stderr:
        se = standard_errors(train, fit)
        report["standard_errors"] = {
            "selected": [int(j) for j in se.selected],
            "se": [float(v) for v in se.se],
            "sigma_hat_sq": se.sigma_hat_sq,
            "df_used": se.df_used,
        }
    return report, (0 if fit.converged else 3)


def _cmd_screen(args):
    train, names = _load(args.input, args.response)
    lam = _single_lambda(args.lam)
    res = marginal_screen(train, PenaltySpec(lam, _check_gamma(args.gamma)))
    report = {
        "config": _config_dict(args),
        "covariates": list(names),
        "marginal_stat": [float(v) for v in res.marginal_stat],
        "threshold_rhs": [float(v) for v in res.threshold_rhs],
        "lambda_over_n": res.lambda_over_n,
        "gamma": res.gamma,
        "selected": [int(j) for j in res.selected],
        "selected_names": [names[j] for j in res.selected],
        "n_selected": int(res.selected.size),
    }
    return report, 0


def _cmd_twostep(args):
    train, names = _load(args.input, args.response)
    lam = _single_lambda(args.lam)
    second = None
    if args.second_stage == "bridge" and args.second_lambda is not None:
        second = PenaltySpec(_single_lambda(args.second_lambda), _check_gamma(args.gamma))
    fit, screen = two_step_fit(
        train,
        PenaltySpec(lam, _check_gamma(args.gamma)),
        second_stage=args.second_stage,
        second_penalty=second,
    )
    report = {
        "config": _config_dict(args, second_stage=args.second_stage,
                               second_lambda=args.second_lambda),
        "screen": {
            "selected": [int(j) for j in screen.selected],
            "selected_names": [names[j] for j in screen.selected],
            "lambda_over_n": screen.lambda_over_n,
        },
    }
    report.update(_fit_block(fit, names, train))
    return report, (0 if fit.converged else 3)


def _cmd_tune(args):
    train, names = _load(args.input, args.response)
    # the held-out split stays on the original scale; predictions map back
    valid, vnames = _load_raw(args.validation, args.response)
    if vnames != names:
        raise DataError("validation covariate columns differ from the training file")
    grid = parse_grid(args.lam)
    gamma, lam2 = args.gamma, args.lambda2
    method = args.method
    if method == "bridge":
        fit_at = lambda tr, lam: bridge_fit(tr, PenaltySpec(lam, _check_gamma(gamma)))
    elif method == "ridge":
        fit_at = lambda tr, lam: ridge_fit(tr, lam)
    elif method == "lasso":
        fit_at = lambda tr, lam: lasso_fit(tr, PenaltySpec(lam, 1.0))
    elif method == "enet":
        fit_at = lambda tr, lam: enet_fit(tr, lam, lam2)
    else:
        fit_at = lambda tr, lam: two_step_fit(tr, PenaltySpec(lam, _check_gamma(gamma)), "ols")[0]
    res = tune_lambda(fit_at, grid, train, valid)
    best = fit_at(train, res.best_lambda)
    report = {
        "config": _config_dict(args, lambda2=lam2, validation_path=args.validation),
        "grid": [float(v) for v in res.lambdas],
        "validation_mse": [float(v) for v in res.mses],
        "best_lambda": res.best_lambda,
        "best_mse": res.best_mse,
    }
    report.update(_fit_block(best, names, train))
    return report, (0 if best.converged else 3)


def _cmd_simulate(args):
    spec = scenario(args.scenario)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for m in methods:
        if m not in BENCH_METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {', '.join(BENCH_METHODS)}")
    grids = None
    if args.grid is not None:
        g = parse_grid(args.grid)
        grids = {"ridge": g, "lasso": g, "bridge": g}
    report_obj = run_benchmark(spec, methods, args.replicates, args.seed, grids=grids)
    report = {"config": _config_dict(args, methods=list(methods), grid=args.grid)}
    report.update(report_obj.to_dict())
    if args.freq_csv:
        write_frequency_csv(args.freq_csv, report_obj)
    if args.figure:
        from .figures import render_frequency_figure

        render_frequency_figure(report_obj, args.figure)
    return report, 0


def _cmd_diagnose(args):
    train, names = _load(args.input, args.response)
    selected = None
    if args.selected:
        try:
            selected = [int(v) for v in args.selected.split(",")]
        except ValueError:
            raise UsageError(f"--selected wants a comma list of indices, got {args.selected!r}") from None
    diag = eigen_diagnostics(train, selected)
    report = {
        "config": _config_dict(args, selected=args.selected),
        "covariates": list(names),
        "rho_min": diag.rho_min,
        "rho_max": diag.rho_max,
        "tau_min": diag.tau_min,
        "tau_max": diag.tau_max,
        "cross_max": diag.cross_max,
    }
    return report, 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgex",
        description="penalized regression with the concave bridge penalty",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--input", required=True, help="delimited data file with a header row")
        p.add_argument("--response", required=True, help="name of the response column")
        p.add_argument("--output", help="report file (stdout when omitted)")

    p = sub.add_parser("fit", help="fit one model at a fixed penalty")
    add_io(p)
    p.add_argument("--method", required=True, choices=_FIT_METHODS)
    p.add_argument("--lambda", dest="lam", help="penalty weight")
    p.add_argument("--lambda2", type=float, default=0.0, help="quadratic weight for enet")
    p.add_argument("--gamma", type=float, default=0.5, help="bridge exponent in (0, 1)")
    p.add_argument("--stderr", action="store_true", help="report standard errors of the selected block")

    p = sub.add_parser("screen", help="marginal zero test for every covariate")
    add_io(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--gamma", type=float, default=0.5)

    p = sub.add_parser("twostep", help="marginal screen, then refit the survivors")
    add_io(p)
    p.add_argument("--lambda", dest="lam", required=True, help="screening penalty weight")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--second-stage", choices=("ols", "bridge"), default="ols")
    p.add_argument("--second-lambda", help="penalty of the bridge second stage")

    p = sub.add_parser("tune", help="pick lambda by validation mean squared error")
    add_io(p)
    p.add_argument("--validation", required=True, help="held-out file with the same columns")
    p.add_argument("--method", required=True, choices=_TUNE_METHODS)
    p.add_argument("--lambda", dest="lam", required=True,
                   help="grid spec start:stop:count:log, or a single value")
    p.add_argument("--lambda2", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.5)

    p = sub.add_parser("simulate", help="replicated benchmark on a built-in scenario")
    p.add_argument("--scenario", type=int, required=True, help="design number 1-6")
    p.add_argument("--methods", default="bridge", help="comma list of estimator tags")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", help="lambda grid override, start:stop:count:log")
    p.add_argument("--output", help="report file (stdout when omitted)")
    p.add_argument("--freq-csv", help="also write the per-covariate frequency table")
    p.add_argument("--figure", help="also render the frequency chart to this PNG")

    p = sub.add_parser("diagnose", help="eigenvalue diagnostics of the design")
    add_io(p)
    p.add_argument("--selected", help="comma list of column indices for the block spectrum")
    return parser


_HANDLERS = {
    "fit": _cmd_fit,
    "screen": _cmd_screen,
    "twostep": _cmd_twostep,
    "tune": _cmd_tune,
    "simulate": _cmd_simulate,
    "diagnose": _cmd_diagnose,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        report, code = _HANDLERS[args.command](args)
    except (UsageError, InvalidSpec, InvalidGamma) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (BridgexError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    text = dumps(report)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
