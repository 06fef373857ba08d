"""Replicated benchmark runs: tuning, error metrics, aggregation.

``run_benchmark`` draws the fixed design of a scenario, replays replicates
with fresh noise, tunes every penalized method on the validation split and
reduces the per-replicate metrics to the medians, spreads and per-covariate
selection frequencies the reports are built from.  Aggregation is done in
replicate order, so a run is reproducible bit for bit regardless of how
many worker processes computed it.
"""

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset, predict, standardize
from .errors import BridgexError, DimensionMismatch, InvalidSpec
from .scenarios import ScenarioSpec, generate_scenario
from .screening import two_step_fit
from .solvers import (
    CoefficientPartition,
    FitResult,
    PenaltySpec,
    SolverConfig,
    bridge_fit,
    enet_fit,
    lasso_fit,
    ols_fit,
    ridge_fit,
)

METHODS = ("ols", "ridge", "lasso", "enet", "bridge", "ols_oracle", "bridge_oracle")

# iteration cap for benchmark bridge fits; the smallest grid lambdas on the
# r=0.95 designs flatten out long before full convergence and never win the
# validation search, so there is no point running them to the 2e5 default
_BENCH_MAX_ITER = 30000


def bench_config() -> SolverConfig:
    return SolverConfig(max_iter=_BENCH_MAX_ITER)


def default_lambda_grid(n: int, count: int = 50, low: float = 1e-4, high: float = 1e2):
    """Absolute penalty weights: n times ``count`` log-spaced lambda/n values."""
    return n * np.logspace(np.log10(low), np.log10(high), count)


def default_enet_grids(n: int):
    """The 10 x 5 (lam1, lam2) search grid."""
    return default_lambda_grid(n, 10), default_lambda_grid(n, 5)


def validation_mse(fit: FitResult, train: Dataset, valid: Dataset) -> float:
    yhat = predict(valid.x, fit.coefficients.values, train)
    return float(np.mean((valid.y - yhat) ** 2))


@dataclass(frozen=True)
class TuneResult:
    """Validation-MSE search trace; best_lambda is the winning grid value."""

    best_lambda: float
    best_mse: float
    lambdas: np.ndarray
    mses: np.ndarray


def tune_lambda(fit_at, grid, train: Dataset, valid: Dataset) -> TuneResult:
    """Pick the grid lambda whose fit minimizes validation MSE.

    ``fit_at(train, lam)`` produces the candidate fit.  Ties go to the
    larger lambda, i.e. the sparser model.  A grid point whose fit raises
    is scored as infinitely bad (a lambda that admits no fit, e.g. one
    screening in more columns than rows, simply cannot win); if every
    point fails, the last error propagates.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise InvalidSpec("tuning grid is empty")
    if (grid < 0).any() or not np.isfinite(grid).all():
        raise InvalidSpec("tuning grid must be finite and nonnegative")
    mses = np.empty(grid.size)
    last_err = None
    for i, lam in enumerate(grid):
        try:
            mses[i] = validation_mse(fit_at(train, float(lam)), train, valid)
        except BridgexError as err:
            mses[i] = np.inf
            last_err = err
    if not np.isfinite(mses).any():
        raise last_err
    best = np.min(mses)
    lam = float(np.max(grid[mses == best]))
    return TuneResult(lam, float(best), grid, mses)


def tune_enet(train: Dataset, valid: Dataset, grid1, grid2, config=None):
    """Two-dimensional search for (lam1, lam2); ties favor heavier penalties."""
    best = (np.inf, -np.inf, -np.inf)
    for lam2 in np.asarray(grid2, dtype=float):
        res = tune_lambda(
            lambda tr, l1: enet_fit(tr, l1, float(lam2), config), grid1, train, valid
        )
        key = (res.best_mse, res.best_lambda, float(lam2))
        if key[0] < best[0] or (key[0] == best[0] and key[1:] > best[1:]):
            best = key
    return best[1], best[2], best[0]


def pmse(fit: FitResult, train: Dataset, test: Dataset) -> float:
    """Mean squared prediction error on the test split."""
    if test.p != train.p:
        raise DimensionMismatch(f"test has {test.p} covariates, train has {train.p}")
    yhat = predict(test.x, fit.coefficients.values, train)
    return float(np.mean((test.y - yhat) ** 2))


def emse(beta_hat, beta0) -> float:
    """Squared estimation error summed over all coordinates."""
    beta_hat = np.asarray(beta_hat, dtype=float)
    beta0 = np.asarray(beta0, dtype=float)
    if beta_hat.shape != beta0.shape:
        raise DimensionMismatch("coefficient vectors differ in length")
    d = beta_hat - beta0
    return float(d @ d)


def selection_stats(fit: FitResult, beta0):
    """Selected count plus the per-covariate correct-classification flags."""
    beta0 = np.asarray(beta0, dtype=float)
    values = fit.coefficients.values
    if values.shape != beta0.shape:
        raise DimensionMismatch("coefficient vectors differ in length")
    correct = (values != 0.0) == (beta0 != 0.0)
    return fit.coefficients.n_selected, correct


def lower_median(values) -> float:
    """Lower median: for even counts, the smaller of the two middle values."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        raise DimensionMismatch("median of an empty sample")
    return float(values[(values.size - 1) // 2])


def sample_sd(values):
    """Sample standard deviation (n-1 divisor); None below two samples."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return None
    return float(np.std(values, ddof=1))


def _embed(stage: FitResult, columns, p: int, method: str) -> FitResult:
    beta = np.zeros(p)
    beta[np.asarray(columns, dtype=int)] = stage.coefficients.values
    return FitResult(
        CoefficientPartition.from_values(beta),
        stage.iterations,
        stage.converged,
        stage.objective,
        method,
        stage.warning,
    )


def _fit_method(method, spec, train, valid, beta0, grids, gamma, config):
    """One tuned fit; returns (FitResult, tuned lambda or None)."""
    support = np.flatnonzero(np.asarray(beta0) != 0.0)
    if method == "ols":
        return ols_fit(train), None
    if method == "ols_oracle":
        fit = ols_fit(train.restrict(support))
        return _embed(fit, support, train.p, method), None
    if method == "ridge":
        res = tune_lambda(lambda tr, lam: ridge_fit(tr, lam), grids["ridge"], train, valid)
        return ridge_fit(train, res.best_lambda), res.best_lambda
    if method == "lasso":
        res = tune_lambda(
            lambda tr, lam: lasso_fit(tr, PenaltySpec(lam, 1.0), config),
            grids["lasso"], train, valid,
        )
        return lasso_fit(train, PenaltySpec(res.best_lambda, 1.0), config), res.best_lambda
    if method == "enet":
        lam1, lam2, _ = tune_enet(train, valid, grids["enet_l1"], grids["enet_l2"], config)
        return enet_fit(train, lam1, lam2, config), lam1
    if method == "bridge_oracle":
        sub_train = train.restrict(support)
        sub_valid = Dataset(valid.x[:, support], valid.y)
        res = tune_lambda(
            lambda tr, lam: bridge_fit(tr, PenaltySpec(lam, gamma), config),
            grids["bridge"], sub_train, sub_valid,
        )
        fit = bridge_fit(sub_train, PenaltySpec(res.best_lambda, gamma), config)
        return _embed(fit, support, train.p, method), res.best_lambda
    if method == "bridge":
        if spec.p >= spec.n_train:
            # more covariates than rows: marginal screen, then least squares
            def fit_at(tr, lam):
                return two_step_fit(tr, PenaltySpec(lam, gamma), "ols")[0]
        else:
            def fit_at(tr, lam):
                return bridge_fit(tr, PenaltySpec(lam, gamma), config)
        res = tune_lambda(fit_at, grids["bridge"], train, valid)
        return fit_at(train, res.best_lambda), res.best_lambda
    raise InvalidSpec(f"unknown estimator tag {method!r}")


def _design_digest(train, valid, test) -> str:
    h = hashlib.sha256()
    for d in (train, valid, test):
        h.update(np.ascontiguousarray(d.x).tobytes())
    return h.hexdigest()


def _replicate_row(args):
    """Metrics of every method on one replicate; runs in a worker process."""
    spec, methods, seed, rep, grids, gamma, config = args
    train_raw, valid, test, beta0 = generate_scenario(spec, seed, rep)
    digest = _design_digest(train_raw, valid, test)
    train = standardize(train_raw)
    row = {}
    for method in methods:
        try:
            fit, lam = _fit_method(method, spec, train, valid, beta0, grids, gamma, config)
            beta_gen = fit.coefficients.values / train.column_scales
            n_sel, correct = selection_stats(fit, beta0)
            row[method] = dict(
                pmse=pmse(fit, train, test),
                emse=emse(beta_gen, beta0),
                n_selected=n_sel,
                correct=correct,
                exact=bool(correct.all()),
                converged=fit.converged,
                tuned_lambda=lam,
            )
        except BridgexError:
            row[method] = None
    return digest, row


@dataclass(frozen=True)
class MethodSummary:
    pmse_median: float | None
    pmse_sd: float | None
    emse_median: float | None
    emse_sd: float | None
    n_selected_median: float | None
    per_covariate_correct: np.ndarray | None
    exact_support_rate: float | None
    failures: int
    n_converged: int
    pmse_samples: list
    emse_samples: list
    n_selected_samples: list
    tuned_lambdas: list

    def to_dict(self) -> dict:
        freq = self.per_covariate_correct
        return {
            "pmse_median": self.pmse_median,
            "pmse_sd": self.pmse_sd,
            "emse_median": self.emse_median,
            "emse_sd": self.emse_sd,
            "n_selected_median": self.n_selected_median,
            "per_covariate_correct": None if freq is None else [float(f) for f in freq],
            "exact_support_rate": self.exact_support_rate,
            "failures": self.failures,
            "n_converged": self.n_converged,
            "pmse_samples": self.pmse_samples,
            "emse_samples": self.emse_samples,
            "n_selected_samples": self.n_selected_samples,
            "tuned_lambdas": self.tuned_lambdas,
        }


@dataclass(frozen=True)
class ReplicationReport:
    scenario_id: int
    p: int
    replicates: int
    seed: int
    method_names: tuple
    methods: dict
    design_sha256: str

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "p": self.p,
            "replicates": self.replicates,
            "seed": self.seed,
            "design_sha256": self.design_sha256,
            "methods": {m: self.methods[m].to_dict() for m in self.method_names},
        }


def _summarize(rows, method, p) -> MethodSummary:
    good = [r[method] for r in rows if r[method] is not None]
    failures = len(rows) - len(good)
    if not good:
        return MethodSummary(None, None, None, None, None, None, None,
                             failures, 0, [], [], [], [])
    pm = [g["pmse"] for g in good]
    em = [g["emse"] for g in good]
    ns = [g["n_selected"] for g in good]
    freq = np.mean([g["correct"] for g in good], axis=0)
    lams = [g["tuned_lambda"] for g in good]
    return MethodSummary(
        pmse_median=lower_median(pm),
        pmse_sd=sample_sd(pm),
        emse_median=lower_median(em),
        emse_sd=sample_sd(em),
        n_selected_median=lower_median(ns),
        per_covariate_correct=freq,
        exact_support_rate=float(np.mean([g["exact"] for g in good])),
        failures=failures,
        n_converged=sum(1 for g in good if g["converged"]),
        pmse_samples=[float(v) for v in pm],
        emse_samples=[float(v) for v in em],
        n_selected_samples=[int(v) for v in ns],
        tuned_lambdas=[None if v is None else float(v) for v in lams],
    )


def _worker_count() -> int:
    raw = os.environ.get("BRIDGEX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_benchmark(
    spec: ScenarioSpec,
    methods,
    replicates: int,
    seed: int,
    grids=None,
    gamma: float = 0.5,
    config: SolverConfig | None = None,
    workers: int | None = None,
) -> ReplicationReport:
    """Replicated comparison of the requested estimators on one scenario.

    Fresh noise per replicate on the fixed design, validation tuning per
    method and replicate, then order-deterministic aggregation.  A method
    whose fit fails on some replicate contributes to that method's failure
    count instead of aborting the run.  ``BRIDGEX_THREADS`` (or the
    ``workers`` argument) spreads replicates over processes.
    """
    if replicates < 1:
        raise InvalidSpec("need at least one replicate")
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise InvalidSpec(f"unknown estimator tag {m!r}")
    n = spec.n_train
    full = {
        "ridge": default_lambda_grid(n),
        "lasso": default_lambda_grid(n),
        "bridge": default_lambda_grid(n),
        "enet_l1": default_lambda_grid(n, 10),
        "enet_l2": default_lambda_grid(n, 5),
    }
    if grids:
        full.update({k: np.asarray(v, dtype=float) for k, v in grids.items()})
    full["bridge_oracle"] = full.get("bridge_oracle", full["bridge"])
    if config is None:
        config = bench_config()
    args = [(spec, methods, seed, rep, full, gamma, config) for rep in range(replicates)]
    workers = _worker_count() if workers is None else max(1, int(workers))
    if workers > 1 and replicates > 1:
        with ProcessPoolExecutor(max_workers=min(workers, replicates)) as pool:
            results = list(pool.map(_replicate_row, args))
    else:
        results = [_replicate_row(a) for a in args]
    digests = {d for d, _ in results}
    if len(digests) != 1:
        raise InvalidSpec("fixed design drifted across replicates")
    rows = [r for _, r in results]
    summaries = {m: _summarize(rows, m, spec.p) for m in methods}
    return ReplicationReport(
        scenario_id=spec.id,
        p=spec.p,
        replicates=replicates,
        seed=seed,
        method_names=methods,
        methods=summaries,
        design_sha256=next(iter(digests)),
    )
