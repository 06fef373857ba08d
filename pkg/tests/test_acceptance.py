"""Whole-package acceptance checks.

One test per numbered criterion of the release checklist; each records a
pass/fail line with its runtime against the stated budget, printed in the
terminal summary.  Statistical bands are three spreads wide around the
reference medians, so a failure here means something structural broke,
not an unlucky seed.
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from bridgex.bench import (
    bench_config,
    default_lambda_grid,
    run_benchmark,
    tune_lambda,
)
from bridgex.cli import main
from bridgex.data import Dataset, standardize
from bridgex.inference import eigen_diagnostics, standard_errors
from bridgex.scenarios import ar1_cholesky, ar1_covariance, generate_scenario, scenario
from bridgex.screening import c_gamma, univariate_argmin_is_zero
from bridgex.solvers import (
    PenaltySpec,
    bridge_fit,
    enet_fit,
    lasso_fit,
    objective,
    ols_fit,
    ridge_fit,
)

from _oracles import (
    grid_min_1d,
    grid_min_2d,
    penalized_value,
    pm1_orthonormal,
    random_standardized,
    simpson,
    univariate_grid_min,
)
from conftest import record_criterion


@contextmanager
def criterion(number, description, budget_s):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        record_criterion(number, description, ok, elapsed, budget_s)
    assert elapsed <= budget_s, (
        f"criterion {number} took {elapsed:.1f}s, budget {budget_s}s"
    )


def test_01_zero_test_agrees_with_grid_oracle():
    with criterion(1, "univariate zero test vs 1e-5 grid search, 300 triples", 10.0):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 300:
            a = rng.uniform(-2.5, 2.5)
            lam = rng.uniform(0.05, 4.0)
            gamma = rng.uniform(0.2, 0.9)
            # skip the knife edge: equality itself is a separate hand case
            if abs(lam - c_gamma(gamma) * abs(a) ** (2.0 - gamma)) <= 1e-6:
                continue
            u_star, _ = univariate_grid_min(a, lam, gamma)
            assert univariate_argmin_is_zero(a, lam, gamma) == (u_star == 0.0), (
                a, lam, gamma, u_star,
            )
            checked += 1


def test_02_threshold_constant_spot_values():
    with criterion(2, "threshold constant closed-form spot values", 1.0):
        assert c_gamma(1.0) == 2.0
        assert abs(c_gamma(0.5) - 1.088662107903635) < 1e-12


def test_03_bridge_fit_matches_grid_oracle():
    with criterion(3, "bridge objective vs exhaustive grid, 48/50 instances", 60.0):
        rng = np.random.default_rng(31415)
        wins = 0
        for trial in range(50):
            p = 1 + trial % 2
            n = int(rng.integers(20, 51))
            data = random_standardized(
                n, p, seed=int(rng.integers(1 << 30)),
                beta=rng.uniform(-1.0, 1.0, p), noise=1.0,
            )
            lam = float(rng.uniform(0.1, 2.0)) * n
            fit = bridge_fit(data, PenaltySpec(lam, 0.5))
            oracle = grid_min_1d if p == 1 else grid_min_2d
            best, _ = oracle(data.x, data.y, lam, 0.5)
            if fit.objective <= best + 1e-3 * n:
                wins += 1
        assert wins >= 48, f"only {wins}/50 within tolerance"


def test_04_baseline_fits_satisfy_their_conditions():
    with criterion(4, "baseline normal equations / KKT on 100 instances", 30.0):
        rng = np.random.default_rng(271828)
        for _ in range(100):
            n = int(rng.integers(20, 61))
            p = int(rng.integers(1, 6))
            data = random_standardized(
                n, p, seed=int(rng.integers(1 << 30)),
                beta=rng.uniform(-1.5, 1.5, p), noise=1.0,
            )
            gram = data.x.T @ data.x
            xy = data.x.T @ data.y

            b = ols_fit(data).coefficients.values
            assert np.abs(gram @ b - xy).max() <= 1e-8 * n

            lam = float(rng.uniform(0.1, 10.0)) * n
            b = ridge_fit(data, lam).coefficients.values
            assert np.abs((gram + lam * np.eye(p)) @ b - xy).max() <= 1e-8 * n

            b = lasso_fit(data, PenaltySpec(lam, 1.0)).coefficients.values
            grad = 2.0 * (gram @ b - xy)
            live = b != 0.0
            assert np.abs(grad[live] + lam * np.sign(b[live])).max(initial=0.0) <= 1e-6 * n
            assert np.abs(grad[~live]).max(initial=0.0) <= lam + 1e-6 * n

            if p == 1:
                lam2 = float(rng.uniform(0.1, 5.0)) * n
                a = float(xy[0])
                want = np.sign(a) * max(0.0, abs(a) - lam / 2.0) / (n + lam2)
                got = enet_fit(data, lam, lam2).coefficients.values[0]
                assert abs(got - want) <= 1e-6


def test_05_grid_penalty_replication_narrow():
    with criterion(5, "tuned bridge on the r=.95 design: nsel and error bands", 900.0):
        rep = run_benchmark(scenario(2), ("bridge",), 100, seed=101)
        s = rep.methods["bridge"]
        assert s.failures == 0
        assert 13 <= s.n_selected_median <= 17
        assert 1.29 <= s.pmse_median <= 3.45


def test_06_two_step_replication_wide():
    with criterion(6, "screen+refit on the wide r=.95 design: bands", 600.0):
        rep = run_benchmark(scenario(5), ("bridge",), 100, seed=102)
        s = rep.methods["bridge"]
        assert s.failures == 0
        assert 13 <= s.n_selected_median <= 17
        assert 2.64 - 1.32 <= s.pmse_median <= 2.64 + 1.32


def test_07_two_step_replication_very_wide():
    with criterion(7, "screen+refit on the 500-column design: bands", 900.0):
        rep = run_benchmark(scenario(6), ("bridge",), 100, seed=103)
        s = rep.methods["bridge"]
        assert s.failures == 0
        assert 15 <= s.n_selected_median <= 21
        assert 2.68 - 1.17 <= s.pmse_median <= 2.68 + 1.17


def test_08_known_support_least_squares_error():
    with criterion(8, "known-support least squares estimation error band", 120.0):
        rep = run_benchmark(scenario(1), ("ols_oracle",), 100, seed=104)
        s = rep.methods["ols_oracle"]
        assert s.failures == 0
        assert 0.0 <= s.emse_median <= 0.647 + 3 * 0.306


def test_09_screening_recovery_improves_with_rows():
    with criterion(9, "exact-support recovery rises from n=50 to n=200", 600.0):
        rates = {}
        for n, seed in ((50, 105), (200, 106)):
            spec = scenario(5, n_train=n)
            rep = run_benchmark(spec, ("bridge",), 50, seed=seed)
            rates[n] = rep.methods["bridge"].exact_support_rate
        assert rates[200] > rates[50], rates


def test_10_interval_coverage_on_strong_signals():
    with criterion(10, "95% intervals cover the 10 strong coefficients", 600.0):
        spec = scenario(1)
        grid = default_lambda_grid(100)
        config = bench_config()
        hits = total = 0
        for r in range(100):
            train_raw, valid, _, beta0 = generate_scenario(spec, seed=107, replicate=r)
            train = standardize(train_raw)
            res = tune_lambda(
                lambda tr, lam: bridge_fit(tr, PenaltySpec(lam, 0.5), config),
                grid, train, valid,
            )
            fit = bridge_fit(train, PenaltySpec(res.best_lambda, 0.5), config)
            se = standard_errors(train, fit)
            pos = {int(j): i for i, j in enumerate(se.selected)}
            for j in range(10):
                total += 1
                if j not in pos:
                    continue  # dropping a true strong signal counts as a miss
                b = fit.coefficients.values[j] / train.column_scales[j]
                half = 1.96 * se.se[pos[j]] / train.column_scales[j]
                hits += abs(b - beta0[j]) <= half
        coverage = hits / total
        assert 0.85 <= coverage <= 0.99, coverage


def test_11_replicated_runs_are_byte_identical(tmp_path):
    with criterion(11, "repeated simulate reports byte-identical", 60.0):
        out = tmp_path / "rep.json"
        argv = ["simulate", "--scenario", "1", "--methods", "ols",
                "--replicates", "1", "--seed", "7", "--output", str(out)]
        assert main(argv) == 0
        first = out.read_bytes()
        out.unlink()
        assert main(argv) == 0
        assert out.read_bytes() == first
        json.loads(first)


def test_12_module_invariants():
    with criterion(12, "standardization / gradient / factor / spectrum invariants", 60.0):
        rng = np.random.default_rng(55)
        raw = Dataset(rng.standard_normal((40, 4)) * 3.0 + 1.0, rng.standard_normal(40))
        data = standardize(raw)
        assert np.abs(data.x.mean(axis=0)).max() <= 1e-10
        assert np.abs((data.x**2).sum(axis=0) / 40.0 - 1.0).max() <= 1e-10
        assert abs(data.y.mean()) <= 1e-10

        # objective slope along one coordinate vs a centered difference of
        # the smoothed surface the flow actually descends
        d = random_standardized(30, 2, seed=8, beta=np.array([0.8, -0.4]))
        lam, eta = 12.0, 1e-4
        beta = np.array([0.35, -0.2])

        def smoothed(b):
            resid = d.y - d.x @ b
            pen = 0.0
            for bj in b:
                root = np.sqrt(abs(bj))
                pen += 0.5 * simpson(lambda t: t / (t + eta), 0.0, root, panels=20000)
            return float(resid @ resid) + lam * pen

        h = 1e-6
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            fd = (smoothed(beta + e) - smoothed(beta - e)) / (2.0 * h)
            grad = -2.0 * float(d.x[:, j] @ (d.y - d.x @ beta))
            grad += lam * 0.25 * np.sign(beta[j]) / (np.sqrt(abs(beta[j])) + eta)
            assert abs(fd - grad) <= 1e-5 * max(1.0, abs(fd))

        for p, r in ((30, 0.5), (500, 0.95)):
            chol = ar1_cholesky(p, r)
            assert np.abs(chol @ chol.T - ar1_covariance(p, r)).max() <= 1e-10

        ortho = Dataset(pm1_orthonormal(16, 3), pm1_orthonormal(16, 1)[:, 0],
                        standardized=True)
        diag = eigen_diagnostics(ortho, [0, 2])
        assert diag.rho_min == pytest.approx(1.0, abs=1e-12)
        assert diag.rho_max == pytest.approx(1.0, abs=1e-12)
        assert diag.cross_max == pytest.approx(0.0, abs=1e-12)
        wide = random_standardized(30, 5, seed=3)
        full = eigen_diagnostics(wide)
        sub = eigen_diagnostics(wide, [1, 3, 4])
        assert full.rho_min <= sub.tau_min + 1e-12
        assert sub.tau_max <= full.rho_max + 1e-12


def test_13_tuned_baselines_land_in_sanity_band():
    with criterion(13, "tuned ridge/lasso/enet medians within 5x references", 900.0):
        rep = run_benchmark(scenario(1), ("ridge", "lasso", "enet"), 100, seed=108)
        for m, ref in (("ridge", 3.51), ("lasso", 2.92), ("enet", 2.80)):
            med = rep.methods[m].pmse_median
            assert rep.methods[m].failures == 0
            assert ref / 5.0 <= med <= ref * 5.0, (m, med)
