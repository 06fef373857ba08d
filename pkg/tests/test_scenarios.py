"""The built-in benchmark designs: shapes, correlation structure and
replicate determinism."""

import numpy as np
import pytest

from bridgex.errors import InvalidSpec
from bridgex.scenarios import (
    ScenarioSpec,
    ar1_cholesky,
    ar1_covariance,
    fixed_design,
    generate_scenario,
    scenario,
)


def test_scenario_catalogue():
    widths = {1: 30, 2: 30, 3: 30, 4: 200, 5: 200, 6: 500}
    for sid, p in widths.items():
        spec = scenario(sid)
        assert spec.p == p
        assert spec.sigma == 1.5
        assert spec.beta0.shape == (p,)
        assert np.count_nonzero(spec.beta0) == 15
        assert spec.n_train == spec.n_valid == spec.n_test == 100
    assert np.all(scenario(1).beta0[:5] == 2.5)
    assert np.all(scenario(1).beta0[5:10] == 1.5)
    assert np.all(scenario(1).beta0[10:15] == 0.5)
    assert np.all(scenario(3).beta0[:15] == 1.5)
    assert scenario(2).r == 0.95
    assert scenario(5, n_train=50).n_train == 50


def test_scenario_validation():
    with pytest.raises(InvalidSpec):
        scenario(7)
    with pytest.raises(InvalidSpec):
        ScenarioSpec(1, 4, 1.5, "spiral", np.zeros(4), r=0.5)
    with pytest.raises(InvalidSpec):
        ScenarioSpec(1, 4, 1.5, "ar1", np.zeros(3), r=0.5)
    with pytest.raises(InvalidSpec):
        ScenarioSpec(1, 4, -1.0, "ar1", np.zeros(4), r=0.5)
    with pytest.raises(InvalidSpec):
        ScenarioSpec(1, 4, 1.5, "ar1", np.zeros(4), r=1.0)


def test_ar1_covariance_entries():
    cov = ar1_covariance(4, 0.5)
    for i in range(4):
        for j in range(4):
            assert cov[i, j] == pytest.approx(0.5 ** abs(i - j), rel=1e-15)


def test_ar1_cholesky_reconstructs_covariance():
    for p, r in ((30, 0.5), (500, 0.95)):
        chol = ar1_cholesky(p, r)
        assert np.abs(np.tril(chol) - chol).max() == 0.0
        gap = np.abs(chol @ chol.T - ar1_covariance(p, r)).max()
        assert gap <= 1e-10


def test_fixed_design_is_standardized_and_deterministic():
    spec = scenario(1)
    train, valid, test = fixed_design(spec, seed=4)
    for x in (train, valid, test):
        assert x.shape == (100, 30)
        assert np.abs(x.mean(axis=0)).max() < 1e-10
        assert np.abs((x * x).sum(axis=0) / 100.0 - 1.0).max() < 1e-10
    again = fixed_design(spec, seed=4)
    assert all(np.all(a == b) for a, b in zip((train, valid, test), again))
    other = fixed_design(spec, seed=5)
    assert not np.all(train == other[0])


def test_replicates_share_the_design_and_vary_the_noise():
    spec = scenario(2)
    t0, v0, s0, beta0 = generate_scenario(spec, seed=9, replicate=0)
    t1, _, _, _ = generate_scenario(spec, seed=9, replicate=1)
    assert np.all(t0.x == t1.x)
    assert not np.all(t0.y == t1.y)
    # replaying the same replicate reproduces the responses bit for bit
    t0b, _, _, _ = generate_scenario(spec, seed=9, replicate=0)
    assert np.all(t0.y == t0b.y)
    assert np.all(beta0 == spec.beta0)
    beta0[0] = -99.0  # the returned vector is a copy
    assert spec.beta0[0] == 2.5


def test_scenario_correlation_spot_checks():
    t1, _, _, _ = generate_scenario(scenario(1), seed=3)
    corr1 = float(t1.x[:, 0] @ t1.x[:, 1]) / 100.0
    assert abs(corr1 - 0.5) < 0.2

    t2, _, _, _ = generate_scenario(scenario(2), seed=3)
    corr2 = float(t2.x[:, 0] @ t2.x[:, 1]) / 100.0
    assert abs(corr2 - 0.95) < 0.05

    # latent groups: members of one group are nearly copies of each other
    t3, _, _, _ = generate_scenario(scenario(3), seed=3)
    within = float(t3.x[:, 0] @ t3.x[:, 1]) / 100.0
    assert within > 0.97
    across = float(t3.x[:, 0] @ t3.x[:, 5]) / 100.0
    assert abs(across) < 0.35


def test_block_designs_are_block_independent():
    t4, _, _, _ = generate_scenario(scenario(4), seed=3)
    cross = float(t4.x[:, 0] @ t4.x[:, 20]) / 100.0
    assert abs(cross) < 0.35
    lead = float(t4.x[:, 0] @ t4.x[:, 1]) / 100.0
    assert abs(lead - 0.5) < 0.2


def test_response_noise_level():
    spec = scenario(1)
    train, valid, test, beta0 = generate_scenario(spec, seed=21)
    eps = np.concatenate([d.y - d.x @ beta0 for d in (train, valid, test)])
    assert abs(eps.std() - 1.5) < 0.25
    assert abs(eps.mean()) < 0.3
