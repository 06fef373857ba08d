"""The six benchmark designs and their replicate streams.

Each scenario fixes a covariate distribution, a coefficient vector and a
noise level.  The design matrices of the three splits are drawn once per
(scenario, seed) and standardized column by column; replicates share the
fixed design and differ only through fresh noise, so the response of
replicate r is a pure function of (scenario, seed, r).
"""

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, _center_scale
from .errors import InvalidSpec

# sub-stream tags so design and noise draws never overlap
_DESIGN_STREAM = 0
_NOISE_STREAM = 1

_STRUCTURES = ("ar1", "block_ar1", "latent_groups", "latent_groups_wide")


@dataclass(frozen=True)
class ScenarioSpec:
    id: int
    p: int
    sigma: float
    structure: str
    beta0: np.ndarray
    r: float | None = None
    n_train: int = 100
    n_valid: int = 100
    n_test: int = 100

    def __post_init__(self):
        object.__setattr__(self, "beta0", np.asarray(self.beta0, dtype=float))
        if self.structure not in _STRUCTURES:
            raise InvalidSpec(f"unknown design structure {self.structure!r}")
        if self.beta0.shape != (self.p,):
            raise InvalidSpec(f"beta0 must have length p={self.p}")
        if self.sigma <= 0.0:
            raise InvalidSpec("noise level must be positive")
        if self.structure != "latent_groups" and not (self.r is not None and 0.0 <= self.r < 1.0):
            raise InvalidSpec("correlation r must lie in [0, 1)")
        if min(self.n_train, self.n_valid, self.n_test) < 2:
            raise InvalidSpec("each split needs at least two rows")


_SPARSE15 = [2.5] * 5 + [1.5] * 5 + [0.5] * 5
_FLAT15 = [1.5] * 15


def scenario(scenario_id: int, **overrides) -> ScenarioSpec:
    """Benchmark design by number, 1 through 6.

    1/2: p=30 AR(1) designs with r = 0.5 / 0.95 and a 15-sparse coefficient
    vector.  3: three latent groups of five plus 15 independent columns.
    4/5: p=200, two independent AR(1) blocks (15 and 185 columns).
    6: p=500, the 15-column r=0.95 block plus 485 independent columns.
    Split sizes may be overridden, e.g. ``n_train=200``.
    """
    base = {
        1: dict(p=30, structure="ar1", r=0.5, beta0=_SPARSE15 + [0.0] * 15),
        2: dict(p=30, structure="ar1", r=0.95, beta0=_SPARSE15 + [0.0] * 15),
        3: dict(p=30, structure="latent_groups", r=None, beta0=_FLAT15 + [0.0] * 15),
        4: dict(p=200, structure="block_ar1", r=0.5, beta0=_SPARSE15 + [0.0] * 185),
        5: dict(p=200, structure="block_ar1", r=0.95, beta0=_SPARSE15 + [0.0] * 185),
        6: dict(p=500, structure="latent_groups_wide", r=0.95, beta0=_FLAT15 + [0.0] * 485),
    }
    if scenario_id not in base:
        raise InvalidSpec(f"scenario id must be 1..6, got {scenario_id}")
    kw = dict(id=scenario_id, sigma=1.5, **base[scenario_id])
    kw.update(overrides)
    return ScenarioSpec(**kw)


def ar1_covariance(p: int, r: float) -> np.ndarray:
    """Covariance with entries r^|i-j|."""
    idx = np.arange(p)
    return r ** np.abs(np.subtract.outer(idx, idx))


def ar1_cholesky(p: int, r: float) -> np.ndarray:
    """Lower Cholesky factor of the r^|i-j| covariance."""
    return np.linalg.cholesky(ar1_covariance(p, r))


def _draw_raw(spec: ScenarioSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    if spec.structure == "ar1":
        return rng.standard_normal((n, spec.p)) @ ar1_cholesky(spec.p, spec.r).T
    if spec.structure == "block_ar1":
        lead = rng.standard_normal((n, 15)) @ ar1_cholesky(15, spec.r).T
        rest = rng.standard_normal((n, spec.p - 15)) @ ar1_cholesky(spec.p - 15, spec.r).T
        return np.hstack([lead, rest])
    if spec.structure == "latent_groups":
        # three shared factors, five noisy copies each, then independent columns
        cols = []
        for _ in range(3):
            z = rng.standard_normal((n, 1))
            cols.append(z + 0.1 * rng.standard_normal((n, 5)))
        cols.append(rng.standard_normal((n, spec.p - 15)))
        return np.hstack(cols)
    # latent_groups_wide: the 15-column AR block in front of independent noise
    lead = rng.standard_normal((n, 15)) @ ar1_cholesky(15, spec.r).T
    rest = rng.standard_normal((n, spec.p - 15))
    return np.hstack([lead, rest])


def _design_rng(spec: ScenarioSpec, seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, _DESIGN_STREAM, spec.id)))


def _noise_rng(spec: ScenarioSpec, seed: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, _NOISE_STREAM, spec.id, replicate)))


def fixed_design(spec: ScenarioSpec, seed: int):
    """The standardized covariate matrices (train, valid, test) for a run."""
    rng = _design_rng(spec, seed)
    out = []
    for n in (spec.n_train, spec.n_valid, spec.n_test):
        raw = _draw_raw(spec, rng, n)
        out.append(_center_scale(raw)[2])
    return tuple(out)


def generate_scenario(spec: ScenarioSpec, seed: int, replicate: int = 0):
    """Datasets (train, valid, test) of one replicate plus the true beta0.

    The responses are x beta0 plus fresh N(0, sigma^2) noise on the fixed
    standardized design; beta0 therefore lives on the same scale the
    fitters see.  The returned datasets are raw in the sense that their
    responses are not centered.
    """
    designs = fixed_design(spec, seed)
    rng = _noise_rng(spec, seed, replicate)
    sets = []
    for x in designs:
        y = x @ spec.beta0 + spec.sigma * rng.standard_normal(x.shape[0])
        sets.append(Dataset(x, y))
    return sets[0], sets[1], sets[2], spec.beta0.copy()
