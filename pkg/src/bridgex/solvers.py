"""Penalized least-squares fitters on standardized data.

The central routine is ``bridge_fit``, gradient descent on a smoothed
version of

    L(beta) = sum_i (y_i - x_i' beta)^2 + lam * sum_j |beta_j|^gamma

with 0 < gamma < 1.  ``ols_fit``, ``ridge_fit``, ``lasso_fit`` and
``enet_fit`` cover the reference methods the benchmark compares against.
All fitters require a standardized Dataset and report coefficients on the
standardized scale.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .data import Dataset
from .errors import (
    DimensionMismatch,
    InvalidGamma,
    NotStandardized,
    SingularDesign,
)
from .screening import c_gamma

# stationarity slack accepted by the l1 solvers, as a multiple of n
_KKT_TOL = 1e-6


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty weight and exponent; gamma = 1 is the l1 penalty, 2 is ridge."""

    lam: float
    gamma: float = 0.5
    second_stage_lam: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0.0:
            raise ValueError(f"penalty weight must be finite and >= 0, got {self.lam}")
        if not (0.0 < self.gamma <= 1.0 or self.gamma == 2.0):
            raise InvalidGamma(f"penalty exponent must be in (0, 1] or exactly 2, got {self.gamma}")
        if self.second_stage_lam < 0.0:
            raise ValueError("second-stage penalty weight must be >= 0")


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls shared by the iterative fitters.

    tol doubles as the zero-snap threshold of the bridge solver; eta_floor
    is the minimum smoothing of the penalty gradient and defaults to tol.
    """

    tol: float = 1e-4
    step: float = 2e-3
    eta_floor: float | None = None
    max_iter: int = 200000

    def __post_init__(self):
        if self.tol <= 0.0 or self.step <= 0.0 or self.max_iter < 1:
            raise ValueError("tol and step must be positive, max_iter at least 1")
        if self.eta_floor is None:
            object.__setattr__(self, "eta_floor", self.tol)
        elif self.eta_floor <= 0.0:
            raise ValueError("eta_floor must be positive")


@dataclass(frozen=True)
class CoefficientPartition:
    """Coefficient vector split into its exact-zero and nonzero index sets."""

    values: np.ndarray
    nonzero_indices: np.ndarray
    zero_indices: np.ndarray

    @classmethod
    def from_values(cls, values: np.ndarray) -> "CoefficientPartition":
        values = np.asarray(values, dtype=float)
        nz = np.flatnonzero(values != 0.0)
        z = np.flatnonzero(values == 0.0)
        return cls(values, nz, z)

    @property
    def n_selected(self) -> int:
        return int(self.nonzero_indices.size)


@dataclass(frozen=True)
class FitResult:
    coefficients: CoefficientPartition
    iterations: int
    converged: bool
    objective: float
    method: str
    warning: str | None = None


def objective(data: Dataset, beta: np.ndarray, penalty: PenaltySpec) -> float:
    """Penalized residual sum of squares at ``beta``."""
    if not data.standardized:
        raise NotStandardized("objective is defined on standardized data")
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.p,):
        raise DimensionMismatch(f"expected {data.p} coefficients, got {beta.shape}")
    resid = data.y - data.x @ beta
    return float(resid @ resid + penalty.lam * np.sum(np.abs(beta) ** penalty.gamma))


def _gram(data: Dataset):
    x = np.ascontiguousarray(data.x)
    return x.T @ x, x.T @ data.y


def _require_standardized(data: Dataset):
    if not data.standardized:
        raise NotStandardized("fitters require a standardized dataset")


def bridge_fit(data: Dataset, penalty: PenaltySpec, config: SolverConfig | None = None) -> FitResult:
    """Minimize the bridge objective by smoothed gradient descent.

    The algorithm starts from zero and follows g1 - g2, where g1 = X'(y - X beta)
    and g2 is the penalty gradient smoothed by eta:

        g2_j = (lam * gamma / 2) * sign(beta_j) / (|beta_j|^(1 - gamma) + eta)

    The direction is rescaled whenever its largest component exceeds one, so
    steps never move any coordinate by more than ``step``.  Near-zero
    coordinates are held by the domination rule, steps that would cross zero
    stop there, and a coordinate sitting at zero rejoins the descent only if
    zero fails the closed-form one-dimensional test against its current
    residual correlation.  On stopping, coordinates within ``tol`` of zero
    are reported as exact zeros.

    Non-convergence within ``max_iter`` is reported through the result
    flag, not an exception.
    """
    _require_standardized(data)
    if not 0.0 < penalty.gamma < 1.0:
        raise InvalidGamma(f"bridge penalty exponent must be in (0, 1), got {penalty.gamma}")
    cfg = config or SolverConfig()
    gram, xty = _gram(data)
    beta, iters, ok = _kernels.bridge_descend(
        gram,
        xty,
        float(data.n),
        float(penalty.lam),
        float(penalty.gamma),
        cfg.tol,
        cfg.step,
        cfg.eta_floor,
        cfg.max_iter,
        c_gamma(penalty.gamma),
    )
    value = objective(data, beta, penalty)
    assert value <= data.y @ data.y + 1e-9 * (1.0 + data.y @ data.y)
    return FitResult(CoefficientPartition.from_values(beta), iters, ok, value, "bridge")


def _spd_solve(a: np.ndarray, b: np.ndarray, err: str) -> np.ndarray:
    eig = np.linalg.eigvalsh(a)
    if eig[0] <= 1e-12 * max(eig[-1], 0.0):
        raise SingularDesign(err)
    return np.linalg.solve(a, b)


def ols_fit(data: Dataset) -> FitResult:
    """Least squares on all columns; requires p < n and a well-posed Gram."""
    _require_standardized(data)
    if data.p >= data.n:
        raise SingularDesign(f"least squares needs p < n, got p={data.p}, n={data.n}")
    gram, xty = _gram(data)
    beta = _spd_solve(gram, xty, "Gram matrix is numerically singular")
    value = objective(data, beta, PenaltySpec(0.0, 1.0))
    return FitResult(CoefficientPartition.from_values(beta), 1, True, value, "ols")


def ridge_fit(data: Dataset, lam: float) -> FitResult:
    _require_standardized(data)
    penalty = PenaltySpec(lam, 2.0)
    gram, xty = _gram(data)
    beta = _spd_solve(
        gram + penalty.lam * np.eye(data.p), xty, "ridge system is numerically singular"
    )
    value = objective(data, beta, penalty)
    return FitResult(CoefficientPartition.from_values(beta), 1, True, value, "ridge")


def _cd_fit(data, lam1, lam2, config, method):
    cfg = config or SolverConfig()
    gram, xty = _gram(data)
    # fixed-point tolerance chosen so the stationarity residual 2n*delta
    # stays within _KKT_TOL * n
    beta, iters, ok = _kernels.cd_elastic_net(
        gram, xty, float(data.n), float(lam1), float(lam2), 0.25 * _KKT_TOL, cfg.max_iter
    )
    resid = data.y - data.x @ beta
    value = float(resid @ resid + lam1 * np.abs(beta).sum() + lam2 * beta @ beta)
    return FitResult(CoefficientPartition.from_values(beta), iters, ok, value, method)


def lasso_fit(data: Dataset, penalty: PenaltySpec, config: SolverConfig | None = None) -> FitResult:
    """l1-penalized least squares by cyclic coordinate descent."""
    _require_standardized(data)
    if penalty.gamma != 1.0:
        raise InvalidGamma(f"l1 fitter needs penalty exponent 1, got {penalty.gamma}")
    return _cd_fit(data, penalty.lam, 0.0, config, "lasso")


def enet_fit(data: Dataset, lam1: float, lam2: float, config: SolverConfig | None = None) -> FitResult:
    """Elastic net: RSS + lam1 * l1 + lam2 * squared l2, coordinate descent."""
    _require_standardized(data)
    if lam1 < 0.0 or lam2 < 0.0:
        raise ValueError("penalty weights must be >= 0")
    return _cd_fit(data, lam1, lam2, config, "enet")
