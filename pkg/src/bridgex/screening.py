"""Marginal screening by the closed-form univariate zero test.

For the one-dimensional problem g(u) = u^2 - 2au + lam * |u|^gamma the
minimizer is exactly zero precisely when lam > c(gamma) * |a|^(2 - gamma).
Screening applies that test to each column's marginal statistic a_j =
x_j'y / n, which makes it usable when p far exceeds n; a second-stage fit
on the surviving columns gives the final estimate.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import InvalidGamma, NotStandardized, TooManySelected


def c_gamma(gamma: float) -> float:
    """Threshold constant of the univariate zero test, on (0, 1].

    c(1) = 2 recovers soft thresholding; the constant grows toward the
    concave end of the range.
    """
    if not 0.0 < gamma <= 1.0:
        raise InvalidGamma(f"threshold constant defined for exponents in (0, 1], got {gamma}")
    return (2.0 / (2.0 - gamma)) * (2.0 * (1.0 - gamma) / (2.0 - gamma)) ** (1.0 - gamma)


def univariate_argmin_is_zero(a: float, lam: float, gamma: float) -> bool:
    """True when u^2 - 2au + lam|u|^gamma is minimized at exactly zero.

    Boundary equality counts as a nonzero minimizer, so screening keeps
    the column.
    """
    if not 0.0 < gamma < 1.0:
        raise InvalidGamma(f"zero test needs an exponent in (0, 1), got {gamma}")
    if lam < 0.0:
        raise ValueError("penalty weight must be >= 0")
    if a == 0.0:
        return True
    return lam > c_gamma(gamma) * abs(a) ** (2.0 - gamma)


@dataclass(frozen=True)
class ScreenResult:
    """Marginal statistics and the surviving column set.

    ``selected`` holds the column indices j with lambda_over_n <=
    threshold_rhs[j], in increasing order; columns whose marginal statistic
    is exactly zero are never selected.
    """

    marginal_stat: np.ndarray
    threshold_rhs: np.ndarray
    selected: np.ndarray
    lambda_over_n: float
    gamma: float


def marginal_screen(data: Dataset, penalty) -> ScreenResult:
    """Apply the univariate zero test to every column's marginal statistic."""
    if not data.standardized:
        raise NotStandardized("screening requires a standardized dataset")
    if not 0.0 < penalty.gamma < 1.0:
        raise InvalidGamma(f"screening needs an exponent in (0, 1), got {penalty.gamma}")
    a = data.x.T @ data.y / data.n
    rhs = c_gamma(penalty.gamma) * np.abs(a) ** (2.0 - penalty.gamma)
    lam_over_n = penalty.lam / data.n
    keep = (a != 0.0) & (lam_over_n <= rhs)
    return ScreenResult(a, rhs, np.flatnonzero(keep), lam_over_n, penalty.gamma)


def two_step_fit(
    data: Dataset,
    screen_penalty,
    second_stage: str = "ols",
    second_penalty=None,
    config=None,
):
    """Marginal screen followed by a fit on the surviving columns.

    ``second_stage`` is "ols" or "bridge"; the bridge stage uses
    ``second_penalty`` (weight ``second_stage_lam`` of ``screen_penalty``
    when omitted).  Screened-out coordinates are exact zeros in the
    returned length-p fit.  An empty screen is not an error: the result is
    the all-zero fit carrying a warning flag.  A selection of at least n
    columns cannot be followed by least squares and raises TooManySelected.
    """
    from .solvers import (
        CoefficientPartition,
        FitResult,
        PenaltySpec,
        bridge_fit,
        objective,
        ols_fit,
    )

    if second_stage not in ("ols", "bridge"):
        raise ValueError(f"unknown second stage {second_stage!r}")
    screen = marginal_screen(data, screen_penalty)
    method = f"twostep_{second_stage}"
    if screen.selected.size == 0:
        beta = np.zeros(data.p)
        value = objective(data, beta, PenaltySpec(0.0, 1.0))
        fit = FitResult(
            CoefficientPartition.from_values(beta), 0, True, value, method,
            warning="empty selection, returning the zero fit",
        )
        return fit, screen
    if second_stage == "ols" and screen.selected.size >= data.n:
        raise TooManySelected(
            f"{screen.selected.size} columns survived screening but n={data.n}"
        )
    sub = data.restrict(screen.selected)
    if second_stage == "ols":
        stage = ols_fit(sub)
    else:
        if second_penalty is None:
            second_penalty = PenaltySpec(screen_penalty.second_stage_lam, screen_penalty.gamma)
        stage = bridge_fit(sub, second_penalty, config)
    beta = np.zeros(data.p)
    beta[screen.selected] = stage.coefficients.values
    pen = second_penalty if second_stage == "bridge" else PenaltySpec(0.0, 1.0)
    value = objective(data, beta, pen)
    fit = FitResult(
        CoefficientPartition.from_values(beta),
        stage.iterations,
        stage.converged,
        value,
        method,
        warning=stage.warning,
    )
    return fit, screen
