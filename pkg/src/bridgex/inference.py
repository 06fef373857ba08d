"""Standard errors for the selected submodel and spectrum diagnostics.

The standard-error recipe treats the selected support as the model: with
K the nonzero set, Sigma_1 = X_K'X_K / n and sigma^2 estimated from the
residual sum of squares over n - |K| degrees of freedom,

    se_j = sigma_hat * sqrt( (Sigma_1^{-1})_jj / n ).

Eigenvalue summaries come from a hand-rolled cyclic Jacobi sweep so that
repeated runs agree to the last bit.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import Dataset
from .errors import (
    DimensionMismatch,
    NoSelection,
    NotStandardized,
    SingularSelectedGram,
)

_JACOBI_REL_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 60


def symmetric_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix, cyclic Jacobi method."""
    a = np.ascontiguousarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"need a square matrix, got {a.shape}")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-10 * (1.0 + np.abs(a).max())):
        raise DimensionMismatch("matrix is not symmetric")
    return _kernels.jacobi_eigenvalues(a, _JACOBI_REL_TOL, _JACOBI_MAX_SWEEPS)


@dataclass(frozen=True)
class StdErrReport:
    selected: np.ndarray
    se: np.ndarray
    sigma_hat_sq: float
    df_used: int


def standard_errors(data: Dataset, fit) -> StdErrReport:
    """Submodel standard errors for the nonzero coefficients of ``fit``.

    ``se`` is ordered like ``selected``.  Raises NoSelection for an
    all-zero fit and SingularSelectedGram when the selected columns are
    numerically dependent.  Requires |K| < n so the variance estimate has
    positive degrees of freedom.
    """
    if not data.standardized:
        raise NotStandardized("standard errors require the standardized design")
    beta = fit.coefficients.values
    if beta.shape != (data.p,):
        raise DimensionMismatch("fit does not match the dataset")
    selected = fit.coefficients.nonzero_indices
    k = selected.size
    if k == 0:
        raise NoSelection("no nonzero coefficients to report on")
    if k >= data.n:
        raise DimensionMismatch(f"need fewer selected columns than rows, got {k} >= {data.n}")
    x1 = data.x[:, selected]
    resid = data.y - data.x @ beta
    df = data.n - k
    sigma_sq = float(resid @ resid) / df
    sigma1 = x1.T @ x1 / data.n
    eig = symmetric_eigenvalues(sigma1)
    if eig[0] <= 1e-12 * max(eig[-1], 0.0):
        raise SingularSelectedGram("selected columns are numerically dependent")
    inv_diag = np.diag(np.linalg.solve(sigma1, np.eye(k)))
    se = np.sqrt(sigma_sq * inv_diag / data.n)
    return StdErrReport(selected, se, sigma_sq, df)


@dataclass(frozen=True)
class EigenDiagnostics:
    """Spectrum summaries; the tau and cross fields are None when the
    selected set is empty (or, for cross_max, when nothing is excluded)."""

    rho_min: float
    rho_max: float
    tau_min: float | None
    tau_max: float | None
    cross_max: float | None


def eigen_diagnostics(data: Dataset, selected=None) -> EigenDiagnostics:
    """Extreme eigenvalues of X'X/n, of the selected block, and the largest
    scaled cross-moment between excluded and selected columns."""
    if not data.standardized:
        raise NotStandardized("diagnostics require the standardized design")
    selected = np.asarray([] if selected is None else selected, dtype=int)
    if selected.size and (selected.min() < 0 or selected.max() >= data.p):
        raise DimensionMismatch("selected indices out of range")
    if np.unique(selected).size != selected.size:
        raise DimensionMismatch("selected indices repeat")
    sigma = data.x.T @ data.x / data.n
    eig = _kernels.jacobi_eigenvalues(sigma, _JACOBI_REL_TOL, _JACOBI_MAX_SWEEPS)
    rho_min, rho_max = float(eig[0]), float(eig[-1])
    tau_min = tau_max = cross_max = None
    if selected.size:
        sub = sigma[np.ix_(selected, selected)]
        eig1 = _kernels.jacobi_eigenvalues(sub, _JACOBI_REL_TOL, _JACOBI_MAX_SWEEPS)
        tau_min, tau_max = float(eig1[0]), float(eig1[-1])
        rest = np.setdiff1d(np.arange(data.p), selected)
        if rest.size:
            cross = data.x[:, rest].T @ data.x[:, selected] / np.sqrt(data.n)
            cross_max = float(np.abs(cross).max())
    return EigenDiagnostics(rho_min, rho_max, tau_min, tau_max, cross_max)
