"""Dataset container, centering/scaling and CSV ingestion.

All estimators in this package expect the design in the standardized form:
response summing to zero, each covariate column centered with mean square one
(the 1/n convention, not 1/(n-1)).  ``standardize`` produces that form and
records the offsets and scales of the training data so that predictions for
new rows can be mapped back to the original scale.
"""

from dataclasses import dataclass
import csv

import numpy as np

from .errors import (
    ConstantColumn,
    DataError,
    DimensionMismatch,
    NonFiniteInput,
)

# slack for the standardization invariants checked on construction
_STD_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Immutable design matrix plus response.

    Parameters
    ----------
    x : ndarray, shape (n, p)
    y : ndarray, shape (n,)
    standardized : bool
        True when the columns of ``x`` are centered with unit mean square
        and ``y`` sums to zero.
    centering_offsets : ndarray, shape (p + 1,), optional
        Column means of the pre-standardization covariates followed by the
        pre-standardization response mean.  Retained for prediction.
    column_scales : ndarray, shape (p,), optional
        Root mean squares of the centered covariate columns, in the same
        order.  Retained for prediction.
    """

    x: np.ndarray
    y: np.ndarray
    standardized: bool = False
    centering_offsets: np.ndarray | None = None
    column_scales: np.ndarray | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.ndim != 2 or y.ndim != 1:
            raise DimensionMismatch(f"x must be 2-d and y 1-d, got {x.shape} and {y.shape}")
        if x.shape[0] != y.shape[0]:
            raise DimensionMismatch(f"{x.shape[0]} rows of x but {y.shape[0]} responses")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise DimensionMismatch("need at least one row and one column")
        if not np.isfinite(x).all() or not np.isfinite(y).all():
            raise NonFiniteInput("design or response contains nan or inf")
        if self.centering_offsets is not None:
            off = np.asarray(self.centering_offsets, dtype=float)
            object.__setattr__(self, "centering_offsets", off)
            if off.shape != (x.shape[1] + 1,):
                raise DimensionMismatch("centering_offsets must have length p + 1")
        if self.column_scales is not None:
            sc = np.asarray(self.column_scales, dtype=float)
            object.__setattr__(self, "column_scales", sc)
            if sc.shape != (x.shape[1],):
                raise DimensionMismatch("column_scales must have length p")
        if self.standardized:
            n = x.shape[0]
            if abs(y.mean()) > _STD_TOL:
                raise NonFiniteInput("standardized flag set but response mean is not 0")
            col_mean = x.mean(axis=0)
            col_msq = (x * x).sum(axis=0) / n
            if np.abs(col_mean).max() > _STD_TOL or np.abs(col_msq - 1.0).max() > _STD_TOL:
                raise NonFiniteInput("standardized flag set but columns are not standardized")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def restrict(self, columns) -> "Dataset":
        """Dataset keeping only the given covariate columns (response unchanged)."""
        columns = np.asarray(columns, dtype=int)
        off = None
        if self.centering_offsets is not None:
            off = np.append(self.centering_offsets[columns], self.centering_offsets[-1])
        sc = self.column_scales[columns] if self.column_scales is not None else None
        return Dataset(self.x[:, columns], self.y, self.standardized, off, sc)


def _center_scale(x: np.ndarray):
    """Column means, root mean squares of the centered columns, scaled matrix."""
    n = x.shape[0]
    means = x.mean(axis=0)
    centered = x - means
    scales = np.sqrt((centered * centered).sum(axis=0) / n)
    dead = np.flatnonzero(scales == 0.0)
    if dead.size:
        raise ConstantColumn(int(dead[0]))
    return means, scales, centered / scales


def standardize(raw: Dataset) -> Dataset:
    """Center and scale a dataset to the unit-mean-square convention.

    The response is centered, each covariate column is centered and divided
    by its root mean square.  The offsets and scales of ``raw`` are stored
    on the result for later prediction.  Requires n >= 2.
    """
    if raw.n < 2:
        raise DimensionMismatch("standardization needs at least two rows")
    means, scales, xs = _center_scale(raw.x)
    y_mean = raw.y.mean()
    offsets = np.append(means, y_mean)
    return Dataset(xs, raw.y - y_mean, True, offsets, scales)


def predict(x_new: np.ndarray, coefficients: np.ndarray, train: Dataset):
    """Predicted response for new covariate rows on the original scale.

    ``train`` must be the standardized dataset the coefficients were fitted
    on; its stored offsets and scales are applied to ``x_new`` before the
    inner product, and the training response mean is added back.
    Accepts a single row or an (m, p) matrix.
    """
    if train.centering_offsets is None or train.column_scales is None:
        raise DimensionMismatch("training dataset carries no standardization offsets")
    x_new = np.asarray(x_new, dtype=float)
    single = x_new.ndim == 1
    rows = np.atleast_2d(x_new)
    if rows.shape[1] != train.p:
        raise DimensionMismatch(f"expected {train.p} covariates, got {rows.shape[1]}")
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (train.p,):
        raise DimensionMismatch("coefficient vector does not match the design")
    scaled = (rows - train.centering_offsets[:-1]) / train.column_scales
    out = scaled @ coefficients + train.centering_offsets[-1]
    return float(out[0]) if single else out


def load_csv(path, response: str):
    """Read a delimited file into a raw Dataset.

    First row is the header; the column named ``response`` becomes y and
    every other column is parsed as a numeric covariate.  Returns the
    dataset together with the covariate names in column order.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if response not in header:
            raise DataError(f"{path}: no column named {response!r}")
        y_col = header.index(response)
        names = [h for i, h in enumerate(header) if i != y_col]
        if not names:
            raise DataError(f"{path}: no covariate columns besides the response")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    table = np.asarray(rows, dtype=float)
    mask = np.ones(len(header), dtype=bool)
    mask[y_col] = False
    try:
        data = Dataset(table[:, mask], table[:, y_col])
    except NonFiniteInput:
        raise DataError(f"{path}: non-finite value in the data") from None
    return data, names
