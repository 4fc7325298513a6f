"""Simplex data and the maps between the simplex and Euclidean space.

Only the Helmert sub-matrix (a linear map) is ever applied to observed data, so zero parts are allowed in input
compositions. The inverse additive log-ratio map is used to generate logistic-normal samples.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import narwhals as nw
import numpy as np
import pandas as pd

from compmean.config import get_composition_tolerance, get_lazy
from compmean.errors import CompositionError, InvalidDimensionError
from compmean.validators.builder import build_composition_pipeline
from compmean.validators.context import ValidationContext

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

_UNIT_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Composition:
    """A single point of the closed simplex: D nonnegative parts summing to 1."""

    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise InvalidDimensionError(f"A composition needs at least 2 parts, got shape {values.shape}")
        if np.any(values < 0):
            raise CompositionError(f"Composition has negative parts: {values.tolist()}")
        if abs(values.sum() - 1.0) > _UNIT_SUM_TOLERANCE:
            raise CompositionError(f"Composition sums to {values.sum():.15g}, not 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def D(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class CompositionalSample:
    """n x D matrix of compositions, one row per observation."""

    data: NDArray[np.float64]

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=float)
        if data.ndim != 2:
            raise InvalidDimensionError(f"A compositional sample must be a 2-d array, got shape {data.shape}")
        if data.shape[1] < 2:
            raise InvalidDimensionError(f"Compositions need D >= 2 parts, got D = {data.shape[1]}")
        if data.shape[0] < 2:
            raise CompositionError(f"A compositional sample needs at least 2 rows, got {data.shape[0]}")
        if np.any(data < 0) or np.any(np.abs(data.sum(axis=1) - 1.0) > _UNIT_SUM_TOLERANCE):
            raise CompositionError("Sample rows must be nonnegative and sum to 1; use validate_sample() to clean them")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, rows: list[Composition]) -> CompositionalSample:
        dims = {row.D for row in rows}
        if len(dims) > 1:
            raise InvalidDimensionError(f"Rows have differing numbers of parts: {sorted(dims)}")
        return cls(np.vstack([row.values for row in rows]))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def D(self) -> int:
        return self.data.shape[1]

    @property
    def rows(self) -> list[Composition]:
        return [Composition(row) for row in self.data]


@dataclass(frozen=True)
class EuclideanSample:
    """n x d matrix of real observations, the space all test statistics work in."""

    data: NDArray[np.float64]

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=float)
        if data.ndim == 1:
            data = data[:, np.newaxis]
        if data.ndim != 2 or data.shape[1] < 1:
            raise InvalidDimensionError(f"A Euclidean sample must be an n x d array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("Euclidean sample contains non-finite values")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def helmert_submatrix(D: int) -> NDArray[np.float64]:
    """Return the (D-1) x D Helmert matrix with its first row dropped.

    Row k (1-based) holds 1/sqrt(k(k+1)) in its first k positions and -k/sqrt(k(k+1)) in position k+1; rows are
    orthonormal and each sums to zero.
    """
    if isinstance(D, bool) or not isinstance(D, (int, np.integer)) or D < 2:
        raise InvalidDimensionError(f"Helmert sub-matrix needs D >= 2, got {D!r}")
    H = np.zeros((D - 1, D))
    for k in range(1, D):
        scale = np.sqrt(k * (k + 1.0))
        H[k - 1, :k] = 1.0 / scale
        H[k - 1, k] = -k / scale
    return H


def helmert_transform(sample: CompositionalSample) -> EuclideanSample:
    """Map every composition x of the sample to y = Hx in d = D-1 dimensions."""
    H = helmert_submatrix(sample.D)
    if sample.data.shape[1] != H.shape[1]:
        raise InvalidDimensionError(f"Sample has {sample.data.shape[1]} parts, Helmert matrix expects {H.shape[1]}")
    return EuclideanSample(sample.data @ H.T)


def alr_inverse_rows(v: ArrayLike) -> NDArray[np.float64]:
    """Row-wise inverse additive log-ratio map with the last part as reference."""
    v = np.atleast_2d(np.asarray(v, dtype=float))
    if not np.all(np.isfinite(v)):
        raise ValueError("alr_inverse needs finite entries")
    # Shift jointly with the implicit 0 of the reference part so the largest exponent is 0.
    shift = np.maximum(v.max(axis=1, keepdims=True), 0.0)
    expo = np.exp(np.hstack([v, np.zeros((v.shape[0], 1))]) - shift)
    return expo / expo.sum(axis=1, keepdims=True)


def alr_inverse(v: ArrayLike) -> Composition:
    """x_i = e^{v_i} / (1 + sum_j e^{v_j}) for i <= d and x_D = 1 / (1 + sum_j e^{v_j})."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise InvalidDimensionError(f"alr_inverse takes a d-vector with d >= 1, got shape {v.shape}")
    return Composition(alr_inverse_rows(v)[0])


def _close_rows(data: NDArray[np.float64]) -> NDArray[np.float64]:
    clipped = np.clip(data, 0.0, None)
    return clipped / clipped.sum(axis=-1, keepdims=True)


def validate_composition(values: ArrayLike, tolerance: float | None = None) -> Composition:
    """Accept a D-vector as a composition if it is one up to ``tolerance``, then renormalize it exactly.

    Negative parts no smaller than -tolerance are clamped to 0.
    """
    tol = get_composition_tolerance(tolerance)
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise InvalidDimensionError(f"A composition needs at least 2 parts, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise CompositionError(f"Composition has non-finite parts: {values.tolist()}")
    if np.any(values < -tol):
        raise CompositionError(f"Composition has a negative part beyond tolerance {tol:g}: {values.tolist()}")
    total = values.sum()
    if abs(total - 1.0) > tol:
        raise CompositionError(f"Composition sums to {total:.15g}, not 1 within tolerance {tol:g}")
    return Composition(_close_rows(values))


def validate_sample(
    frame: Any,
    tolerance: float | None = None,
    lazy: bool | None = None,
    source: str = "",
    func_name: str = "",
    param_name: str | None = None,
) -> CompositionalSample:
    """Validate an n x D DataFrame (any narwhals backend) of compositions and return the renormalized sample."""
    tol = get_composition_tolerance(tolerance)
    ctx = ValidationContext(df=frame, source=source, func_name=func_name, param_name=param_name)
    build_composition_pipeline(tolerance=tol, lazy=get_lazy(lazy)).run(ctx)
    sample = sample_from_frame(ctx.nw_df)
    logger.debug("Validated %d compositions with %d parts%s", sample.n, sample.D, ctx.location)
    return sample


def sample_from_frame(frame: Any) -> CompositionalSample:
    """Close the rows of a frame that already passed validation, e.g. a @compositions_in argument."""
    data = nw.from_native(frame, eager_only=True).to_numpy().astype(float)
    return CompositionalSample(_close_rows(data))


def _has_header(path: Path) -> bool:
    with path.open(encoding="utf-8") as f:
        first = f.readline()
    for token in first.strip().split(","):
        try:
            float(token)
        except ValueError:
            return True
    return False


def read_compositions(path: str | Path, header: bool | None = None) -> pd.DataFrame:
    """Read a CSV of compositions (one row per observation, optional header) into a pandas DataFrame.

    ``header=True`` always takes the first line as part names and ``header=False`` always reads it as data. The
    default None treats the first line as a header only when some field in it is not a number.

    Rows with too many fields are rejected here; rows with too few fields come back padded with missing values,
    which :func:`validate_sample` reports.
    """
    path = Path(path)
    try:
        has_header = _has_header(path) if header is None else header
        frame = pd.read_csv(path, header=0 if has_header else None, skip_blank_lines=True)
    except pd.errors.ParserError as e:
        raise CompositionError(f"Ragged rows in {path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise CompositionError(f"{path} contains no data") from e
    frame.columns = [str(col) for col in frame.columns]
    return frame


def load_sample(
    path: str | Path,
    tolerance: float | None = None,
    lazy: bool | None = None,
    header: bool | None = None,
) -> CompositionalSample:
    """Read and validate a CSV of compositions; diagnostics cite the file and 0-based data row numbers."""
    return validate_sample(read_compositions(path, header), tolerance, lazy, source=str(path))
