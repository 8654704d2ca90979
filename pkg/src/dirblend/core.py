"""Shared data model: class catalogs, prediction matrices, labels, weights.

All containers are immutable after construction (numpy buffers are marked
read-only), so instances can be shared freely across threads. Raw
probability arrays enter the model through :func:`validate_matrix`, which
checks the row-stochastic invariants and renormalizes small drift away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    EmptyMemberSetError,
    InvalidShapeError,
    LengthMismatchError,
    NegativeEntryError,
    NonFiniteError,
    OutOfRangeError,
    RowSumError,
    ShapeMismatchError,
    ValidationError,
    WeightCountMismatchError,
)

DEFAULT_ROW_SUM_TOLERANCE = 1e-6

# Rows whose sum is already this close to 1 are left untouched. The value
# sits far above the ~1e-14 residual a single renormalizing division can
# leave behind (which makes validation idempotent bit-for-bit) and far
# below the 1e-12 accumulation error the model tolerates.
_EXACT_SUM_EPS = 5e-13

WEIGHT_SUM_TOLERANCE = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _check_probabilities(arr: np.ndarray, tolerance: float) -> np.ndarray:
    """Shared gate for probability matrices; returns the row sums."""
    if arr.ndim != 2:
        raise InvalidShapeError(f"prediction matrix must be 2-D, got {arr.ndim}-D")
    n, c = arr.shape
    if n < 1:
        raise InvalidShapeError("prediction matrix needs at least one row")
    if c < 2:
        raise InvalidShapeError(f"prediction matrix needs at least 2 columns, got {c}")
    finite = np.isfinite(arr)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise NonFiniteError(f"non-finite entry {arr[i, j]!r} at row {i}, column {j}")
    negative = arr < 0
    if negative.any():
        i, j = np.argwhere(negative)[0]
        raise NegativeEntryError(f"negative entry {arr[i, j]!r} at row {i}, column {j}")
    sums = arr.sum(axis=1)
    out_of_tol = np.abs(sums - 1.0) > tolerance
    if out_of_tol.any():
        i = int(np.argmax(out_of_tol))
        raise RowSumError(f"row {i} sums to {sums[i]!r}, outside 1 +/- {tolerance}")
    return sums


@dataclass(frozen=True)
class ClassCatalog:
    """Ordered list of unique class names; fixes column meaning for a run."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if len(names) < 2:
            raise InvalidShapeError(f"need at least 2 classes, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValidationError("class names must be unique")

    @property
    def num_classes(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    @classmethod
    def generic(cls, num_classes: int) -> "ClassCatalog":
        """Catalog with placeholder names class_0 .. class_{C-1}."""
        return cls(tuple(f"class_{i}" for i in range(num_classes)))


@dataclass(frozen=True)
class PredictionMatrix:
    """Row-stochastic N x C matrix of one classifier's class probabilities.

    The constructor rejects malformed input (non-finite or negative
    entries, row sums off by more than the default tolerance) but never
    rewrites it; cleaning up sub-tolerance drift from external data is
    :func:`validate_matrix`'s job.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        _check_probabilities(arr, DEFAULT_ROW_SUM_TOLERANCE)
        object.__setattr__(self, "values", _frozen(arr))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def num_classes(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LabelVector:
    """Ground-truth class indices aligned with a prediction matrix's rows."""

    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.ndim != 1:
            raise InvalidShapeError(f"labels must be 1-D, got {arr.ndim}-D")
        if arr.size < 1:
            raise InvalidShapeError("label vector must not be empty")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(arr == np.floor(arr)):
                raise OutOfRangeError("labels must be integers")
            arr = arr.astype(np.int64)
        else:
            arr = arr.astype(np.int64)
        c = int(self.num_classes)
        if c < 2:
            raise InvalidShapeError(f"need at least 2 classes, got {c}")
        if arr.min() < 0 or arr.max() >= c:
            bad = int(np.argmax((arr < 0) | (arr >= c)))
            raise OutOfRangeError(
                f"label {int(arr[bad])} at position {bad} outside [0, {c})"
            )
        object.__setattr__(self, "labels", _frozen(arr))
        object.__setattr__(self, "num_classes", c)

    def __len__(self) -> int:
        return int(self.labels.size)

    def class_counts(self) -> np.ndarray:
        """Number of samples per class, length C."""
        return np.bincount(self.labels, minlength=self.num_classes)


@dataclass(frozen=True)
class WeightVector:
    """Point on the probability simplex: K nonnegative weights summing to 1."""

    weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidShapeError("weights must be a non-empty 1-D vector")
        if not np.isfinite(arr).all():
            raise NonFiniteError("weights contain a non-finite value")
        if (arr < 0).any():
            raise NegativeEntryError(f"negative weight {arr[arr < 0][0]!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise RowSumError(
                f"weights sum to {total!r}, outside 1 +/- {WEIGHT_SUM_TOLERANCE}"
            )
        object.__setattr__(self, "weights", _frozen(arr))

    def __len__(self) -> int:
        return int(self.weights.size)

    @classmethod
    def vertex(cls, size: int, index: int) -> "WeightVector":
        """One-hot weight vector selecting a single member."""
        w = np.zeros(size)
        w[index] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, size: int) -> "WeightVector":
        return cls(np.full(size, 1.0 / size))


@dataclass(frozen=True)
class Member:
    """One ensemble member: a name plus its per-split prediction matrices."""

    name: str
    validation: PredictionMatrix
    test: PredictionMatrix


@dataclass(frozen=True)
class MemberSet:
    """K members with mutually consistent shapes, tied to one catalog.

    When no catalog is given, a generic one (class_0 ..) matching the
    first member's column count is attached.
    """

    members: tuple[Member, ...]
    catalog: ClassCatalog | None = None

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise EmptyMemberSetError("member set must contain at least one member")
        names = [m.name for m in members]
        if len(set(names)) != len(names):
            raise ValidationError("member names must be unique")
        if self.catalog is None:
            object.__setattr__(
                self, "catalog", ClassCatalog.generic(members[0].validation.num_classes)
            )
        c = self.catalog.num_classes
        n_val = members[0].validation.n_rows
        n_test = members[0].test.n_rows
        for m in members:
            if m.validation.num_classes != c or m.test.num_classes != c:
                raise ShapeMismatchError(
                    f"member {m.name!r} has {m.validation.num_classes} classes, "
                    f"catalog has {c}"
                )
            if m.validation.n_rows != n_val:
                raise ShapeMismatchError(
                    f"member {m.name!r} has {m.validation.n_rows} validation rows, "
                    f"expected {n_val}"
                )
            if m.test.n_rows != n_test:
                raise ShapeMismatchError(
                    f"member {m.name!r} has {m.test.n_rows} test rows, expected {n_test}"
                )

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def num_classes(self) -> int:
        return self.catalog.num_classes

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.members)

    @property
    def validation_matrices(self) -> list[PredictionMatrix]:
        return [m.validation for m in self.members]

    @property
    def test_matrices(self) -> list[PredictionMatrix]:
        return [m.test for m in self.members]


def validate_matrix(
    values, tolerance: float = DEFAULT_ROW_SUM_TOLERANCE
) -> PredictionMatrix:
    """Check raw probabilities and return a validated PredictionMatrix.

    Every entry must be finite and nonnegative, and every row sum must lie
    in [1 - tolerance, 1 + tolerance]. Rows within tolerance but not
    already summing to 1 are renormalized (divided by their sum), so small
    drift from finite-precision exporters is absorbed rather than
    rejected. Validating the returned matrix again changes nothing.
    """
    arr = np.array(values, dtype=np.float64)
    sums = _check_probabilities(arr, tolerance)
    needs = np.abs(sums - 1.0) > _EXACT_SUM_EPS
    if needs.any():
        arr[needs] = arr[needs] / sums[needs, None]
    return PredictionMatrix(arr)


def argmax_class(row: Sequence[float] | np.ndarray) -> int:
    """Index of the largest probability; ties break to the lowest index."""
    arr = np.asarray(row)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidShapeError("argmax_class expects a non-empty 1-D row")
    return int(np.argmax(arr))


def predicted_classes(preds: PredictionMatrix) -> np.ndarray:
    """Row-wise argmax with the same lowest-index tie-break as argmax_class."""
    return np.argmax(preds.values, axis=1)


def check_aligned(preds: PredictionMatrix, labels: LabelVector) -> None:
    """Raise unless predictions and labels describe the same samples."""
    if preds.n_rows != len(labels):
        raise LengthMismatchError(
            f"{preds.n_rows} prediction rows vs {len(labels)} labels"
        )
    if preds.num_classes != labels.num_classes:
        raise ShapeMismatchError(
            f"{preds.num_classes} prediction columns vs "
            f"{labels.num_classes} label classes"
        )


def check_weight_count(weights: WeightVector, expected: int) -> None:
    if len(weights) != expected:
        raise WeightCountMismatchError(
            f"{len(weights)} weights for {expected} members"
        )
