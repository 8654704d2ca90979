"""Evaluation metrics for probabilistic classifiers.

Accuracy, mean categorical cross-entropy (natural log), confusion matrix,
and per-class precision/recall. All functions are pure over immutable
inputs, so members can be evaluated in parallel without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LabelVector, PredictionMatrix, check_aligned, predicted_classes
from .errors import InvalidShapeError, ValidationError

# Clip floor for log terms: keeps degenerate exports (p_true == 0) finite
# without materially changing non-degenerate losses.
DEFAULT_EPSILON = 1e-12


def format_percent(fraction: float) -> str:
    """Render a fraction as a percentage with two decimals, e.g. '98.88%'."""
    return f"{100.0 * fraction:.2f}%"


@dataclass(frozen=True)
class ConfusionMatrix:
    """C x C counts; rows index the true class, columns the predicted one."""

    counts: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.counts)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidShapeError("confusion matrix must be square")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(arr == np.floor(arr)):
                raise ValidationError("confusion counts must be integers")
        arr = arr.astype(np.int64)
        if (arr < 0).any():
            raise ValidationError("confusion counts must be nonnegative")
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def n_samples(self) -> int:
        return int(self.counts.sum())

    def accuracy(self) -> float:
        """Diagonal mass over total count."""
        return float(np.trace(self.counts)) / self.n_samples


@dataclass(frozen=True)
class MetricSummary:
    """Accuracy and loss of one classifier on one split."""

    accuracy: float
    loss: float
    n_samples: int

    @property
    def accuracy_percent(self) -> str:
        return format_percent(self.accuracy)


@dataclass(frozen=True)
class ClassSummary:
    """Per-class precision/recall; None where the denominator is empty."""

    index: int
    support: int
    recall: float | None
    precision: float | None


def accuracy(preds: PredictionMatrix, labels: LabelVector) -> float:
    """Fraction of rows whose argmax equals the true label."""
    check_aligned(preds, labels)
    return float(np.mean(predicted_classes(preds) == labels.labels))


def cross_entropy(
    preds: PredictionMatrix,
    labels: LabelVector,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """Mean over rows of -ln(max(p_true, epsilon)), natural log."""
    check_aligned(preds, labels)
    if not epsilon > 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon!r}")
    p_true = preds.values[np.arange(preds.n_rows), labels.labels]
    return float(np.mean(-np.log(np.maximum(p_true, epsilon))))


def confusion(preds: PredictionMatrix, labels: LabelVector) -> ConfusionMatrix:
    """counts[t][p] = number of samples with true class t predicted as p."""
    check_aligned(preds, labels)
    c = labels.num_classes
    pred = predicted_classes(preds)
    flat = np.bincount(labels.labels * c + pred, minlength=c * c)
    return ConfusionMatrix(flat.reshape(c, c))


def summarize(
    preds: PredictionMatrix,
    labels: LabelVector,
    epsilon: float = DEFAULT_EPSILON,
) -> MetricSummary:
    """Accuracy and cross-entropy of one matrix against its labels."""
    return MetricSummary(
        accuracy=accuracy(preds, labels),
        loss=cross_entropy(preds, labels, epsilon),
        n_samples=preds.n_rows,
    )


def per_class_summary(cm: ConfusionMatrix) -> list[ClassSummary]:
    """Recall (diag/row-sum) and precision (diag/col-sum) per class.

    Empty denominators yield None rather than 0: a class never seen or
    never predicted has no defined rate.
    """
    diag = np.diag(cm.counts)
    row_sums = cm.counts.sum(axis=1)
    col_sums = cm.counts.sum(axis=0)
    out = []
    for i in range(cm.num_classes):
        recall = float(diag[i]) / row_sums[i] if row_sums[i] > 0 else None
        precision = float(diag[i]) / col_sums[i] if col_sums[i] > 0 else None
        out.append(
            ClassSummary(
                index=i,
                support=int(row_sums[i]),
                recall=recall,
                precision=precision,
            )
        )
    return out
