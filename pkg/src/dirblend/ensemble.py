"""Weighted-average combination and randomized Dirichlet weight search.

The ensemble output is the convex blend of member probability matrices,

    out[i, j] = sum_k  w[k] * member_k[i, j],

with the weight vector w living on the (K-1)-simplex. Weights are chosen
by randomized search: candidate points are drawn from a symmetric
Dirichlet(alpha) distribution, scored on a validation split, and the best
candidate wins. The K one-hot vertex vectors are evaluated before any
random draw (by default), which guarantees the chosen ensemble never
scores below its best single member on the selection split — pure
Dirichlet sampling almost surely never proposes a vertex.

Determinism contract: the weight sample of trial t is a pure function of
(seed, t), and the winner is reduced with a total tie-break order
(accuracy desc, loss asc, candidate index asc). Trials are therefore
independent and could be evaluated in parallel without changing the
result; this implementation evaluates them serially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    MemberSet,
    LabelVector,
    PredictionMatrix,
    WeightVector,
    check_aligned,
    check_weight_count,
)
from .errors import InvalidAlphaError, ShapeMismatchError, ValidationError
from .metrics import ConfusionMatrix, MetricSummary, accuracy, confusion, cross_entropy
from .rng import CTX_SEARCH_TRIAL, derive_rng


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the randomized weight search.

    trials: number of Dirichlet draws scored after the vertices.
    alpha: symmetric concentration; 1.0 is uniform over the simplex.
    seed: base seed; trial t draws from a stream derived from (seed, t).
    include_vertices: score the K one-hot vectors before sampling.
    objective: candidate ranking; only "accuracy" (loss as tie-break).
    """

    trials: int = 1000
    alpha: float = 1.0
    seed: int = 0
    include_vertices: bool = True
    objective: str = "accuracy"

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        _check_alpha(self.alpha)
        if self.objective != "accuracy":
            raise ValidationError(
                f"unsupported objective {self.objective!r}; only 'accuracy'"
            )


@dataclass(frozen=True)
class SearchResult:
    """Winning weights plus the validation scores that selected them."""

    weights: WeightVector
    validation_accuracy: float
    validation_loss: float
    trial_index: int
    per_member_validation_accuracy: tuple[float, ...]


@dataclass(frozen=True)
class RepeatRun:
    seed: int
    test_accuracy: float
    test_loss: float


@dataclass(frozen=True)
class RepeatReport:
    """Per-run test scores of repeated searches plus their mean and std."""

    runs: tuple[RepeatRun, ...]
    mean_accuracy: float
    std_accuracy: float


def _check_alpha(alpha: float) -> None:
    if not math.isfinite(alpha) or alpha <= 0:
        raise InvalidAlphaError(f"alpha must be finite and > 0, got {alpha!r}")


def _stack(members: list[PredictionMatrix]) -> np.ndarray:
    """(K, N, C) view of member matrices; raises on mixed shapes."""
    shapes = {m.values.shape for m in members}
    if len(shapes) != 1:
        raise ShapeMismatchError(f"members have mixed shapes {sorted(shapes)}")
    return np.stack([m.values for m in members])


def _blend(stacked: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """sum_k weights[k] * stacked[k], the weighted-average arithmetic."""
    return np.tensordot(weights, stacked, axes=1)


def combine(
    members: list[PredictionMatrix], weights: WeightVector
) -> PredictionMatrix:
    """Weighted-average ensemble of K aligned prediction matrices.

    Rows of the output are convex combinations of stochastic rows, so they
    sum to 1 (within float accumulation) without renormalization, and the
    map is linear in the weights.
    """
    if not members:
        raise ValidationError("combine needs at least one member matrix")
    check_weight_count(weights, len(members))
    stacked = _stack(members)
    return PredictionMatrix(_blend(stacked, weights.weights))


def _gamma_simplex(
    k: int, alpha: float, rng: np.random.Generator, size: int
) -> np.ndarray:
    """(size, k) symmetric Dirichlet(alpha) draws via normalized gammas.

    K independent Gamma(alpha, 1) variates divided by their sum land on
    the simplex with exactly the Dirichlet law. Underflowed all-zero rows
    (possible for tiny alpha) are redrawn from the same stream.
    """
    draws = rng.gamma(alpha, 1.0, size=(size, k))
    sums = draws.sum(axis=1)
    while (sums == 0.0).any():
        dead = sums == 0.0
        draws[dead] = rng.gamma(alpha, 1.0, size=(int(dead.sum()), k))
        sums = draws.sum(axis=1)
    return draws / sums[:, None]


def dirichlet_sample(k: int, alpha: float, rng: np.random.Generator) -> WeightVector:
    """One point on the (K-1)-simplex, symmetric Dirichlet(alpha).

    Deterministic given the generator state; K = 1 always yields [1.0].
    """
    if k < 1:
        raise ValidationError(f"need k >= 1, got {k}")
    _check_alpha(alpha)
    if k == 1:
        return WeightVector(np.ones(1))
    return WeightVector(_gamma_simplex(k, alpha, rng, 1)[0])


def dirichlet_batch(
    k: int, alpha: float, size: int, rng: np.random.Generator
) -> np.ndarray:
    """(size, k) array of simplex points, same construction as dirichlet_sample."""
    if k < 1:
        raise ValidationError(f"need k >= 1, got {k}")
    _check_alpha(alpha)
    if k == 1:
        return np.ones((size, 1))
    return _gamma_simplex(k, alpha, rng, size)


def trial_weights(k: int, alpha: float, seed: int, trial: int) -> WeightVector:
    """Weight sample of trial t: a pure function of (seed, t)."""
    return dirichlet_sample(k, alpha, derive_rng(seed, CTX_SEARCH_TRIAL, trial))


def search_weights(
    members: MemberSet, labels_val: LabelVector, cfg: SearchConfig
) -> SearchResult:
    """Randomized Dirichlet search for the best-scoring weight vector.

    Scores the K vertices (when cfg.include_vertices), then cfg.trials
    Dirichlet(alpha) samples, on the members' validation matrices. The
    candidate with the highest validation accuracy wins; ties fall to the
    lower loss, then to the earlier candidate index. Deterministic for a
    fixed config.
    """
    k = members.size
    val_matrices = members.validation_matrices
    for m in val_matrices:
        check_aligned(m, labels_val)
    stacked = _stack(val_matrices)
    per_member = tuple(accuracy(m, labels_val) for m in val_matrices)

    best = None  # (accuracy, loss, index, weights)

    def consider(index: int, weights: WeightVector) -> None:
        nonlocal best
        blended = PredictionMatrix(_blend(stacked, weights.weights))
        acc = accuracy(blended, labels_val)
        loss = cross_entropy(blended, labels_val)
        if best is None or (acc, -loss) > (best[0], -best[1]):
            best = (acc, loss, index, weights)

    index = 0
    if cfg.include_vertices:
        for vertex in range(k):
            consider(index, WeightVector.vertex(k, vertex))
            index += 1
    for trial in range(cfg.trials):
        consider(index, trial_weights(k, cfg.alpha, cfg.seed, trial))
        index += 1

    acc, loss, idx, weights = best
    return SearchResult(
        weights=weights,
        validation_accuracy=acc,
        validation_loss=loss,
        trial_index=idx,
        per_member_validation_accuracy=per_member,
    )


def evaluate_ensemble(
    members: MemberSet, weights: WeightVector, labels_test: LabelVector
) -> tuple[MetricSummary, ConfusionMatrix]:
    """Metrics of the weighted combination on the members' test split."""
    test_matrices = members.test_matrices
    for m in test_matrices:
        check_aligned(m, labels_test)
    blended = combine(test_matrices, weights)
    summary = MetricSummary(
        accuracy=accuracy(blended, labels_test),
        loss=cross_entropy(blended, labels_test),
        n_samples=blended.n_rows,
    )
    return summary, confusion(blended, labels_test)


def run_repeated(
    members: MemberSet,
    labels_val: LabelVector,
    labels_test: LabelVector,
    cfg: SearchConfig,
    repeats: int = 10,
) -> RepeatReport:
    """Search-and-test repeated with seeds base, base+1, ..., base+R-1.

    Each repeat runs the full weight search on validation and scores the
    winner on test; the report carries every run plus the arithmetic mean
    and population standard deviation of the run accuracies.
    """
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    runs = []
    for i in range(repeats):
        run_cfg = replace(cfg, seed=cfg.seed + i)
        result = search_weights(members, labels_val, run_cfg)
        summary, _ = evaluate_ensemble(members, result.weights, labels_test)
        runs.append(
            RepeatRun(
                seed=run_cfg.seed,
                test_accuracy=summary.accuracy,
                test_loss=summary.loss,
            )
        )
    accs = np.array([r.test_accuracy for r in runs])
    return RepeatReport(
        runs=tuple(runs),
        mean_accuracy=float(accs.mean()),
        std_accuracy=float(accs.std()),
    )
