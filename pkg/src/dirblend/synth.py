"""Synthetic labels and prediction matrices with controllable accuracy.

Stands in for trained base learners at desk scale: a generated member hits
its target accuracy exactly (the set of correct rows is chosen by count,
not by coin flips), so ensemble properties can be asserted without any
statistical slack. Rows are peaked distributions: probability mass
`confidence` on the emitted argmax class and the remainder spread
uniformly over the other C-1 classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ClassCatalog,
    LabelVector,
    Member,
    MemberSet,
    PredictionMatrix,
    validate_matrix,
)
from .errors import InfeasibleSpecError, InvalidShapeError, ValidationError
from .rng import (
    CTX_GROUP_MASK,
    CTX_PAIR_MASK,
    CTX_PAIR_WRONG,
    CTX_SYNTH_LABELS,
    CTX_SYNTH_MASK,
    CTX_SYNTH_WRONG,
    derive_rng,
)


@dataclass(frozen=True)
class SynthMemberSpec:
    """Recipe for one synthetic member.

    target_accuracy: fraction of rows whose argmax is the true class;
        realized exactly as round(target_accuracy * N) rows.
    confidence: mass on the argmax class, must exceed 1/C so the peak wins.
    error_correlation_group: members sharing a group id err on the same
        samples (their correct-row masks are drawn from the group's stream
        instead of the member seed's).
    """

    target_accuracy: float
    confidence: float = 0.9
    error_correlation_group: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.target_accuracy <= 1.0:
            raise ValidationError(
                f"target_accuracy must be in [0, 1], got {self.target_accuracy!r}"
            )
        if not 0.0 < self.confidence <= 1.0:
            raise InfeasibleSpecError(
                f"confidence must be in (0, 1], got {self.confidence!r}"
            )


def gen_labels(n: int, c: int, seed: int) -> LabelVector:
    """n labels drawn uniformly over c classes; deterministic given seed.

    Uniform sampling gives no balancing guarantee: for n close to c some
    class may be absent from the draw.
    """
    if c < 2 or n < c:
        raise InvalidShapeError(f"need n >= c >= 2, got n={n}, c={c}")
    rng = derive_rng(seed, CTX_SYNTH_LABELS)
    return LabelVector(rng.integers(0, c, size=n), num_classes=c)


def _peaked_rows(peaks: np.ndarray, confidences: np.ndarray, c: int) -> PredictionMatrix:
    """Rows with confidences[i] mass at peaks[i], remainder uniform."""
    n = peaks.size
    spread = (1.0 - confidences) / (c - 1)
    values = np.repeat(spread[:, None], c, axis=1)
    values[np.arange(n), peaks] = confidences
    return validate_matrix(values, tolerance=1e-9)


def _wrong_classes(
    true: np.ndarray, c: int, rng: np.random.Generator
) -> np.ndarray:
    """Uniform draw over the C-1 classes that are not the true one."""
    draws = rng.integers(0, c - 1, size=true.size)
    return draws + (draws >= true)


def correct_count(target_accuracy: float, n: int) -> int:
    """Number of correct rows a spec realizes: round(target * n), Python
    round-half-even."""
    return int(round(target_accuracy * n))


def gen_member(labels: LabelVector, spec: SynthMemberSpec, seed: int) -> PredictionMatrix:
    """Prediction matrix whose accuracy against `labels` is exact.

    Exactly correct_count(spec.target_accuracy, N) rows put
    spec.confidence on the true class; the rest put it on a seeded wrong
    class. With confidence > 1/C the peak always wins the argmax, so the
    achieved accuracy is the target by construction.
    """
    n = len(labels)
    c = labels.num_classes
    if spec.confidence <= 1.0 / c:
        raise InfeasibleSpecError(
            f"confidence {spec.confidence!r} must exceed 1/C = {1.0 / c!r} "
            "for the peak class to win the argmax"
        )
    n_correct = correct_count(spec.target_accuracy, n)
    if spec.error_correlation_group is not None:
        mask_rng = derive_rng(spec.error_correlation_group, CTX_GROUP_MASK)
    else:
        mask_rng = derive_rng(seed, CTX_SYNTH_MASK)
    order = mask_rng.permutation(n)
    correct = order[:n_correct]
    wrong = order[n_correct:]

    peaks = labels.labels.copy()
    wrong_rng = derive_rng(seed, CTX_SYNTH_WRONG)
    peaks[wrong] = _wrong_classes(labels.labels[wrong], c, wrong_rng)
    confidences = np.full(n, spec.confidence)
    return _peaked_rows(peaks, confidences, c)


def gen_complementary_pair(
    labels: LabelVector,
    confidence_correct: float = 0.9,
    confidence_wrong: float = 0.6,
    seed: int = 0,
) -> tuple[PredictionMatrix, PredictionMatrix]:
    """Two members correct on complementary halves of the data.

    Member A is right on a seeded half of the samples with a high peak
    (confidence_correct on the true class) and wrong elsewhere with a
    lower peak (confidence_wrong on a wrong class); member B mirrors A on
    the other half. Each member alone scores N_half / N, but because the
    correct peaks dominate after averaging, the equal-weight combination
    classifies every row correctly. That requires

        confidence_correct > confidence_wrong > 1/C,

    otherwise the fixture is infeasible.
    """
    n = len(labels)
    c = labels.num_classes
    if confidence_wrong <= 1.0 / c:
        raise InfeasibleSpecError(
            f"confidence_wrong {confidence_wrong!r} must exceed 1/C = {1.0 / c!r} "
            "so wrong rows are actually wrong"
        )
    if confidence_correct <= confidence_wrong:
        raise InfeasibleSpecError(
            "confidence_correct must exceed confidence_wrong for the "
            "averaged correct peak to win"
        )
    if confidence_correct > 1.0:
        raise InfeasibleSpecError(
            f"confidence_correct must be <= 1, got {confidence_correct!r}"
        )
    order = derive_rng(seed, CTX_PAIR_MASK).permutation(n)
    half = n // 2
    a_correct = np.zeros(n, dtype=bool)
    a_correct[order[:half]] = True

    matrices = []
    for side, correct_mask in enumerate((a_correct, ~a_correct)):
        peaks = labels.labels.copy()
        wrong_idx = np.nonzero(~correct_mask)[0]
        wrong_rng = derive_rng(seed, CTX_PAIR_WRONG, side)
        peaks[wrong_idx] = _wrong_classes(labels.labels[wrong_idx], c, wrong_rng)
        confidences = np.where(correct_mask, confidence_correct, confidence_wrong)
        matrices.append(_peaked_rows(peaks, confidences, c))
    return matrices[0], matrices[1]


def gen_member_set(
    specs: list[tuple[str, SynthMemberSpec]],
    n_val: int,
    n_test: int,
    c: int,
    seed: int,
    catalog: ClassCatalog | None = None,
) -> tuple[MemberSet, LabelVector, LabelVector]:
    """Full synthetic fixture: members with validation and test matrices.

    Labels and every member draw from streams derived from `seed` with
    distinct offsets, so the whole fixture reproduces from one integer.
    Returns (member_set, labels_val, labels_test).
    """
    if not specs:
        raise ValidationError("need at least one member spec")
    if catalog is None:
        catalog = ClassCatalog.generic(c)
    elif catalog.num_classes != c:
        raise InvalidShapeError(
            f"catalog has {catalog.num_classes} classes, expected {c}"
        )
    labels_val = gen_labels(n_val, c, seed)
    labels_test = gen_labels(n_test, c, seed + 1)
    members = []
    for i, (name, spec) in enumerate(specs):
        member_seed = seed + 2 + 2 * i
        members.append(
            Member(
                name=name,
                validation=gen_member(labels_val, spec, member_seed),
                test=gen_member(labels_test, spec, member_seed + 1),
            )
        )
    return MemberSet(tuple(members), catalog), labels_val, labels_test
