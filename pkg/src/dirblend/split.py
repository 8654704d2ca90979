"""Stratified three-way splitting of labeled sample collections.

Per class of size n, floor(n * test_fraction) samples go to test, then
floor(remaining * validation_fraction) of what is left to validation, and
the rest to train. Floor (rather than round) keeps small classes from
being overdrawn and reproduces the reference arithmetic
1000 -> 100 test / 180 validation / 720 train per class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LabelVector
from .errors import DegenerateSplitError, EmptyClassError, ValidationError
from .rng import CTX_SPLIT_CLASS, derive_rng

TRAIN, VALIDATION, TEST = 0, 1, 2
TAG_NAMES = ("train", "validation", "test")
TAG_CODES = {name: code for code, name in enumerate(TAG_NAMES)}


@dataclass(frozen=True)
class SplitSpec:
    """Split fractions plus the seed that fixes the random assignment."""

    test_fraction: float = 0.10
    validation_fraction_of_remainder: float = 0.20
    seed: int = 0

    def __post_init__(self):
        for name, frac in (
            ("test_fraction", self.test_fraction),
            ("validation_fraction_of_remainder", self.validation_fraction_of_remainder),
        ):
            if not 0.0 < frac < 1.0:
                raise ValidationError(f"{name} must be in (0, 1), got {frac!r}")


@dataclass(frozen=True)
class SplitAssignment:
    """Per-sample subset tag; a disjoint, exhaustive partition."""

    tags: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.tags, dtype=np.int8)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidationError("tags must be a non-empty 1-D array")
        if not np.isin(arr, (TRAIN, VALIDATION, TEST)).all():
            raise ValidationError("tags must be train/validation/test codes")
        arr.flags.writeable = False
        object.__setattr__(self, "tags", arr)

    def __len__(self) -> int:
        return int(self.tags.size)

    def indices(self, tag: int) -> np.ndarray:
        return np.nonzero(self.tags == tag)[0]

    @property
    def train_indices(self) -> np.ndarray:
        return self.indices(TRAIN)

    @property
    def validation_indices(self) -> np.ndarray:
        return self.indices(VALIDATION)

    @property
    def test_indices(self) -> np.ndarray:
        return self.indices(TEST)

    def counts(self) -> tuple[int, int, int]:
        """(n_train, n_validation, n_test)."""
        return tuple(int((self.tags == t).sum()) for t in (TRAIN, VALIDATION, TEST))

    def tag_names(self) -> list[str]:
        return [TAG_NAMES[t] for t in self.tags]


def split_sizes(n: int, spec: SplitSpec) -> tuple[int, int, int]:
    """(n_train, n_validation, n_test) for one class of size n, floor rules."""
    n_test = int(np.floor(n * spec.test_fraction))
    remainder = n - n_test
    n_val = int(np.floor(remainder * spec.validation_fraction_of_remainder))
    n_train = remainder - n_val
    return n_train, n_val, n_test


def stratified_split(labels: LabelVector, spec: SplitSpec) -> SplitAssignment:
    """Assign every sample to train/validation/test, stratified per class.

    Each class is shuffled with its own stream derived from (seed, class),
    so adding or relabeling one class never perturbs the others'
    assignments. Deterministic for a fixed spec.
    """
    tags = np.empty(len(labels), dtype=np.int8)
    counts = labels.class_counts()
    for cls in range(labels.num_classes):
        n = int(counts[cls])
        if n == 0:
            raise EmptyClassError(f"class {cls} has no samples")
        n_train, n_val, n_test = split_sizes(n, spec)
        if n_train == 0:
            # Unreachable for fractions in (0, 1) under floor rules; kept as
            # a guard for future fraction semantics.
            raise DegenerateSplitError(f"class {cls} would have no training samples")
        members = np.nonzero(labels.labels == cls)[0]
        order = derive_rng(spec.seed, CTX_SPLIT_CLASS, cls).permutation(n)
        shuffled = members[order]
        tags[shuffled[:n_test]] = TEST
        tags[shuffled[n_test : n_test + n_val]] = VALIDATION
        tags[shuffled[n_test + n_val :]] = TRAIN
    return SplitAssignment(tags)
