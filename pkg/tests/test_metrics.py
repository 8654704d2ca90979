import math

import numpy as np
import numpy.testing as npt
import pytest

from dirblend.core import LabelVector, PredictionMatrix
from dirblend.errors import LengthMismatchError, ValidationError
from dirblend.metrics import (
    ConfusionMatrix,
    accuracy,
    confusion,
    cross_entropy,
    format_percent,
    per_class_summary,
    summarize,
)


@pytest.fixture
def small_case():
    # 4 samples, 3 classes; rows 0,1,3 predicted right, row 2 wrong.
    preds = PredictionMatrix(
        np.array(
            [
                [0.7, 0.2, 0.1],
                [0.1, 0.8, 0.1],
                [0.5, 0.3, 0.2],
                [0.2, 0.2, 0.6],
            ]
        )
    )
    labels = LabelVector(np.array([0, 1, 1, 2]), num_classes=3)
    return preds, labels


def test_accuracy_hand_count(small_case):
    preds, labels = small_case
    assert accuracy(preds, labels) == 0.75


def test_cross_entropy_hand_sum(small_case):
    preds, labels = small_case
    expected = -(math.log(0.7) + math.log(0.8) + math.log(0.3) + math.log(0.6)) / 4
    assert cross_entropy(preds, labels) == pytest.approx(expected, abs=1e-15)


def test_cross_entropy_clips_zero():
    preds = PredictionMatrix(np.array([[0.0, 1.0]]))
    labels = LabelVector(np.array([0]), num_classes=2)
    assert cross_entropy(preds, labels) == pytest.approx(-math.log(1e-12))
    assert cross_entropy(preds, labels, epsilon=1e-6) == pytest.approx(-math.log(1e-6))


def test_cross_entropy_uniform_is_log_c():
    for c in (2, 5, 14):
        preds = PredictionMatrix(np.full((10, c), 1.0 / c))
        labels = LabelVector(np.arange(10) % c, num_classes=c)
        assert abs(cross_entropy(preds, labels) - math.log(c)) < 1e-12


def test_confusion_counts(small_case):
    preds, labels = small_case
    cm = confusion(preds, labels)
    npt.assert_array_equal(cm.counts, [[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert cm.accuracy() == 0.75
    assert cm.n_samples == 4


def test_confusion_accuracy_matches_accuracy(small_case):
    preds, labels = small_case
    assert confusion(preds, labels).accuracy() == accuracy(preds, labels)


def test_summarize(small_case):
    preds, labels = small_case
    s = summarize(preds, labels)
    assert s.accuracy == 0.75
    assert s.n_samples == 4
    assert s.accuracy_percent == "75.00%"


def test_format_percent_two_decimals():
    assert format_percent(0.98875) == "98.88%"
    assert format_percent(1.0) == "100.00%"
    assert format_percent(0.5512) == "55.12%"


def test_misaligned_raises(small_case):
    preds, _ = small_case
    labels = LabelVector(np.array([0, 1]), num_classes=3)
    with pytest.raises(LengthMismatchError):
        accuracy(preds, labels)


def test_bad_epsilon(small_case):
    preds, labels = small_case
    with pytest.raises(ValidationError):
        cross_entropy(preds, labels, epsilon=0.0)


class TestPerClass:
    def test_rates(self):
        cm = ConfusionMatrix(np.array([[3, 1], [2, 4]]))
        per = per_class_summary(cm)
        assert per[0].support == 4
        assert per[0].recall == pytest.approx(0.75)
        assert per[0].precision == pytest.approx(0.6)
        assert per[1].recall == pytest.approx(4 / 6)
        assert per[1].precision == pytest.approx(0.8)

    def test_empty_denominators_are_none(self):
        # class 1 never occurs and is never predicted
        cm = ConfusionMatrix(np.array([[5, 0], [0, 0]]))
        per = per_class_summary(cm)
        assert per[1].support == 0
        assert per[1].recall is None
        assert per[1].precision is None

    def test_rejects_non_square(self):
        with pytest.raises(ValidationError):
            ConfusionMatrix(np.array([[1, 2, 3], [4, 5, 6]]))
