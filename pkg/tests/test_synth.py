import math

import numpy as np
import numpy.testing as npt
import pytest

from dirblend.core import LabelVector, WeightVector, predicted_classes
from dirblend.ensemble import combine
from dirblend.errors import InfeasibleSpecError, InvalidShapeError, ValidationError
from dirblend.metrics import accuracy, cross_entropy
from dirblend.synth import (
    SynthMemberSpec,
    correct_count,
    gen_complementary_pair,
    gen_labels,
    gen_member,
    gen_member_set,
)


class TestSpecValidation:
    def test_accuracy_range(self):
        SynthMemberSpec(0.0)
        SynthMemberSpec(1.0)
        with pytest.raises(ValidationError):
            SynthMemberSpec(1.1)
        with pytest.raises(ValidationError):
            SynthMemberSpec(-0.1)

    def test_confidence_range(self):
        with pytest.raises(InfeasibleSpecError):
            SynthMemberSpec(0.5, confidence=0.0)
        with pytest.raises(InfeasibleSpecError):
            SynthMemberSpec(0.5, confidence=1.2)


class TestGenLabels:
    def test_deterministic_and_in_range(self):
        a = gen_labels(100, 7, seed=3)
        b = gen_labels(100, 7, seed=3)
        npt.assert_array_equal(a.labels, b.labels)
        assert a.labels.min() >= 0 and a.labels.max() < 7

    def test_seed_matters(self):
        a = gen_labels(100, 7, seed=3)
        b = gen_labels(100, 7, seed=4)
        assert not np.array_equal(a.labels, b.labels)

    def test_n_below_c_rejected(self):
        with pytest.raises(InvalidShapeError):
            gen_labels(3, 4, seed=0)


class TestCorrectCount:
    def test_plain(self):
        assert correct_count(0.76, 100) == 76
        assert correct_count(1.0, 55) == 55
        assert correct_count(0.0, 55) == 0

    def test_half_goes_to_even(self):
        # round-half-even: 1.5 -> 2 but 2.5 -> 2
        assert correct_count(0.375, 4) == 2
        assert correct_count(0.25, 10) == 2
        assert correct_count(0.35, 10) == 4


class TestGenMember:
    @pytest.mark.parametrize("target", [0.0, 0.2, 0.55, 0.76, 0.94, 1.0])
    def test_accuracy_exact(self, target):
        labels = gen_labels(400, 10, seed=1)
        preds = gen_member(labels, SynthMemberSpec(target), seed=5)
        assert accuracy(preds, labels) == correct_count(target, 400) / 400

    def test_wrong_rows_never_hit_truth(self):
        labels = gen_labels(300, 6, seed=2)
        preds = gen_member(labels, SynthMemberSpec(0.5), seed=9)
        hits = predicted_classes(preds) == labels.labels
        assert int(hits.sum()) == correct_count(0.5, 300)

    def test_loss_matches_closed_form(self):
        n, c, p, target = 200, 8, 0.9, 0.7
        labels = gen_labels(n, c, seed=3)
        preds = gen_member(labels, SynthMemberSpec(target, confidence=p), seed=11)
        n_correct = correct_count(target, n)
        expected = -(
            n_correct * math.log(p) + (n - n_correct) * math.log((1 - p) / (c - 1))
        ) / n
        assert cross_entropy(preds, labels) == pytest.approx(expected, abs=1e-12)

    def test_rows_are_stochastic(self):
        labels = gen_labels(50, 5, seed=4)
        preds = gen_member(labels, SynthMemberSpec(0.6, confidence=0.45), seed=1)
        npt.assert_allclose(preds.values.sum(axis=1), 1.0, atol=1e-12, rtol=0)

    def test_confidence_at_most_uniform_rejected(self):
        labels = gen_labels(50, 4, seed=4)
        with pytest.raises(InfeasibleSpecError):
            gen_member(labels, SynthMemberSpec(0.6, confidence=0.25), seed=1)

    def test_deterministic(self):
        labels = gen_labels(80, 5, seed=6)
        a = gen_member(labels, SynthMemberSpec(0.5), seed=2)
        b = gen_member(labels, SynthMemberSpec(0.5), seed=2)
        npt.assert_array_equal(a.values, b.values)
        c = gen_member(labels, SynthMemberSpec(0.5), seed=3)
        assert not np.array_equal(a.values, c.values)


class TestErrorCorrelation:
    def test_same_group_same_error_rows(self):
        labels = gen_labels(200, 6, seed=7)
        spec = SynthMemberSpec(0.6, error_correlation_group=42)
        a = gen_member(labels, spec, seed=100)
        b = gen_member(labels, spec, seed=200)
        a_hits = predicted_classes(a) == labels.labels
        b_hits = predicted_classes(b) == labels.labels
        npt.assert_array_equal(a_hits, b_hits)
        # wrong-class choices still member-specific
        assert not np.array_equal(a.values, b.values)

    def test_different_groups_differ(self):
        labels = gen_labels(200, 6, seed=7)
        a = gen_member(labels, SynthMemberSpec(0.6, error_correlation_group=1), seed=100)
        b = gen_member(labels, SynthMemberSpec(0.6, error_correlation_group=2), seed=100)
        a_hits = predicted_classes(a) == labels.labels
        b_hits = predicted_classes(b) == labels.labels
        assert not np.array_equal(a_hits, b_hits)


class TestComplementaryPair:
    def test_solo_half_plus_blend_perfect(self):
        labels = gen_labels(1000, 14, seed=0)
        a, b = gen_complementary_pair(labels, 0.9, 0.6, seed=0)
        assert accuracy(a, labels) == 0.5
        assert accuracy(b, labels) == 0.5
        blend = combine([a, b], WeightVector.uniform(2))
        assert accuracy(blend, labels) == 1.0

    def test_complementary_masks(self):
        labels = gen_labels(100, 5, seed=1)
        a, b = gen_complementary_pair(labels, 0.8, 0.5, seed=3)
        a_hits = predicted_classes(a) == labels.labels
        b_hits = predicted_classes(b) == labels.labels
        npt.assert_array_equal(a_hits, ~b_hits)

    def test_infeasible_configs(self):
        labels = gen_labels(40, 4, seed=1)
        with pytest.raises(InfeasibleSpecError):
            gen_complementary_pair(labels, 0.9, 0.25, seed=0)  # wrong peak too flat
        with pytest.raises(InfeasibleSpecError):
            gen_complementary_pair(labels, 0.5, 0.6, seed=0)  # correct below wrong
        with pytest.raises(InfeasibleSpecError):
            gen_complementary_pair(labels, 1.2, 0.6, seed=0)


class TestGenMemberSet:
    def test_shapes_and_determinism(self):
        specs = [("a", SynthMemberSpec(0.7)), ("b", SynthMemberSpec(0.9))]
        ms1, lv1, lt1 = gen_member_set(specs, n_val=60, n_test=40, c=5, seed=5)
        ms2, lv2, lt2 = gen_member_set(specs, n_val=60, n_test=40, c=5, seed=5)
        assert ms1.size == 2
        assert ms1.members[0].validation.n_rows == 60
        assert ms1.members[0].test.n_rows == 40
        npt.assert_array_equal(lv1.labels, lv2.labels)
        npt.assert_array_equal(
            ms1.members[1].test.values, ms2.members[1].test.values
        )

    def test_members_draw_distinct_streams(self):
        specs = [("a", SynthMemberSpec(0.7)), ("b", SynthMemberSpec(0.7))]
        ms, lv, _ = gen_member_set(specs, n_val=100, n_test=50, c=5, seed=5)
        a, b = ms.members
        assert not np.array_equal(a.validation.values, b.validation.values)

    def test_val_and_test_labels_independent(self):
        specs = [("a", SynthMemberSpec(0.7))]
        _, lv, lt = gen_member_set(specs, n_val=50, n_test=50, c=5, seed=5)
        assert not np.array_equal(lv.labels, lt.labels)

    def test_target_accuracies_realized_on_both_splits(self):
        specs = [("a", SynthMemberSpec(0.76)), ("b", SynthMemberSpec(0.55))]
        ms, lv, lt = gen_member_set(specs, n_val=200, n_test=100, c=14, seed=2)
        assert accuracy(ms.members[0].validation, lv) == 0.76
        assert accuracy(ms.members[0].test, lt) == 0.76
        assert accuracy(ms.members[1].validation, lv) == 0.55
        assert accuracy(ms.members[1].test, lt) == 0.55

    def test_catalog_mismatch(self):
        from dirblend.core import ClassCatalog

        with pytest.raises(InvalidShapeError):
            gen_member_set(
                [("a", SynthMemberSpec(0.5))],
                n_val=20,
                n_test=20,
                c=5,
                seed=0,
                catalog=ClassCatalog.generic(4),
            )

    def test_empty_specs(self):
        with pytest.raises(ValidationError):
            gen_member_set([], n_val=20, n_test=20, c=5, seed=0)
