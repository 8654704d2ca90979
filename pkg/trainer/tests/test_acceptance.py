"""Acceptance gate for the trainer: one test per release criterion.

Verdict lines land in the same terminal-summary section as the library
gate's; numbering continues from there. The smoke criterion drives the
real CLI and real training on the tiny fixture, then pushes the exported
artifacts through the ensembling pipeline end to end.
"""

import dataclasses
import functools
import time
import warnings

import numpy as np
import numpy.testing as npt

from dirblend.cli import main as ensemble_main
from dirblend.io import (
    Manifest,
    ManifestMember,
    load_manifest,
    parse_report,
    read_assignment,
    read_manifest,
    write_manifest,
)

from dirblend_trainer import FineTuneRecipe, build_model, prepare_dataset, train_and_export
from dirblend_trainer.cli import main as trainer_main


VERDICTS: list[str] = []


def criterion(label):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                VERDICTS.append(f"FAIL  {label}")
                raise
            VERDICTS.append(f"PASS  {label}")

        return run

    return wrap


@criterion(
    "criterion 10: smoke export (3 classes x 10 images, 2 epochs, CPU) loads via "
    "load_manifest and fit+report run end-to-end, < 5 min"
)
def test_smoke_export_feeds_the_ensemble_pipeline(image_root, tmp_path):
    start = time.perf_counter()
    first = tmp_path / "first"
    rc = trainer_main(
        [
            "export",
            "--backbone", "MobileNet",
            "--data", str(image_root),
            "--out", str(first),
            "--epochs", "2",
            "--weights", "none",
            "--seed", "0",
        ]
    )
    assert rc == 0

    # artifacts load through the consumer's validating reader, warning-free
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        members, val_labels, test_labels = load_manifest(first / "manifest.json")
    assert [m.name for m in members.members] == ["mobilenet"]
    member = members.members[0]
    assert member.validation.values.shape == (3, 3)
    assert member.test.values.shape == (3, 3)
    npt.assert_allclose(member.validation.values.sum(axis=1), 1.0, atol=1e-6)
    npt.assert_allclose(member.test.values.sum(axis=1), 1.0, atol=1e-6)
    assert len(val_labels.labels) == 3 and len(test_labels.labels) == 3

    # row-order contract: rows follow the sorted sample ids of the assignment
    ids, assignment = read_assignment(first / "assignment.csv")
    assert ids == sorted(ids)
    assert assignment.counts() == (24, 3, 3)

    # a second member trained from the same assignment lines up row for row
    second = tmp_path / "second"
    rc = trainer_main(
        [
            "export",
            "--backbone", "MobileNet",
            "--data", str(image_root),
            "--out", str(second),
            "--assignment", str(first / "assignment.csv"),
            "--epochs", "2",
            "--weights", "none",
            "--seed", "1",
            "--name", "rerun",
        ]
    )
    assert rc == 0
    assert (second / "assignment.csv").read_bytes() == (first / "assignment.csv").read_bytes()
    assert (second / "labels_val.txt").read_bytes() == (first / "labels_val.txt").read_bytes()
    assert (second / "labels_test.txt").read_bytes() == (first / "labels_test.txt").read_bytes()

    # merge both exports into one manifest and run the ensembling CLI on it
    merged = Manifest(
        catalog=read_manifest(first / "manifest.json").catalog,
        members=(
            ManifestMember("mobilenet", "first/mobilenet.val.csv", "first/mobilenet.test.csv"),
            ManifestMember("rerun", "second/rerun.val.csv", "second/rerun.test.csv"),
        ),
        val_labels_path="first/labels_val.txt",
        test_labels_path="first/labels_test.txt",
    )
    write_manifest(tmp_path / "merged.json", merged)
    weights_csv = tmp_path / "weights.csv"
    report_path = tmp_path / "report.json"
    rc = ensemble_main(
        [
            "fit",
            "--manifest", str(tmp_path / "merged.json"),
            "--weights-out", str(weights_csv),
            "--trials", "50",
            "--seed", "3",
        ]
    )
    assert rc == 0
    rc = ensemble_main(
        [
            "report",
            "--manifest", str(tmp_path / "merged.json"),
            "--weights", str(weights_csv),
            "--format", "structured",
            "--out", str(report_path),
        ]
    )
    assert rc == 0
    report = parse_report(report_path.read_bytes())
    assert [row.name for row in report.members] == ["mobilenet", "rerun"]
    assert report.ensemble_test is not None

    assert time.perf_counter() - start < 300.0


@criterion(
    "criterion 11: default recipe head is dropout(0.5) -> dense(512, relu) -> "
    "dense(C, softmax); training wired for batch 20 at 128x128"
)
def test_recipe_fidelity_by_introspection(image_root, tmp_path):
    defaults = FineTuneRecipe(backbone_name="MobileNet", num_classes=14)
    assert defaults.batch_size == 20
    assert defaults.input_resolution == 128
    assert defaults.epochs == 50
    assert defaults.dropout_rate == 0.5
    assert defaults.head_width == 512
    assert defaults.weights_origin == "imagenet"

    # structure: build offline (random init) and inspect the head stack
    model = build_model(dataclasses.replace(defaults, weights_origin=None))
    assert model.input_shape == (None, 128, 128, 3)
    dropout, hidden, out = model.layers[-3:]
    assert type(dropout).__name__ == "Dropout" and dropout.rate == 0.5
    assert type(hidden).__name__ == "Dense" and hidden.units == 512
    assert hidden.get_config()["activation"] == "relu"
    assert type(out).__name__ == "Dense" and out.units == 14
    assert out.get_config()["activation"] == "softmax"
    batch = np.random.default_rng(0).random((2, 128, 128, 3), dtype=np.float32)
    probs = model.predict(batch, verbose=0)
    npt.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-5)

    # wiring: with defaults requested, fit receives batch 20 of 128x128 inputs
    class RecordingStub:
        def __init__(self):
            self.fit_kwargs = None

        def fit(self, x, y, validation_data=None, batch_size=None, epochs=None,
                shuffle=True, verbose=0):
            self.fit_kwargs = {"shape": x.shape, "batch_size": batch_size,
                               "epochs": epochs}
            from types import SimpleNamespace

            return SimpleNamespace(history={"loss": [1.0] * epochs})

        def predict(self, x, batch_size=None, verbose=0):
            m = np.random.default_rng(1).random((x.shape[0], 3))
            return m / m.sum(axis=1, keepdims=True)

    recipe = dataclasses.replace(defaults, num_classes=3, weights_origin=None)
    dataset = prepare_dataset(image_root, recipe)
    stub = RecordingStub()
    train_and_export(stub, recipe, dataset, tmp_path / "wiring")
    assert stub.fit_kwargs == {
        "shape": (24, 128, 128, 3),
        "batch_size": 20,
        "epochs": 50,
    }
