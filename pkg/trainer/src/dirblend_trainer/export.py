"""Training runs and atomic artifact export.

An export is a directory holding everything downstream ensembling needs:
a manifest, validation/test prediction CSVs, label files, the split
assignment that produced them, and a training history.  All files are
written through the consumer library's own writers, so anything exported
here is readable by definition.  The directory appears atomically: files
go to a temp dir next to the target and a single rename publishes them,
so a crashed or diverged run leaves nothing behind.
"""

from __future__ import annotations

import dataclasses
import json
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from dirblend import validate_matrix
from dirblend.core import LabelVector
from dirblend.io import (
    Manifest,
    ManifestMember,
    write_assignment,
    write_labels,
    write_manifest,
    write_predictions,
)

from .data import PreparedDataset, prepare_dataset
from .errors import TrainerError, TrainingDivergedError
from .recipe import FineTuneRecipe, build_model


@dataclass(frozen=True)
class ExportResult:
    member_name: str
    out_dir: Path
    manifest_path: Path
    history: dict[str, list[float]]
    counts: tuple[int, int, int]


def _check_member_name(name: str) -> str:
    if not name or "/" in name or "\\" in name or name.startswith("."):
        raise TrainerError(f"member name {name!r} is not a safe file stem")
    return name


def _history_floats(history) -> dict[str, list[float]]:
    return {key: [float(v) for v in values] for key, values in history.items()}


def _predict_matrix(model, images: np.ndarray, batch_size: int):
    probs = model.predict(images, batch_size=batch_size, verbose=0)
    # float32 softmax rows drift from 1 by ~1e-7; validate_matrix's exact
    # renormalization makes them bitwise-stable in the exported CSV
    return validate_matrix(np.asarray(probs, dtype=np.float64))


def train_and_export(
    model,
    recipe: FineTuneRecipe,
    dataset: PreparedDataset,
    out_dir,
    member_name: str | None = None,
    verbose: int = 0,
) -> ExportResult:
    """Fit the model on the train split and publish one member's artifacts.

    ``out_dir`` must not already exist; it is created by renaming a fully
    written temp directory, which is the atomicity guarantee.  A
    non-finite training loss raises TrainingDivergedError and nothing is
    exported.
    """
    name = _check_member_name(member_name or recipe.backbone_name.lower())
    out_dir = Path(out_dir)
    if out_dir.exists():
        raise TrainerError(f"output directory {out_dir} already exists")
    out_dir.parent.mkdir(parents=True, exist_ok=True)

    fit = model.fit(
        dataset.train.images,
        dataset.train.labels,
        validation_data=(dataset.validation.images, dataset.validation.labels),
        batch_size=recipe.batch_size,
        epochs=recipe.epochs,
        shuffle=True,
        verbose=verbose,
    )
    history = _history_floats(fit.history)
    if not all(np.isfinite(values).all() for values in history.values()):
        raise TrainingDivergedError(
            f"non-finite training metrics for member {name!r}; nothing exported"
        )

    val = _predict_matrix(model, dataset.validation.images, recipe.batch_size)
    test = _predict_matrix(model, dataset.test.images, recipe.batch_size)
    num_classes = dataset.catalog.num_classes

    # same filesystem as out_dir so the final rename is atomic
    tmp = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}-", dir=out_dir.parent))
    try:
        write_predictions(tmp / f"{name}.val.csv", val, dataset.catalog)
        write_predictions(tmp / f"{name}.test.csv", test, dataset.catalog)
        write_labels(
            tmp / "labels_val.txt",
            LabelVector(dataset.validation.labels, num_classes),
        )
        write_labels(
            tmp / "labels_test.txt",
            LabelVector(dataset.test.labels, num_classes),
        )
        write_assignment(tmp / "assignment.csv", dataset.assignment, ids=dataset.ids)
        manifest = Manifest(
            catalog=dataset.catalog,
            members=(
                ManifestMember(
                    name=name,
                    val_predictions_path=f"{name}.val.csv",
                    test_predictions_path=f"{name}.test.csv",
                ),
            ),
            val_labels_path="labels_val.txt",
            test_labels_path="labels_test.txt",
        )
        write_manifest(tmp / "manifest.json", manifest)
        blob = {"history": history, "recipe": dataclasses.asdict(recipe)}
        (tmp / "history.json").write_text(
            json.dumps(blob, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
        tmp.rename(out_dir)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise

    return ExportResult(
        member_name=name,
        out_dir=out_dir,
        manifest_path=out_dir / "manifest.json",
        history=history,
        counts=dataset.counts(),
    )


def run_export(
    recipe: FineTuneRecipe,
    image_root,
    out_dir,
    assignment_path=None,
    split_spec=None,
    member_name: str | None = None,
    seed: int | None = None,
    verbose: int = 0,
) -> ExportResult:
    """One training job end to end: scan, split, build, fit, export.

    ``seed`` pins every framework RNG (weight init, dropout, shuffling)
    before anything random happens; leave it None for fresh draws.
    """
    if Path(out_dir).exists():  # refuse before the expensive load/build
        raise TrainerError(f"output directory {out_dir} already exists")
    if seed is not None:
        from tensorflow import keras

        keras.utils.set_random_seed(seed)
    dataset = prepare_dataset(
        image_root, recipe, assignment_path=assignment_path, split_spec=split_spec
    )
    model = build_model(recipe)
    return train_and_export(
        model, recipe, dataset, out_dir, member_name=member_name, verbose=verbose
    )
