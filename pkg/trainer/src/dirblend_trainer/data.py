"""Directory-per-class image loading and split preparation.

Sample identity is the class-relative POSIX path ("class/file.png"), and
every array in a prepared dataset is ordered by the lexicographic sort of
those ids.  That ordering is the row-order contract: all members exported
from the same assignment produce prediction rows for the same samples in
the same positions, which is what makes their matrices combinable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from dirblend import ClassCatalog, LabelVector, SplitSpec, stratified_split
from dirblend.io import read_assignment
from dirblend.split import SplitAssignment

from .errors import DatasetLayoutError
from .recipe import FineTuneRecipe, get_backbone


@dataclass(frozen=True)
class ImageTree:
    """Scan result: class names plus the sorted sample ids and their labels."""

    root: Path
    catalog: ClassCatalog
    ids: tuple[str, ...]
    labels: LabelVector


@dataclass(frozen=True)
class SplitArrays:
    """One split's samples, already resized and backbone-preprocessed."""

    ids: tuple[str, ...]
    images: np.ndarray  # (n, r, r, 3) float32
    labels: np.ndarray  # (n,) int64


@dataclass(frozen=True)
class PreparedDataset:
    catalog: ClassCatalog
    ids: tuple[str, ...]  # full dataset order; splits index into this
    assignment: SplitAssignment
    train: SplitArrays
    validation: SplitArrays
    test: SplitArrays

    def counts(self) -> tuple[int, int, int]:
        return self.assignment.counts()


def scan_image_tree(image_root) -> ImageTree:
    """Discover classes (subdirectories) and samples (files inside them).

    Class order is the sorted directory-name order; sample order is the
    lexicographic sort of "class/filename" ids.  Hidden files and hidden
    directories are ignored.  Empty classes are an error: they would make
    the label space ambiguous.
    """
    root = Path(image_root)
    if not root.is_dir():
        raise DatasetLayoutError(f"image root {root} is not a directory")
    class_dirs = sorted(
        (d for d in root.iterdir() if d.is_dir() and not d.name.startswith(".")),
        key=lambda d: d.name,
    )
    if not class_dirs:
        raise DatasetLayoutError(f"image root {root} contains no class directories")

    ids: list[str] = []
    by_id_label: dict[str, int] = {}
    for index, class_dir in enumerate(class_dirs):
        files = sorted(
            f for f in class_dir.iterdir() if f.is_file() and not f.name.startswith(".")
        )
        if not files:
            raise DatasetLayoutError(f"class directory {class_dir.name!r} is empty")
        for f in files:
            sid = f"{class_dir.name}/{f.name}"
            ids.append(sid)
            by_id_label[sid] = index

    ids.sort()
    catalog = ClassCatalog(tuple(d.name for d in class_dirs))
    labels = LabelVector(
        np.array([by_id_label[sid] for sid in ids], dtype=np.int64),
        catalog.num_classes,
    )
    return ImageTree(root=root, catalog=catalog, ids=tuple(ids), labels=labels)


def _load_images(tree: ImageTree, resolution: int) -> np.ndarray:
    """Read every sample into one float32 array of raw RGB in [0, 255]."""
    out = np.empty((len(tree.ids), resolution, resolution, 3), dtype=np.float32)
    for row, sid in enumerate(tree.ids):
        path = tree.root / sid
        try:
            with Image.open(path) as img:
                rgb = img.convert("RGB").resize(
                    (resolution, resolution), Image.Resampling.BILINEAR
                )
        except (UnidentifiedImageError, OSError) as err:
            raise DatasetLayoutError(f"unreadable image {path}: {err}") from err
        out[row] = np.asarray(rgb, dtype=np.float32)
    return out


def _resolve_assignment(tree: ImageTree, assignment_path) -> SplitAssignment:
    """Load an assignment file and align its rows to the tree's id order.

    The file may key rows by sample id (preferred) or by the positional
    ids a bare label-file split produces ("0", "1", ...); either way the
    result covers exactly this dataset or the layout is rejected.
    """
    file_ids, assignment = read_assignment(assignment_path)
    if len(file_ids) != len(tree.ids):
        raise DatasetLayoutError(
            f"assignment file lists {len(file_ids)} samples, "
            f"image tree has {len(tree.ids)}"
        )
    if list(tree.ids) == file_ids:
        return assignment
    by_id = dict(zip(file_ids, assignment.tags))
    if len(by_id) == len(file_ids) and set(file_ids) == set(tree.ids):
        tags = np.array([by_id[sid] for sid in tree.ids], dtype=np.int8)
        return SplitAssignment(tags)
    if file_ids == [str(i) for i in range(len(file_ids))]:
        return assignment  # positional: row i is the i-th sorted sample
    missing = sorted(set(tree.ids) - set(file_ids))[:3]
    raise DatasetLayoutError(
        f"assignment ids do not match the image tree (e.g. missing {missing})"
    )


def prepare_dataset(
    image_root,
    recipe: FineTuneRecipe,
    assignment_path=None,
    split_spec: SplitSpec | None = None,
) -> PreparedDataset:
    """Scan, split, load, and preprocess a directory-per-class dataset.

    With ``assignment_path`` the split membership honors that file
    exactly; otherwise a stratified assignment is generated from
    ``split_spec`` (default fractions: one tenth test, one fifth of the
    remainder validation) and echoed into the export so later runs can
    reuse it.  Images are resized to the recipe resolution and passed
    through the backbone's own preprocessing.
    """
    tree = scan_image_tree(image_root)
    backbone = get_backbone(recipe.backbone_name)  # fail before the image load
    if recipe.num_classes != tree.catalog.num_classes:
        raise DatasetLayoutError(
            f"recipe expects {recipe.num_classes} classes, "
            f"image tree has {tree.catalog.num_classes}"
        )
    if assignment_path is not None:
        assignment = _resolve_assignment(tree, assignment_path)
    else:
        assignment = stratified_split(tree.labels, split_spec or SplitSpec())
    counts = assignment.counts()
    if min(counts) < 1:
        raise DatasetLayoutError(
            f"split sizes {counts} leave an empty subset; training needs "
            "samples in train, validation, and test"
        )

    raw = _load_images(tree, recipe.input_resolution)
    images = backbone.preprocess(raw)
    labels = tree.labels.labels

    def take(indices: np.ndarray) -> SplitArrays:
        return SplitArrays(
            ids=tuple(tree.ids[i] for i in indices),
            images=images[indices],
            labels=labels[indices],
        )

    return PreparedDataset(
        catalog=tree.catalog,
        ids=tree.ids,
        assignment=assignment,
        train=take(assignment.train_indices),
        validation=take(assignment.validation_indices),
        test=take(assignment.test_indices),
    )
