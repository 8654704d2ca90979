"""Transfer-learning trainer that exports ensemble-ready prediction files.

Train a pretrained-backbone image classifier on a directory-per-class
dataset and export its validation/test prediction matrices, labels, and
manifest in the formats the ensembling library reads.
"""

from .data import (
    ImageTree,
    PreparedDataset,
    SplitArrays,
    prepare_dataset,
    scan_image_tree,
)
from .errors import (
    DatasetLayoutError,
    TrainerError,
    TrainingDivergedError,
    UnknownBackboneError,
)
from .export import ExportResult, run_export, train_and_export
from .recipe import (
    BACKBONES,
    Backbone,
    FineTuneRecipe,
    backbone_names,
    build_model,
    get_backbone,
    register_backbone,
)

__version__ = "0.1.0"

__all__ = [
    "BACKBONES",
    "Backbone",
    "DatasetLayoutError",
    "ExportResult",
    "FineTuneRecipe",
    "ImageTree",
    "PreparedDataset",
    "SplitArrays",
    "TrainerError",
    "TrainingDivergedError",
    "UnknownBackboneError",
    "backbone_names",
    "build_model",
    "get_backbone",
    "prepare_dataset",
    "register_backbone",
    "run_export",
    "scan_image_tree",
    "train_and_export",
    "__version__",
]
