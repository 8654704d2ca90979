"""Training recipe and model assembly.

The recipe captures the stage-one transfer-learning setup: a pretrained
convolutional backbone used as a frozen feature extractor, topped with a
dropout + two-dense-layer classification head.  Everything a run needs is
in one frozen dataclass so exports can echo their exact configuration.

Keras is imported lazily; constructing recipes and querying the backbone
registry never pays the TensorFlow import cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import TrainerError, UnknownBackboneError


def _keras():
    from tensorflow import keras  # deferred: importing TF costs seconds

    return keras


@dataclass(frozen=True)
class FineTuneRecipe:
    """Hyperparameters of one training job.

    ``weights_origin`` is the pretraining corpus identifier understood by
    the backbone factory ("imagenet") or None for random initialization.
    Optimizer choice, learning rate, and backbone freezing are this
    package's defaults (Adam at 1e-3, frozen backbone, no augmentation);
    every field can be overridden.
    """

    backbone_name: str
    num_classes: int
    input_resolution: int = 128
    batch_size: int = 20
    epochs: int = 50
    dropout_rate: float = 0.5
    head_width: int = 512
    weights_origin: str | None = "imagenet"
    freeze_backbone: bool = True
    learning_rate: float = 1e-3

    def __post_init__(self):
        if not self.backbone_name:
            raise TrainerError("backbone_name must be non-empty")
        if self.num_classes < 2:
            raise TrainerError("num_classes must be at least 2")
        for field in ("input_resolution", "batch_size", "epochs", "head_width"):
            if getattr(self, field) < 1:
                raise TrainerError(f"{field} must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise TrainerError("dropout_rate must lie in [0, 1)")
        if not self.learning_rate > 0.0:
            raise TrainerError("learning_rate must be positive")

    @property
    def input_shape(self) -> tuple[int, int, int]:
        r = self.input_resolution
        return (r, r, 3)


@dataclass(frozen=True)
class Backbone:
    """A feature-extractor factory plus its matching pixel preprocessing.

    ``build(input_shape, weights)`` must return a model that maps image
    batches to flat feature vectors (global pooling included).
    ``preprocess`` maps raw RGB float arrays in [0, 255] to whatever the
    backbone was trained on; it must not modify its input.
    """

    name: str
    build: Callable[[tuple[int, int, int], str | None], Any]
    preprocess: Callable[[np.ndarray], np.ndarray]


def _application(ctor_name: str, module_name: str) -> Backbone:
    # Bind a keras.applications model by name; resolution happens at call
    # time so the registry itself stays import-cheap.
    def build(input_shape: tuple[int, int, int], weights: str | None):
        ctor = getattr(_keras().applications, ctor_name)
        return ctor(
            include_top=False, weights=weights, input_shape=input_shape, pooling="avg"
        )

    def preprocess(images: np.ndarray) -> np.ndarray:
        module = getattr(_keras().applications, module_name)
        # preprocess_input mutates float input in place; feed it a copy
        return np.asarray(module.preprocess_input(images.copy()))

    return Backbone(ctor_name, build, preprocess)


# Four compact, reliably strong ImageNet backbones ship built in; anything
# else (ResNets, DenseNets, ...) can be added via register_backbone.
BACKBONES: dict[str, Backbone] = {
    spec.name: spec
    for spec in (
        _application("MobileNet", "mobilenet"),
        _application("MobileNetV2", "mobilenet_v2"),
        _application("VGG16", "vgg16"),
        _application("VGG19", "vgg19"),
    )
}


def backbone_names() -> tuple[str, ...]:
    return tuple(sorted(BACKBONES))


def get_backbone(name: str) -> Backbone:
    try:
        return BACKBONES[name]
    except KeyError:
        known = ", ".join(backbone_names())
        raise UnknownBackboneError(f"unknown backbone {name!r}; known: {known}") from None


def register_backbone(backbone: Backbone) -> None:
    """Extend the registry; rejects duplicates to catch accidental shadowing."""
    if backbone.name in BACKBONES:
        raise TrainerError(f"backbone {backbone.name!r} is already registered")
    BACKBONES[backbone.name] = backbone


def build_model(recipe: FineTuneRecipe):
    """Assemble and compile the backbone + classification head.

    The head is Dropout(rate) -> Dense(head_width, relu) ->
    Dense(num_classes, softmax), so outputs are row-stochastic by
    construction.  With ``freeze_backbone`` the extractor runs in
    inference mode and contributes no trainable weights.
    """
    keras = _keras()
    backbone = get_backbone(recipe.backbone_name)
    base = backbone.build(recipe.input_shape, recipe.weights_origin)
    base.trainable = not recipe.freeze_backbone

    inputs = keras.Input(shape=recipe.input_shape)
    # training=False pins batch-norm statistics while the backbone is frozen
    features = base(inputs, training=False) if recipe.freeze_backbone else base(inputs)
    x = keras.layers.Dropout(recipe.dropout_rate)(features)
    x = keras.layers.Dense(recipe.head_width, activation="relu")(x)
    outputs = keras.layers.Dense(recipe.num_classes, activation="softmax")(x)
    model = keras.Model(inputs, outputs)

    model.compile(
        optimizer=keras.optimizers.Adam(learning_rate=recipe.learning_rate),
        loss="sparse_categorical_crossentropy",
        metrics=["accuracy"],
    )
    return model
