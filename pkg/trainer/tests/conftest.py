import numpy as np
import pytest
from PIL import Image

CLASS_NAMES = ("fist", "palm", "thumb")


def write_image_tree(root, class_names=CLASS_NAMES, per_class=10, side=32, seed=7):
    """Tiny directory-per-class PNG corpus; dominant channel encodes class."""
    rng = np.random.default_rng(seed)
    for channel, name in enumerate(class_names):
        class_dir = root / name
        class_dir.mkdir(parents=True)
        for i in range(per_class):
            pixels = rng.integers(0, 60, (side, side, 3), dtype=np.uint8)
            pixels[..., channel % 3] += 150
            Image.fromarray(pixels).save(class_dir / f"img_{i:02d}.png")
    return root


@pytest.fixture(scope="session")
def image_root(tmp_path_factory):
    """Shared read-only 3 classes x 10 images fixture; never mutate it."""
    return write_image_tree(tmp_path_factory.mktemp("images"))


@pytest.fixture
def make_image_tree():
    """The tree builder itself; importlib test modules cannot import conftest."""
    return write_image_tree
