"""Data ingestion: IRIS CSV, MNIST-style IDX binaries, synthetic blobs.

All loaders return an immutable-by-convention Dataset of FeatureVectors
with features scaled to [0, 1] (min-max for IRIS, /255 for pixels). A
seeded synthetic generator stands in when no data files are available.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .encoding import FeatureVector, resize_image
from .errors import DataFormatError, DegenerateInputError

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

_IRIS_SPECIES = {"setosa": 0, "versicolor": 1, "virginica": 2}


@dataclass
class Dataset:
    """A labelled sample collection with a fixed feature dimension."""

    samples: list[FeatureVector]
    num_classes: int
    feature_dim: int
    name: str

    def __post_init__(self):
        if not self.samples:
            raise DegenerateInputError(f"dataset {self.name!r} has no samples")
        for s in self.samples:
            if s.values.shape != (self.feature_dim,):
                raise ValueError(
                    f"sample with {s.values.size} features in {self.feature_dim}-dim dataset"
                )
            if s.label >= self.num_classes:
                raise ValueError(f"label {s.label} >= num_classes {self.num_classes}")

    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.samples], dtype=int)


def _parse_iris_label(token: str, line_no: int) -> int:
    t = token.strip().strip('"').lower()
    for name, idx in _IRIS_SPECIES.items():
        if name in t:
            return idx
    try:
        value = int(float(t))
    except ValueError:
        raise DataFormatError(f"line {line_no}: unrecognized label {token!r}") from None
    if not 0 <= value <= 2:
        raise DataFormatError(f"line {line_no}: label {value} outside 0..2")
    return value


def load_iris(path) -> Dataset:
    """Load a 5-column IRIS CSV and min-max scale each feature to [0, 1].

    The label column accepts species names or integers 0..2; a header
    row is auto-detected by attempting to parse the first row.
    """
    rows: list[tuple[np.ndarray, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 5:
            raise DataFormatError(
                f"line {line_no}: expected 5 comma-separated columns, got {len(cells)}"
            )
        try:
            values = np.array([float(c) for c in cells[:4]])
        except ValueError:
            if line_no == 1 and not rows:
                continue  # header row
            raise DataFormatError(f"line {line_no}: non-numeric feature in {line!r}") from None
        rows.append((values, _parse_iris_label(cells[4], line_no)))
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    features = np.stack([v for v, _ in rows])
    lo = features.min(axis=0)
    span = features.max(axis=0) - lo
    span[span == 0.0] = 1.0  # constant column maps to 0
    scaled = (features - lo) / span
    samples = [FeatureVector(scaled[i], label) for i, (_, label) in enumerate(rows)]
    return Dataset(samples, num_classes=3, feature_dim=4, name="iris")


def _read_be32(fh, path) -> int:
    data = fh.read(4)
    if len(data) != 4:
        raise DataFormatError(f"{path}: truncated IDX header")
    return struct.unpack(">I", data)[0]


def load_mnist(images_path, labels_path, limit: int | None = None) -> Dataset:
    """Load an MNIST-style IDX image/label pair, pixels scaled to [0, 1]."""
    with open(images_path, "rb") as fh:
        magic = _read_be32(fh, images_path)
        if magic != IDX_IMAGES_MAGIC:
            raise DataFormatError(
                f"{images_path}: bad images magic 0x{magic:08x}, expected 0x{IDX_IMAGES_MAGIC:08x}"
            )
        count = _read_be32(fh, images_path)
        rows = _read_be32(fh, images_path)
        cols = _read_be32(fh, images_path)
        raw = fh.read()
    if len(raw) != count * rows * cols:
        raise DataFormatError(f"{images_path}: expected {count * rows * cols} pixel bytes, got {len(raw)}")
    images = np.frombuffer(raw, dtype=np.uint8).reshape(count, rows * cols)

    with open(labels_path, "rb") as fh:
        magic = _read_be32(fh, labels_path)
        if magic != IDX_LABELS_MAGIC:
            raise DataFormatError(
                f"{labels_path}: bad labels magic 0x{magic:08x}, expected 0x{IDX_LABELS_MAGIC:08x}"
            )
        label_count = _read_be32(fh, labels_path)
        labels = np.frombuffer(fh.read(), dtype=np.uint8)
    if labels.size != label_count:
        raise DataFormatError(f"{labels_path}: header says {label_count} labels, file has {labels.size}")
    if label_count != count:
        raise DataFormatError(
            f"image/label count mismatch: {count} images vs {label_count} labels"
        )

    if limit is not None:
        if limit < 1:
            raise DegenerateInputError(f"limit must be >= 1, got {limit}")
        images = images[:limit]
        labels = labels[:limit]
    pixels = images.astype(float) / 255.0
    samples = [FeatureVector(pixels[i], int(labels[i])) for i in range(len(labels))]
    return Dataset(samples, num_classes=int(labels.max()) + 1, feature_dim=rows * cols, name="mnist")


def synthetic_blobs(
    num_classes: int = 3,
    feature_dim: int = 4,
    num_samples: int = 150,
    seed: int = 0,
    spread: float = 0.06,
) -> Dataset:
    """Seeded Gaussian blobs per class, clipped to [0, 1]."""
    if num_classes < 1 or feature_dim < 1 or num_samples < num_classes:
        raise DegenerateInputError(
            f"cannot build {num_samples} samples of {num_classes} classes x {feature_dim} features"
        )
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.15, 0.85, size=(num_classes, feature_dim))
    labels = np.arange(num_samples) % num_classes
    points = centers[labels] + rng.normal(0.0, spread, size=(num_samples, feature_dim))
    points = np.clip(points, 0.0, 1.0)
    samples = [FeatureVector(points[i], int(labels[i])) for i in range(num_samples)]
    return Dataset(samples, num_classes, feature_dim, name="synthetic")


def filter_classes(dataset: Dataset, num_classes: int) -> Dataset:
    """Keep samples with label < num_classes."""
    if num_classes < 1 or num_classes > dataset.num_classes:
        raise DegenerateInputError(
            f"cannot keep {num_classes} of {dataset.num_classes} classes"
        )
    if num_classes == dataset.num_classes:
        return dataset
    kept = [s for s in dataset.samples if s.label < num_classes]
    return Dataset(kept, num_classes, dataset.feature_dim, name=dataset.name)


def limit_samples(dataset: Dataset, limit: int | None) -> Dataset:
    if limit is None or limit >= len(dataset.samples):
        return dataset
    return Dataset(
        dataset.samples[:limit], dataset.num_classes, dataset.feature_dim, dataset.name
    )


def resize_dataset(dataset: Dataset, target_side: int) -> Dataset:
    """Block-average every (square image) sample down to target_side**2 features."""
    side = int(round(dataset.feature_dim**0.5))
    if side * side != dataset.feature_dim:
        raise DegenerateInputError(
            f"feature dim {dataset.feature_dim} is not a square image"
        )
    if target_side == side:
        return dataset
    resized = [
        resize_image(s.values.reshape(side, side), target_side, label=s.label)
        for s in dataset.samples
    ]
    return Dataset(resized, dataset.num_classes, target_side**2, dataset.name)


def split(dataset: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Stratified train/test split, deterministic under seed."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    labels = dataset.labels()
    train_idx: list[int] = []
    test_idx: list[int] = []
    for cls in range(dataset.num_classes):
        members = np.flatnonzero(labels == cls)
        if members.size < 2:
            raise DegenerateInputError(
                f"class {cls} has {members.size} sample(s); stratified split needs >= 2"
            )
        members = members[rng.permutation(members.size)]
        n_test = max(1, round(test_fraction * members.size))
        test_idx.extend(members[:n_test].tolist())
        train_idx.extend(members[n_test:].tolist())
    train_idx.sort()
    test_idx.sort()
    make = lambda idx, tag: Dataset(
        [dataset.samples[i] for i in idx],
        dataset.num_classes,
        dataset.feature_dim,
        f"{dataset.name}/{tag}",
    )
    return make(train_idx, "train"), make(test_idx, "test")


def load_for_run(config, data_seed: int) -> Dataset:
    """Resolve a run config to a ready-to-partition Dataset.

    config is duck-typed (bench.ExperimentConfig): dataset name, class
    count, data_dir and per-source options. data_seed only matters for
    the synthetic source.
    """
    name = config.dataset
    if name == "iris":
        dataset = load_iris(config.data_dir / "iris.csv")
        return filter_classes(dataset, config.classes)
    if name == "mnist":
        dataset = load_mnist(
            config.data_dir / config.mnist_images,
            config.data_dir / config.mnist_labels,
        )
        dataset = filter_classes(dataset, config.classes)
        dataset = limit_samples(dataset, config.mnist_limit or None)
        if config.image_side:
            dataset = resize_dataset(dataset, config.image_side)
        return dataset
    if name == "synthetic":
        features = config.synthetic_features or config.qubits
        if config.synthetic_samples_per_device:
            # weak-scaling mode: dataset grows with the device count
            num_samples = config.synthetic_samples_per_device * config.n_devices
        else:
            num_samples = config.synthetic_samples
        return synthetic_blobs(
            num_classes=config.classes,
            feature_dim=features,
            num_samples=num_samples,
            seed=data_seed,
        )
    raise DataFormatError(f"unknown dataset {name!r}")
