"""Loaders, synthetic data, partition-friendly transforms, stratified split."""
import struct
from pathlib import Path

import numpy as np
import pytest

from qflsim.bench import ExperimentConfig
from qflsim.datasets import (
    Dataset,
    filter_classes,
    limit_samples,
    load_for_run,
    load_iris,
    load_mnist,
    resize_dataset,
    split,
    synthetic_blobs,
)
from qflsim.encoding import FeatureVector
from qflsim.errors import DataFormatError, DegenerateInputError

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def write_idx_pair(tmp_path, images, labels, magic_images=0x803, magic_labels=0x801,
                   byte_count=None, label_header=None):
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    n, rows, cols = images.shape
    img_path = tmp_path / "imgs"
    lbl_path = tmp_path / "lbls"
    body = images.tobytes()
    if byte_count is not None:
        body = body[:byte_count]
    img_path.write_bytes(struct.pack(">IIII", magic_images, n, rows, cols) + body)
    lbl_path.write_bytes(
        struct.pack(">II", magic_labels, label_header if label_header is not None else labels.size)
        + labels.tobytes()
    )
    return img_path, lbl_path


# ---------------------------------------------------------------------------
# Dataset container

def test_dataset_validates_shape_and_labels():
    with pytest.raises(DegenerateInputError):
        Dataset([], 2, 3, "empty")
    with pytest.raises(ValueError):
        Dataset([FeatureVector(np.ones(2))], 2, 3, "bad-dim")
    with pytest.raises(ValueError):
        Dataset([FeatureVector(np.ones(3), 2)], 2, 3, "bad-label")


# ---------------------------------------------------------------------------
# IRIS CSV

def test_load_iris_shipped_file():
    ds = load_iris(DATA_DIR / "iris.csv")
    assert len(ds.samples) == 150
    assert ds.num_classes == 3
    assert ds.feature_dim == 4
    labels = ds.labels()
    assert [int((labels == c).sum()) for c in range(3)] == [50, 50, 50]
    values = np.stack([s.values for s in ds.samples])
    assert np.allclose(values.min(axis=0), 0.0, atol=1e-12)
    assert np.allclose(values.max(axis=0), 1.0, atol=1e-12)


def test_load_iris_accepts_integer_labels_and_no_header(tmp_path):
    path = tmp_path / "iris.csv"
    path.write_text("5.1,3.5,1.4,0.2,0\n6.2,2.9,4.3,1.3,1\n6.3,3.3,6.0,2.5,2\n")
    ds = load_iris(path)
    assert ds.labels().tolist() == [0, 1, 2]


def test_load_iris_species_name_variants(tmp_path):
    path = tmp_path / "iris.csv"
    path.write_text(
        "a,b,c,d,species\n"
        "5.1,3.5,1.4,0.2,Iris-setosa\n"
        "6.2,2.9,4.3,1.3,\"versicolor\"\n"
        "6.3,3.3,6.0,2.5,VIRGINICA\n"
    )
    assert load_iris(path).labels().tolist() == [0, 1, 2]


def test_load_iris_reports_line_numbers(tmp_path):
    path = tmp_path / "iris.csv"
    path.write_text("5.1,3.5,1.4,0.2,0\n6.2,2.9,oops,1.3,1\n")
    with pytest.raises(DataFormatError, match="line 2"):
        load_iris(path)
    path.write_text("5.1,3.5,1.4,0.2\n")
    with pytest.raises(DataFormatError, match="line 1"):
        load_iris(path)
    path.write_text("5.1,3.5,1.4,0.2,iris-bogus\n")
    with pytest.raises(DataFormatError, match="line 1"):
        load_iris(path)
    path.write_text("5.1,3.5,1.4,0.2,7\n")
    with pytest.raises(DataFormatError, match="outside"):
        load_iris(path)


def test_load_iris_rejects_header_only(tmp_path):
    path = tmp_path / "iris.csv"
    path.write_text("a,b,c,d,label\n")
    with pytest.raises(DataFormatError, match="no data rows"):
        load_iris(path)


def test_load_iris_constant_column_maps_to_zero(tmp_path):
    path = tmp_path / "iris.csv"
    path.write_text("1.0,3.5,1.4,0.2,0\n1.0,2.9,4.3,1.3,1\n1.0,3.3,6.0,2.5,1\n")
    ds = load_iris(path)
    first = np.stack([s.values for s in ds.samples])[:, 0]
    assert np.array_equal(first, np.zeros(3))


# ---------------------------------------------------------------------------
# IDX binaries

def test_idx_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, size=(10, 4, 4), dtype=np.uint8)
    labels = rng.integers(0, 3, size=10, dtype=np.uint8)
    img, lbl = write_idx_pair(tmp_path, images, labels)
    ds = load_mnist(img, lbl)
    assert len(ds.samples) == 10
    assert ds.feature_dim == 16
    assert ds.num_classes == int(labels.max()) + 1
    assert ds.labels().tolist() == labels.tolist()
    recovered = np.stack([s.values for s in ds.samples])
    assert np.allclose(recovered, images.reshape(10, 16) / 255.0, atol=1e-12)


def test_idx_bad_magics(tmp_path):
    images = np.zeros((2, 2, 2), dtype=np.uint8)
    labels = np.zeros(2, dtype=np.uint8)
    img, lbl = write_idx_pair(tmp_path, images, labels, magic_images=0x807)
    with pytest.raises(DataFormatError, match="magic"):
        load_mnist(img, lbl)
    img, lbl = write_idx_pair(tmp_path, images, labels, magic_labels=0x803)
    with pytest.raises(DataFormatError, match="magic"):
        load_mnist(img, lbl)


def test_idx_truncated_and_mismatched(tmp_path):
    images = np.zeros((3, 2, 2), dtype=np.uint8)
    labels = np.zeros(3, dtype=np.uint8)
    img, lbl = write_idx_pair(tmp_path, images, labels, byte_count=7)
    with pytest.raises(DataFormatError, match="pixel bytes"):
        load_mnist(img, lbl)
    img, lbl = write_idx_pair(tmp_path, images, labels, label_header=5)
    with pytest.raises(DataFormatError, match="labels"):
        load_mnist(img, lbl)
    img, lbl = write_idx_pair(tmp_path, images, np.zeros(2, dtype=np.uint8))
    with pytest.raises(DataFormatError, match="mismatch"):
        load_mnist(img, lbl)
    short = tmp_path / "short"
    short.write_bytes(b"\x00\x00")
    with pytest.raises(DataFormatError, match="truncated"):
        load_mnist(short, lbl)


def test_idx_limit(tmp_path):
    images = np.zeros((30, 2, 2), dtype=np.uint8)
    labels = (np.arange(30) % 4).astype(np.uint8)
    img, lbl = write_idx_pair(tmp_path, images, labels)
    ds = load_mnist(img, lbl, limit=10)
    assert len(ds.samples) == 10
    with pytest.raises(DegenerateInputError):
        load_mnist(img, lbl, limit=0)


def test_shipped_digits_files():
    ds = load_mnist(
        DATA_DIR / "digits-images-idx3-ubyte", DATA_DIR / "digits-labels-idx1-ubyte"
    )
    assert len(ds.samples) == 1797
    assert ds.feature_dim == 64
    assert ds.num_classes == 10
    values = np.stack([s.values for s in ds.samples])
    assert values.min() >= 0.0 and values.max() <= 1.0


# ---------------------------------------------------------------------------
# synthetic blobs

def test_synthetic_blobs_shape_and_determinism():
    a = synthetic_blobs(num_classes=3, feature_dim=4, num_samples=90, seed=5)
    b = synthetic_blobs(num_classes=3, feature_dim=4, num_samples=90, seed=5)
    c = synthetic_blobs(num_classes=3, feature_dim=4, num_samples=90, seed=6)
    assert len(a.samples) == 90 and a.num_classes == 3 and a.feature_dim == 4
    labels = a.labels()
    assert [int((labels == i).sum()) for i in range(3)] == [30, 30, 30]
    values = np.stack([s.values for s in a.samples])
    assert values.min() >= 0.0 and values.max() <= 1.0
    assert np.array_equal(values, np.stack([s.values for s in b.samples]))
    assert not np.array_equal(values, np.stack([s.values for s in c.samples]))


def test_synthetic_blobs_rejects_degenerate_requests():
    with pytest.raises(DegenerateInputError):
        synthetic_blobs(num_classes=3, num_samples=2)
    with pytest.raises(DegenerateInputError):
        synthetic_blobs(feature_dim=0)


# ---------------------------------------------------------------------------
# transforms

def test_filter_classes_keeps_prefix_labels():
    ds = synthetic_blobs(num_classes=4, num_samples=40, seed=1)
    kept = filter_classes(ds, 2)
    assert kept.num_classes == 2
    assert set(kept.labels().tolist()) == {0, 1}
    assert len(kept.samples) == 20
    assert filter_classes(ds, 4) is ds
    with pytest.raises(DegenerateInputError):
        filter_classes(ds, 5)
    with pytest.raises(DegenerateInputError):
        filter_classes(ds, 0)


def test_limit_samples():
    ds = synthetic_blobs(num_samples=30, seed=2)
    assert len(limit_samples(ds, 12).samples) == 12
    assert limit_samples(ds, None) is ds
    assert limit_samples(ds, 100) is ds


def test_resize_dataset_square_images():
    rng = np.random.default_rng(3)
    pixels = rng.uniform(0, 1, size=(5, 64))
    ds = Dataset([FeatureVector(pixels[i], i % 2) for i in range(5)], 2, 64, "img")
    small = resize_dataset(ds, 4)
    assert small.feature_dim == 16
    assert all(s.values.shape == (16,) for s in small.samples)
    assert small.labels().tolist() == ds.labels().tolist()
    assert resize_dataset(ds, 8) is ds


def test_resize_dataset_rejects_non_square():
    ds = Dataset([FeatureVector(np.ones(12))], 1, 12, "odd")
    with pytest.raises(DegenerateInputError, match="square"):
        resize_dataset(ds, 2)


# ---------------------------------------------------------------------------
# stratified split

def test_split_iris_120_30_stratified():
    ds = load_iris(DATA_DIR / "iris.csv")
    train, test = split(ds, 0.2, seed=42)
    assert len(train.samples) == 120
    assert len(test.samples) == 30
    test_labels = test.labels()
    assert [int((test_labels == c).sum()) for c in range(3)] == [10, 10, 10]


def test_split_is_disjoint_and_covering():
    ds = synthetic_blobs(num_samples=60, seed=4)
    train, test = split(ds, 0.25, seed=0)
    train_ids = {id(s) for s in train.samples}
    test_ids = {id(s) for s in test.samples}
    assert not train_ids & test_ids
    assert len(train_ids | test_ids) == 60


def test_split_deterministic_under_seed():
    ds = synthetic_blobs(num_samples=45, seed=5)
    a_train, a_test = split(ds, 0.2, seed=9)
    b_train, b_test = split(ds, 0.2, seed=9)
    c_train, _ = split(ds, 0.2, seed=10)
    key = lambda d: [tuple(s.values) for s in d.samples]
    assert key(a_train) == key(b_train)
    assert key(a_test) == key(b_test)
    assert key(a_train) != key(c_train)


def test_split_validates_fraction_and_class_size():
    ds = synthetic_blobs(num_samples=30, seed=6)
    with pytest.raises(ValueError):
        split(ds, 0.0, seed=0)
    with pytest.raises(ValueError):
        split(ds, 1.0, seed=0)
    tiny = Dataset(
        [FeatureVector(np.ones(2), 0), FeatureVector(np.ones(2), 0), FeatureVector(np.ones(2), 1)],
        2, 2, "tiny",
    )
    with pytest.raises(DegenerateInputError):
        split(tiny, 0.2, seed=0)


# ---------------------------------------------------------------------------
# config-driven dispatch

def test_load_for_run_iris():
    cfg = ExperimentConfig(dataset="iris", data_dir=DATA_DIR)
    ds = load_for_run(cfg, data_seed=0)
    assert ds.name == "iris"
    assert len(ds.samples) == 150


def test_load_for_run_iris_two_classes():
    cfg = ExperimentConfig(dataset="iris", classes=2, classes_per_device=2, data_dir=DATA_DIR)
    ds = load_for_run(cfg, data_seed=0)
    assert ds.num_classes == 2
    assert len(ds.samples) == 100


def test_load_for_run_mnist_resizes_and_limits():
    cfg = ExperimentConfig(dataset="mnist", data_dir=DATA_DIR, mnist_limit=200, image_side=4)
    ds = load_for_run(cfg, data_seed=0)
    assert ds.num_classes == 4
    assert ds.feature_dim == 16
    assert len(ds.samples) == 200


def test_load_for_run_synthetic_defaults_features_to_qubits():
    cfg = ExperimentConfig(dataset="synthetic", qubits=5, classes=3)
    ds = load_for_run(cfg, data_seed=11)
    assert ds.feature_dim == 5
    assert len(ds.samples) == cfg.synthetic_samples


def test_load_for_run_synthetic_weak_scaling():
    cfg = ExperimentConfig(
        dataset="synthetic", n_devices=6, synthetic_samples_per_device=20
    )
    ds = load_for_run(cfg, data_seed=11)
    assert len(ds.samples) == 120


def test_load_for_run_synthetic_uses_data_seed():
    cfg = ExperimentConfig(dataset="synthetic")
    a = load_for_run(cfg, data_seed=1)
    b = load_for_run(cfg, data_seed=2)
    assert not np.array_equal(
        np.stack([s.values for s in a.samples]), np.stack([s.values for s in b.samples])
    )


def test_load_for_run_unknown_dataset():
    cfg = ExperimentConfig(dataset="iris")
    cfg.dataset = "parquet"  # bypass the constructor check to hit the loader's
    with pytest.raises(DataFormatError, match="parquet"):
        load_for_run(cfg, data_seed=0)
