"""Regenerate the files shipped in data/.

- iris.csv: the classic 150-row IRIS table, species by name, from
  scikit-learn's bundled copy.
- digits-*-ubyte: scikit-learn's 8x8 handwritten digits written as an
  IDX image/label pair (pixels rescaled from 0..16 to 0..255), a fully
  offline stand-in for MNIST with the same binary layout. Samples are
  shuffled once with a fixed seed so that prefix truncation keeps a
  class mix.

Run from the repository root: python tools/make_data.py
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits, load_iris

OUT = Path(__file__).resolve().parent.parent / "data"
SHUFFLE_SEED = 20240601


def write_iris(path: Path) -> None:
    iris = load_iris()
    names = iris.target_names
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("sepal_length,sepal_width,petal_length,petal_width,species\n")
        for row, target in zip(iris.data, iris.target):
            cells = ",".join(f"{v:.1f}" for v in row)
            fh.write(f"{cells},{names[target]}\n")
    print(f"wrote {path} ({len(iris.target)} rows)")


def write_idx_pair(images_path: Path, labels_path: Path) -> None:
    digits = load_digits()
    pixels = np.round(digits.images * (255.0 / 16.0)).astype(np.uint8)
    labels = digits.target.astype(np.uint8)
    order = np.random.default_rng(SHUFFLE_SEED).permutation(len(labels))
    pixels, labels = pixels[order], labels[order]

    n, rows, cols = pixels.shape
    with open(images_path, "wb") as fh:
        fh.write(struct.pack(">IIII", 0x00000803, n, rows, cols))
        fh.write(pixels.tobytes())
    with open(labels_path, "wb") as fh:
        fh.write(struct.pack(">II", 0x00000801, n))
        fh.write(labels.tobytes())
    print(f"wrote {images_path} and {labels_path} ({n} samples, {rows}x{cols})")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    write_iris(OUT / "iris.csv")
    write_idx_pair(OUT / "digits-images-idx3-ubyte", OUT / "digits-labels-idx1-ubyte")
