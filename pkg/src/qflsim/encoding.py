"""Classical-to-quantum data path.

Three per-sample preprocessing schemes (vanilla / mean / half), RY angle
encoding, amplitude encoding, and block-average image downsizing. The
default training pipeline is preprocess -> multiply by pi -> angle_encode;
amplitude preparation skips the radian scaling and normalizes instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CapacityError, DegenerateInputError
from .qstate import Circuit, Gate, GateKind, MAX_QUBITS, StateVector


class EncodingKind(Enum):
    VANILLA = "vanilla"
    MEAN = "mean"
    HALF = "half"


class StatePrep(Enum):
    ANGLE = "angle"
    AMPLITUDE = "amplitude"


@dataclass
class FeatureVector:
    """One classical sample: feature values plus integer class label."""

    values: np.ndarray
    label: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.label = int(self.label)
        if self.values.ndim != 1:
            raise ValueError(f"feature values must be 1-D, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature values must be finite")
        if self.label < 0:
            raise ValueError(f"label must be non-negative, got {self.label}")


def _values_of(features) -> np.ndarray:
    if isinstance(features, FeatureVector):
        return features.values
    return np.asarray(features, dtype=float)


def preprocess(features: FeatureVector, kind: EncodingKind) -> FeatureVector:
    """Apply one preprocessing scheme to a single sample.

    vanilla leaves values unchanged, mean subtracts the sample's own
    feature mean, half subtracts 0.5 (features are assumed pre-scaled
    to [0, 1]).
    """
    if features.values.size == 0:
        raise DegenerateInputError("cannot preprocess an empty feature vector")
    v = features.values
    if kind is EncodingKind.VANILLA:
        out = v.copy()
    elif kind is EncodingKind.MEAN:
        out = v - v.mean()
    elif kind is EncodingKind.HALF:
        out = v - 0.5
    else:
        raise ValueError(f"unknown encoding kind {kind!r}")
    return FeatureVector(out, features.label)


def preprocess_batch(values: np.ndarray, kind: EncodingKind) -> np.ndarray:
    """Vectorized preprocess over a (batch, features) array."""
    if kind is EncodingKind.VANILLA:
        return values
    if kind is EncodingKind.MEAN:
        return values - values.mean(axis=1, keepdims=True)
    if kind is EncodingKind.HALF:
        return values - 0.5
    raise ValueError(f"unknown encoding kind {kind!r}")


def angle_encode(features, num_qubits: int) -> Circuit:
    """RY(value_j) on qubit j mod q, no trainable slots.

    Values are used as radians directly; shorter inputs leave the
    remaining qubits at |0> (an implicit RY(0)), longer inputs wrap
    round-robin so qubit j mod q accumulates successive rotations.
    """
    if num_qubits < 1:
        raise CapacityError("angle encoding needs at least one qubit")
    values = _values_of(features)
    gates = tuple(
        Gate(GateKind.RY, (j % num_qubits,), angle=float(v)) for j, v in enumerate(values)
    )
    return Circuit(num_qubits, gates)


def amplitude_encode(features, num_qubits: int) -> StateVector:
    """State whose amplitudes are the values, zero-padded and L2-normalized."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits}")
    values = _values_of(features)
    dim = 2**num_qubits
    if values.size > dim:
        raise ValueError(f"{values.size} values do not fit in {dim} amplitudes")
    norm = np.linalg.norm(values)
    if norm == 0.0:
        raise DegenerateInputError("cannot amplitude-encode an all-zero vector")
    amps = np.zeros(dim, dtype=complex)
    amps[: values.size] = values / norm
    return StateVector(num_qubits, amps)


def resize_image(pixels, target_side: int, label: int = 0) -> FeatureVector:
    """Block-average a square image down to target_side x target_side.

    Output is row-major flattened; block means stay inside the source
    value range. Non-divisible sides use near-even block boundaries.
    """
    grid = np.asarray(pixels, dtype=float)
    if grid.ndim != 2:
        raise ValueError(f"expected a 2-D pixel grid, got shape {grid.shape}")
    rows, cols = grid.shape
    if target_side < 1:
        raise ValueError("target side must be positive")
    if target_side > rows or target_side > cols:
        raise ValueError(
            f"target side {target_side} exceeds source {rows}x{cols}"
        )
    r_edges = (np.arange(target_side + 1) * rows) // target_side
    c_edges = (np.arange(target_side + 1) * cols) // target_side
    out = np.empty((target_side, target_side), dtype=float)
    for i in range(target_side):
        for j in range(target_side):
            block = grid[r_edges[i] : r_edges[i + 1], c_edges[j] : c_edges[j + 1]]
            out[i, j] = block.mean()
    return FeatureVector(out.reshape(-1), label)
