"""Variational quantum classifier.

Circuit template: k layers of per-qubit RX,RY,RZ trainable rotations
followed by a CNOT ring (omitted on one qubit). Readout is the exact
Z expectation of the first C qubits; class scores go through a softmax
cross-entropy with temperature 1.

Gradients use the two-point parameter-shift rule at the score level,
(E(theta+pi/2) - E(theta-pi/2)) / 2 per slot, chained analytically
through the softmax. All 2P+1 parameter variants of a batch are pushed
through the gate kernels together as one (variants, batch, 2**q) array,
which is what keeps desk-scale training in seconds rather than hours.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .encoding import EncodingKind, FeatureVector, StatePrep, preprocess_batch
from .errors import ConfigError, DegenerateInputError
from .qstate import (
    Circuit,
    Gate,
    GateKind,
    MAX_QUBITS,
    apply_circuit,
    apply_single_kernel,
    expectation_z,
    expectation_z_kernel,
    rotation_matrix,
    run_gates,
    zero_state,
)

SHIFT = np.pi / 2.0  # parameter-shift offset for exp(-i*theta*sigma/2) generators


@dataclass(frozen=True)
class VqcParams:
    """Trainable angles, shape (layers, qubits, 3); flattened layer-major."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 3 or a.shape[2] != 3:
            raise ValueError(f"angles must have shape (k, q, 3), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("angles must be finite")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @property
    def num_layers(self) -> int:
        return self.angles.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.angles.shape[1]

    def flat(self) -> np.ndarray:
        """Layer-major flat copy, length 3*k*q (the transport layout)."""
        return self.angles.reshape(-1).copy()

    @staticmethod
    def from_flat(flat, num_layers: int, num_qubits: int) -> "VqcParams":
        a = np.asarray(flat, dtype=float)
        if a.shape != (3 * num_layers * num_qubits,):
            raise ValueError(
                f"expected {3 * num_layers * num_qubits} values, got shape {a.shape}"
            )
        return VqcParams(a.reshape(num_layers, num_qubits, 3))


@dataclass(frozen=True)
class TrainConfig:
    """Local-training hyperparameters."""

    learning_rate: float = 0.5
    local_epochs: int = 1
    batch_size: int = 16
    seed: int = 7

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.local_epochs < 1:
            raise ValueError(f"local_epochs must be >= 1, got {self.local_epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class Prediction:
    """Per-class scores and the argmax class (ties break to the lowest index)."""

    scores: np.ndarray
    predicted: int


def init_params(num_qubits: int, num_layers: int, seed: int) -> VqcParams:
    """Seeded uniform init on [-0.1, 0.1]."""
    rng = np.random.default_rng(seed)
    return VqcParams(rng.uniform(-0.1, 0.1, size=(num_layers, num_qubits, 3)))


@lru_cache(maxsize=None)
def build_vqc(num_qubits: int, num_layers: int) -> Circuit:
    """Layered ansatz: RX,RY,RZ slots on every qubit, then a CNOT ring."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits}")
    if num_layers < 1:
        raise ConfigError(f"layer count must be >= 1, got {num_layers}")
    gates: list[Gate] = []
    slots: list[tuple[int, int]] = []
    param_idx = 0
    for _layer in range(num_layers):
        for qubit in range(num_qubits):
            for kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
                slots.append((len(gates), param_idx))
                gates.append(Gate(kind, (qubit,), angle=0.0))
                param_idx += 1
        if num_qubits > 1:
            for qubit in range(num_qubits):
                gates.append(Gate(GateKind.CNOT, (qubit, (qubit + 1) % num_qubits)))
    return Circuit(num_qubits, tuple(gates), tuple(slots))


# ---------------------------------------------------------------------------
# batched engine

def _batch_values(samples) -> tuple[np.ndarray, np.ndarray]:
    """Stack sample values/labels; all samples must share a feature dim."""
    if len(samples) == 0:
        raise DegenerateInputError("empty sample batch")
    values = np.stack([s.values for s in samples])
    labels = np.array([s.label for s in samples], dtype=int)
    return values, labels


def encode_batch(
    values: np.ndarray, num_qubits: int, kind: EncodingKind, state_prep: StatePrep
) -> np.ndarray:
    """Initial states (batch, 2**q) for preprocessed-and-prepared samples."""
    x = preprocess_batch(values, kind)
    batch = x.shape[0]
    dim = 2**num_qubits
    if state_prep is StatePrep.AMPLITUDE:
        if x.shape[1] > dim:
            raise ValueError(f"{x.shape[1]} features do not fit in {dim} amplitudes")
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms == 0.0):
            raise DegenerateInputError("cannot amplitude-encode an all-zero vector")
        amps = np.zeros((batch, dim), dtype=complex)
        amps[:, : x.shape[1]] = x / norms[:, None]
        return amps
    # angle path: RY(pi * value_j) on qubit j mod q
    amps = np.zeros((batch, dim), dtype=complex)
    amps[:, 0] = 1.0
    for j in range(x.shape[1]):
        mats = rotation_matrix(GateKind.RY, np.pi * x[:, j])
        apply_single_kernel(amps, mats, j % num_qubits, num_qubits)
    return amps


def scores_from_amps(amps: np.ndarray, num_classes: int, num_qubits: int) -> np.ndarray:
    """Z expectations of the first num_classes qubits; shape (..., C)."""
    return np.stack(
        [expectation_z_kernel(amps, c, num_qubits) for c in range(num_classes)], axis=-1
    )


def _softmax(scores: np.ndarray, temperature: float = 1.0) -> np.ndarray:
    z = scores / temperature
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def batch_scores(
    params: VqcParams,
    values: np.ndarray,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep = StatePrep.ANGLE,
) -> np.ndarray:
    """Forward a (batch, features) array to class scores (batch, C)."""
    q, k = params.num_qubits, params.num_layers
    if num_classes > q:
        raise ConfigError(f"{num_classes} classes need at least {num_classes} qubits, have {q}")
    amps = encode_batch(values, q, kind, state_prep)
    run_gates(amps, build_vqc(q, k), params.flat())
    return scores_from_amps(amps, num_classes, q)


def _loss_and_grad_batch(
    params: VqcParams,
    values: np.ndarray,
    labels: np.ndarray,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep,
    temperature: float = 1.0,
) -> tuple[float, np.ndarray]:
    """Mean batch loss plus its exact parameter-shift gradient."""
    q, k = params.num_qubits, params.num_layers
    if num_classes > q:
        raise ConfigError(f"{num_classes} classes need at least {num_classes} qubits, have {q}")
    circuit = build_vqc(q, k)
    theta = params.flat()
    n_params = theta.size
    init = encode_batch(values, q, kind, state_prep)
    batch = init.shape[0]

    # variant 0 is the unshifted pass; then +pi/2 and -pi/2 per parameter
    eye = np.eye(n_params) * SHIFT
    variants = np.vstack([theta[None, :], theta + eye, theta - eye])
    amps = np.broadcast_to(init, (variants.shape[0],) + init.shape).copy()
    run_gates(amps, circuit, variants)
    scores = scores_from_amps(amps, num_classes, q)  # (V, B, C)

    probs = _softmax(scores[0], temperature)
    losses = -np.log(probs[np.arange(batch), labels])
    dl_ds = probs.copy()
    dl_ds[np.arange(batch), labels] -= 1.0
    dl_ds /= temperature

    ds_dtheta = (scores[1 : n_params + 1] - scores[n_params + 1 :]) / 2.0  # (P, B, C)
    grad = np.einsum("pbc,bc->p", ds_dtheta, dl_ds) / batch
    return float(losses.mean()), grad


# ---------------------------------------------------------------------------
# public operations

def forward(
    params: VqcParams,
    sample: FeatureVector,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep = StatePrep.ANGLE,
) -> Prediction:
    """Encode one sample, run the ansatz, read out class scores."""
    scores = batch_scores(params, sample.values[None, :], kind, num_classes, state_prep)[0]
    return Prediction(scores=scores, predicted=int(np.argmax(scores)))


def loss(prediction: Prediction, label: int, temperature: float = 1.0) -> float:
    """Softmax cross-entropy -log p(label) over the class scores."""
    if not 0 <= label < prediction.scores.shape[-1]:
        raise ValueError(f"label {label} out of range for {prediction.scores.shape[-1]} classes")
    probs = _softmax(prediction.scores, temperature)
    return float(-np.log(probs[label]))


def gradient(
    params: VqcParams,
    batch,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep = StatePrep.ANGLE,
) -> np.ndarray:
    """Flat gradient of the mean batch loss w.r.t. every trainable angle."""
    values, labels = _batch_values(batch)
    if params.flat().size == 0:
        return np.zeros(0)
    _, grad = _loss_and_grad_batch(params, values, labels, kind, num_classes, state_prep)
    return grad


def sgd_step(params: VqcParams, grad: np.ndarray, cfg: TrainConfig) -> VqcParams:
    """One gradient-descent update: params - learning_rate * grad."""
    flat = params.flat()
    g = np.asarray(grad, dtype=float)
    if g.shape != flat.shape:
        raise ValueError(f"gradient shape {g.shape} does not match params {flat.shape}")
    return VqcParams.from_flat(flat - cfg.learning_rate * g, params.num_layers, params.num_qubits)


def evaluate(
    params: VqcParams,
    samples,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep = StatePrep.ANGLE,
    temperature: float = 1.0,
) -> tuple[float, float]:
    """(mean loss, accuracy) of params over a sample list."""
    values, labels = _batch_values(samples)
    scores = batch_scores(params, values, kind, num_classes, state_prep)
    probs = _softmax(scores, temperature)
    mean_loss = float(-np.log(probs[np.arange(len(labels)), labels]).mean())
    accuracy = float((scores.argmax(axis=1) == labels).mean())
    return mean_loss, accuracy


def train_local(
    params: VqcParams,
    shard,
    cfg: TrainConfig,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep = StatePrep.ANGLE,
) -> tuple[VqcParams, list[float]]:
    """Mini-batch SGD over the shard; returns final params and per-epoch mean loss.

    Batch order is a seeded shuffle per epoch; the reported epoch loss is
    the sample-weighted mean of each batch's pre-update loss.
    """
    values, labels = _batch_values(shard)
    rng = np.random.default_rng(cfg.seed)
    n = values.shape[0]
    epoch_losses: list[float] = []
    for _epoch in range(cfg.local_epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            batch_loss, grad = _loss_and_grad_batch(
                params, values[idx], labels[idx], kind, num_classes, state_prep
            )
            total += batch_loss * idx.size
            params = sgd_step(params, grad, cfg)
        epoch_losses.append(total / n)
    return params, epoch_losses


def encoder_circuit(sample: FeatureVector, num_qubits: int, kind: EncodingKind) -> Circuit:
    """The angle-path encoder as an explicit circuit (preprocess, scale by pi, RY)."""
    from .encoding import angle_encode, preprocess

    x = preprocess(sample, kind)
    return angle_encode(np.pi * x.values, num_qubits)


def forward_via_circuits(
    params: VqcParams,
    sample: FeatureVector,
    kind: EncodingKind,
    num_classes: int,
    state_prep: StatePrep = StatePrep.ANGLE,
) -> Prediction:
    """Forward pass built from the public single-state ops; equals forward().

    Kept as the slow reference route; the batched engine is cross-checked
    against it in the test suite.
    """
    from .encoding import amplitude_encode, preprocess

    q, k = params.num_qubits, params.num_layers
    if num_classes > q:
        raise ConfigError(f"{num_classes} classes need at least {num_classes} qubits, have {q}")
    if state_prep is StatePrep.AMPLITUDE:
        state = amplitude_encode(preprocess(sample, kind), q)
    else:
        state = apply_circuit(zero_state(q), encoder_circuit(sample, q, kind))
    state = apply_circuit(state, build_vqc(q, k), params.flat())
    scores = np.array([expectation_z(state, c) for c in range(num_classes)])
    return Prediction(scores=scores, predicted=int(np.argmax(scores)))
