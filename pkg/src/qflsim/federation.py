"""Round-based federated training of VQCs by parameter averaging.

One communication round: broadcast the global parameters to every
device, let each device run local mini-batch SGD on its own shard,
then average the returned parameter vectors elementwise. Devices never
see each other's data or parameters. A synchronous full-participation
barrier is assumed; communication cost is modeled analytically and the
simulated round is also wall-clock timed.
"""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, replace

import numpy as np

from . import datasets as ds
from .datasets import Dataset
from .encoding import EncodingKind, FeatureVector, StatePrep
from .errors import ConfigError, DegenerateInputError, PartitionError
from .vqc import TrainConfig, VqcParams, evaluate, init_params, train_local

PARAM_BYTES = 8  # float64 angles on the wire


def subseed(seed: int, name: str) -> int:
    """Stable named sub-seed so each randomness consumer is independently reproducible."""
    digest = hashlib.sha256(f"{seed}/{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


@dataclass
class DelayParams:
    """Link model for the analytic communication delay."""

    bandwidth_Bps: float = 1e6
    per_device_latency_s: float = 0.01

    def __post_init__(self):
        if not self.bandwidth_Bps > 0:
            raise ValueError(f"bandwidth_Bps must be > 0, got {self.bandwidth_Bps}")
        if self.per_device_latency_s < 0:
            raise ValueError(
                f"per_device_latency_s must be >= 0, got {self.per_device_latency_s}"
            )


@dataclass
class DeviceState:
    """One federated participant: shard, local parameter copy, rng seed."""

    device_id: int
    shard: list[FeatureVector]
    params: VqcParams
    seed: int

    def __post_init__(self):
        if not self.shard:
            raise DegenerateInputError(f"device {self.device_id} has an empty shard")


@dataclass
class GlobalModel:
    params: VqcParams
    round: int = 0


@dataclass
class RoundRecord:
    """Metrics of one communication round (test fields None when not evaluated)."""

    round: int
    mean_train_loss: float
    mean_train_accuracy: float
    test_loss: float | None
    test_accuracy: float | None
    wall_clock_s: float
    modeled_delay_s: float


def partition_non_iid(
    dataset: Dataset, n_devices: int, classes_per_device: int, seed: int
) -> list[list[FeatureVector]]:
    """Assign classes_per_device distinct classes to each device and split.

    Classes are dealt round-robin from a seeded class permutation, so all
    classes are covered whenever n*cpd >= C; each class's samples are then
    shared evenly among its holders. classes_per_device == C collapses to
    a stratified IID split. Shards are pairwise disjoint and cover the
    dataset; infeasible assignments raise PartitionError.
    """
    num_classes = dataset.num_classes
    if n_devices < 1:
        raise PartitionError(f"need at least one device, got {n_devices}")
    if not 1 <= classes_per_device <= num_classes:
        raise PartitionError(
            f"classes_per_device must be in [1, {num_classes}], got {classes_per_device}"
        )
    if n_devices * classes_per_device < num_classes:
        raise PartitionError(
            f"{n_devices} devices x {classes_per_device} classes cannot cover "
            f"{num_classes} classes"
        )
    rng = np.random.default_rng(seed)
    perm = rng.permutation(num_classes)
    holders: dict[int, list[int]] = {c: [] for c in range(num_classes)}
    cursor = 0
    for device in range(n_devices):
        for _ in range(classes_per_device):
            holders[int(perm[cursor % num_classes])].append(device)
            cursor += 1

    labels = dataset.labels()
    shards: list[list[FeatureVector]] = [[] for _ in range(n_devices)]
    for cls in range(num_classes):
        members = np.flatnonzero(labels == cls)
        if members.size == 0:
            raise PartitionError(f"class {cls} has no samples")
        devices = holders[cls]
        if members.size < len(devices):
            raise PartitionError(
                f"class {cls} has {members.size} samples for {len(devices)} devices"
            )
        members = members[rng.permutation(members.size)]
        for device, chunk in zip(devices, np.array_split(members, len(devices))):
            shards[device].extend(dataset.samples[i] for i in chunk)
    return shards


def aggregate(models: list[VqcParams], weights=None) -> VqcParams:
    """Elementwise mean of parameter vectors, uniform unless weights given.

    Computed in centered form (first model plus mean deviation) so that
    averaging identical models returns them bit-exactly, and clamped to
    the elementwise min/max envelope of the inputs.
    """
    if not models:
        raise ValueError("cannot aggregate an empty model list")
    flats = np.stack([m.flat() for m in models])
    base = flats[0]
    if weights is None:
        mean = base + (flats - base).mean(axis=0)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(models),) or w.min() < 0 or w.sum() <= 0:
            raise ValueError(f"need {len(models)} non-negative weights with positive sum")
        w = w / w.sum()
        mean = base + w @ (flats - base)
    mean = np.clip(mean, flats.min(axis=0), flats.max(axis=0))
    return VqcParams.from_flat(mean, models[0].num_layers, models[0].num_qubits)


def model_delay(n_devices: int, num_qubits: int, num_layers: int, link: DelayParams) -> float:
    """Analytic per-round communication delay, strictly increasing in n, q, k.

    Each device downloads and uploads the flat parameter vector:
    payload = 8 bytes * 3*k*q * 2 directions.
    """
    if n_devices < 1 or num_qubits < 1 or num_layers < 1:
        raise ValueError("n_devices, num_qubits and num_layers must be positive")
    payload_bytes = PARAM_BYTES * 3 * num_layers * num_qubits * 2
    return n_devices * (payload_bytes / link.bandwidth_Bps + link.per_device_latency_s)


def run_round(
    global_model: GlobalModel,
    devices: list[DeviceState],
    cfg: TrainConfig,
    kind: EncodingKind,
    num_classes: int,
    delay: DelayParams,
    state_prep: StatePrep = StatePrep.ANGLE,
    test_samples=None,
    weighted: bool = False,
) -> tuple[GlobalModel, RoundRecord]:
    """One synchronous round: broadcast, local training, averaging.

    Device shuffle seeds are derived from the device seed and the round
    counter, so rounds are reproducible yet not identical. Each device's
    post-round params are exactly its own training result; only the
    returned GlobalModel sees the average.
    """
    if not devices:
        raise DegenerateInputError("run_round needs at least one device")
    started = time.perf_counter()
    broadcast = global_model.params
    losses, accuracies = [], []
    for device in devices:
        device.params = broadcast
        dev_cfg = replace(cfg, seed=subseed(device.seed, f"round/{global_model.round}"))
        trained, _ = train_local(device.params, device.shard, dev_cfg, kind, num_classes, state_prep)
        device.params = trained
        shard_loss, shard_acc = evaluate(trained, device.shard, kind, num_classes, state_prep)
        losses.append(shard_loss)
        accuracies.append(shard_acc)
    shard_sizes = [len(d.shard) for d in devices] if weighted else None
    new_params = aggregate([d.params for d in devices], shard_sizes)
    wall = time.perf_counter() - started

    q, k = new_params.num_qubits, new_params.num_layers
    test_loss = test_accuracy = None
    if test_samples:
        new_global_eval = evaluate(new_params, test_samples, kind, num_classes, state_prep)
        test_loss, test_accuracy = new_global_eval
    record = RoundRecord(
        round=global_model.round + 1,
        mean_train_loss=float(np.mean(losses)),
        mean_train_accuracy=float(np.mean(accuracies)),
        test_loss=test_loss,
        test_accuracy=test_accuracy,
        wall_clock_s=wall,
        modeled_delay_s=model_delay(len(devices), q, k, delay),
    )
    return GlobalModel(new_params, global_model.round + 1), record


def run_experiment(config, dataset: Dataset | None = None) -> list[RoundRecord]:
    """Full experiment: load, split, partition, train for config.rounds rounds.

    config is a bench.ExperimentConfig (duck-typed here to keep the
    dependency direction bench -> federation). All randomness flows from
    config.seed through named sub-seeds: split, partition, init, device/i.
    """
    if config.classes > config.qubits:
        raise ConfigError(
            f"classes ({config.classes}) must be <= qubits ({config.qubits})"
        )
    if dataset is None:
        dataset = ds.load_for_run(config, subseed(config.seed, "data"))
    if dataset.num_classes != config.classes:
        raise ConfigError(
            f"dataset has {dataset.num_classes} classes, config expects {config.classes}"
        )
    train_set, test_set = ds.split(dataset, 0.2, subseed(config.seed, "split"))
    shards = partition_non_iid(
        train_set, config.n_devices, config.classes_per_device, subseed(config.seed, "partition")
    )
    params0 = init_params(config.qubits, config.layers, subseed(config.seed, "init"))
    devices = [
        DeviceState(i, shards[i], params0, subseed(config.seed, f"device/{i}"))
        for i in range(config.n_devices)
    ]
    global_model = GlobalModel(params0, 0)
    records: list[RoundRecord] = []
    for _ in range(config.rounds):
        global_model, record = run_round(
            global_model,
            devices,
            config.train,
            config.encoding,
            config.classes,
            config.delay,
            config.state_prep,
            test_samples=test_set.samples,
            weighted=config.weighted_average,
        )
        records.append(record)
    return records
