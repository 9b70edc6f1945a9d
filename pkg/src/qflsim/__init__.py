"""Federated training of variational quantum classifiers on a statevector simulator."""

from .bench import (
    ExperimentConfig,
    emit_plots,
    load_config,
    parse_config,
    run_poc1,
    run_poc2,
    run_single,
)
from .datasets import (
    Dataset,
    filter_classes,
    limit_samples,
    load_iris,
    load_mnist,
    resize_dataset,
    split,
    synthetic_blobs,
)
from .encoding import (
    EncodingKind,
    FeatureVector,
    StatePrep,
    amplitude_encode,
    angle_encode,
    preprocess,
    resize_image,
)
from .errors import (
    CapacityError,
    ConfigError,
    DataFormatError,
    DegenerateInputError,
    PartitionError,
    QflError,
)
from .federation import (
    DelayParams,
    DeviceState,
    GlobalModel,
    RoundRecord,
    aggregate,
    model_delay,
    partition_non_iid,
    run_experiment,
    run_round,
    subseed,
)
from .qstate import (
    Circuit,
    Gate,
    GateKind,
    StateVector,
    apply_circuit,
    apply_gate,
    expectation_z,
    probabilities,
    zero_state,
)
from .vqc import (
    Prediction,
    TrainConfig,
    VqcParams,
    build_vqc,
    evaluate,
    forward,
    gradient,
    init_params,
    loss,
    sgd_step,
    train_local,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Circuit",
    "ConfigError",
    "DataFormatError",
    "Dataset",
    "DegenerateInputError",
    "DelayParams",
    "DeviceState",
    "EncodingKind",
    "ExperimentConfig",
    "FeatureVector",
    "Gate",
    "GateKind",
    "GlobalModel",
    "PartitionError",
    "Prediction",
    "QflError",
    "RoundRecord",
    "StatePrep",
    "StateVector",
    "TrainConfig",
    "VqcParams",
    "aggregate",
    "amplitude_encode",
    "angle_encode",
    "apply_circuit",
    "apply_gate",
    "build_vqc",
    "emit_plots",
    "evaluate",
    "expectation_z",
    "filter_classes",
    "forward",
    "gradient",
    "init_params",
    "limit_samples",
    "load_config",
    "load_iris",
    "load_mnist",
    "loss",
    "model_delay",
    "parse_config",
    "partition_non_iid",
    "preprocess",
    "probabilities",
    "resize_dataset",
    "resize_image",
    "run_experiment",
    "run_poc1",
    "run_poc2",
    "run_round",
    "run_single",
    "sgd_step",
    "split",
    "subseed",
    "synthetic_blobs",
    "train_local",
    "zero_state",
    "__version__",
]
