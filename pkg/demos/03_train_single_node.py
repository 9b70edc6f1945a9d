"""Train one variational classifier centrally on IRIS (no federation).

The circuit is k layers of per-qubit RX,RY,RZ rotations plus a CNOT
ring; class scores are the Z-expectations of the first three qubits,
trained with parameter-shift gradients through a softmax cross-entropy.

Run: python demos/03_train_single_node.py
"""
from dataclasses import replace

import numpy as np

from qflsim import (
    EncodingKind,
    TrainConfig,
    build_vqc,
    evaluate,
    forward,
    init_params,
    load_iris,
    split,
    train_local,
)

dataset = load_iris("data/iris.csv")
train, test = split(dataset, test_fraction=0.2, seed=13)
print(f"{len(train.samples)} train / {len(test.samples)} test samples, "
      f"{dataset.num_classes} classes")

circuit = build_vqc(num_qubits=4, num_layers=2)
print(f"circuit: {len(circuit.gates)} gates, {circuit.num_params} trainable angles")

params = init_params(num_qubits=4, num_layers=2, seed=5)
# the landscape has a wide ln(2) plateau (two of the classes overlap);
# timid steps sit on it, so train hot with small batches
base_cfg = TrainConfig(learning_rate=3.0, local_epochs=5, batch_size=4, seed=0)

for block in range(8):
    cfg = replace(base_cfg, seed=block)
    params, epoch_losses = train_local(params, train.samples, cfg, EncodingKind.VANILLA, 3)
    train_loss, train_acc = evaluate(params, train.samples, EncodingKind.VANILLA, 3)
    test_loss, test_acc = evaluate(params, test.samples, EncodingKind.VANILLA, 3)
    print(f"epochs {5 * (block + 1):3d}: train loss={train_loss:.4f} acc={train_acc:.3f}"
          f" | test loss={test_loss:.4f} acc={test_acc:.3f}")

# Inspect a few test predictions.
print("\nsample predictions (label -> scores -> predicted):")
for sample in test.samples[::10]:
    pred = forward(params, sample, EncodingKind.VANILLA, 3)
    print(f"  {sample.label} -> {np.round(pred.scores, 3)} -> {pred.predicted}")
