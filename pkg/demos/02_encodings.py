"""How classical features become quantum states: preprocessing + state prep.

Three feature preprocessings (vanilla, mean-centered, half-centered)
feed either rotation-angle encoding or amplitude encoding.

Run: python demos/02_encodings.py
"""
import numpy as np

from qflsim import (
    EncodingKind,
    FeatureVector,
    amplitude_encode,
    angle_encode,
    apply_circuit,
    preprocess,
    probabilities,
    zero_state,
)

np.set_printoptions(precision=4, suppress=True)

sample = FeatureVector(np.array([0.2, 0.9, 0.5, 0.0]), label=1)
print("raw features:", sample.values)

# The three preprocessings shift the same features differently.
for kind in EncodingKind:
    shifted = preprocess(sample, kind)
    print(f"{kind.value:>8}: {shifted.values}")

# Angle path: each feature (scaled to radians) becomes one RY rotation.
for kind in EncodingKind:
    x = preprocess(sample, kind)
    circuit = angle_encode(np.pi * x.values, num_qubits=4)
    state = apply_circuit(zero_state(4), circuit)
    print(f"angle/{kind.value:<8} first 4 probabilities: {probabilities(state)[:4]}")

# Amplitude path: the feature vector itself becomes the statevector
# (zero-padded to length 2^q, then L2-normalized).
state = amplitude_encode(preprocess(sample, EncodingKind.VANILLA), num_qubits=2)
print("\namplitude-encoded state:", state.amplitudes)
print("norm:", state.norm())

# The preprocessing changes which states are reachable: mean-centering
# produces negative entries, so relative signs differ.
state = amplitude_encode(preprocess(sample, EncodingKind.MEAN), num_qubits=2)
print("mean-centered amplitudes:", state.amplitudes)

# An all-zero vector cannot be normalized; the loader refuses it.
try:
    amplitude_encode(FeatureVector(np.zeros(4), 0), num_qubits=2)
except Exception as exc:
    print(f"\nall-zero input -> {type(exc).__name__}: {exc}")
