"""Tour of the statevector simulator: gates, superposition, entanglement.

Run: python demos/01_statevector.py
"""
import numpy as np

from qflsim import Gate, GateKind, apply_gate, expectation_z, probabilities, zero_state

np.set_printoptions(precision=4, suppress=True)

# A fresh register starts in |00>: amplitude 1 on the first basis state.
state = zero_state(2)
print("initial amplitudes:", state.amplitudes)

# Hadamard on qubit 0 creates an equal superposition of |00> and |10>.
state = apply_gate(state, Gate(GateKind.HADAMARD, (0,)))
print("after H on qubit 0:", state.amplitudes)

# CNOT copies that superposition onto qubit 1: the Bell state.
state = apply_gate(state, Gate(GateKind.CNOT, (0, 1)))
print("after CNOT 0->1:  ", state.amplitudes)
print("probabilities:    ", probabilities(state), "(only |00> and |11> survive)")

# Each qubit alone looks maximally mixed: <Z> = 0 for both.
print("<Z_0> =", round(expectation_z(state, 0), 12), " <Z_1> =", round(expectation_z(state, 1), 12))

# Rotation gates take an angle. RY(pi) maps |0> to |1>.
flip = apply_gate(zero_state(1), Gate(GateKind.RY, (0,), angle=np.pi))
print("\nRY(pi)|0> =", flip.amplitudes, "-> <Z> =", round(expectation_z(flip, 0), 12))

# Sweeping the angle traces out the <Z> = cos(theta) curve.
print("\ntheta      <Z>")
for theta in np.linspace(0.0, np.pi, 5):
    s = apply_gate(zero_state(1), Gate(GateKind.RY, (0,), angle=float(theta)))
    print(f"{theta:6.3f}  {expectation_z(s, 0):8.4f}")

# Gates are unitary, so norms never drift even over long gate strings.
rng = np.random.default_rng(11)
state = zero_state(3)
for _ in range(200):
    kind = rng.choice([GateKind.HADAMARD, GateKind.RX, GateKind.RY, GateKind.RZ])
    target = int(rng.integers(3))
    angle = float(rng.uniform(-np.pi, np.pi)) if kind != GateKind.HADAMARD else None
    state = apply_gate(state, Gate(kind, (target,), angle=angle))
print("\nnorm after 200 random gates:", state.norm())
