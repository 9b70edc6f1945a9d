"""Dense statevector quantum simulator.

Conventions (fixed here and mirrored by the test oracle):

- Basis index: qubit 0 is the MOST significant bit of the basis index,
  so for q qubits the state of qubit t lives at bit position q-1-t.
  |10> on two qubits is amplitude index 2.
- Rotation gates are RX/RY/RZ = exp(-i * theta * sigma / 2) with the
  textbook Pauli matrices; CNOT is written in the |control,target> basis.

Gate kernels operate in place on arrays of shape (..., 2**q): any leading
axes are batch axes, which is what makes batched training cheap. The
public API wraps them in immutable StateVector/Gate/Circuit values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CapacityError

MAX_QUBITS = 12  # dense 2**q amplitudes; 12 keeps a state under 1 MB

_SQRT2_INV = 1.0 / math.sqrt(2.0)


class GateKind(Enum):
    PAULI_X = "x"
    PAULI_Y = "y"
    PAULI_Z = "z"
    HADAMARD = "h"
    CNOT = "cnot"
    RX = "rx"
    RY = "ry"
    RZ = "rz"


ROTATION_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ})

_FIXED_MATRICES = {
    GateKind.PAULI_X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.PAULI_Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.PAULI_Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.HADAMARD: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


def rotation_matrix(kind: GateKind, theta) -> np.ndarray:
    """2x2 rotation matrix exp(-i*theta*sigma/2); theta may carry batch axes.

    Returns an array of shape theta.shape + (2, 2).
    """
    t = np.asarray(theta, dtype=float)
    half = t / 2.0
    out = np.empty(t.shape + (2, 2), dtype=complex)
    c, s = np.cos(half), np.sin(half)
    if kind is GateKind.RX:
        out[..., 0, 0] = c
        out[..., 0, 1] = -1j * s
        out[..., 1, 0] = -1j * s
        out[..., 1, 1] = c
    elif kind is GateKind.RY:
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
    elif kind is GateKind.RZ:
        out[..., 0, 0] = np.exp(-1j * half)
        out[..., 0, 1] = 0
        out[..., 1, 0] = 0
        out[..., 1, 1] = np.exp(1j * half)
    else:
        raise ValueError(f"{kind} is not a rotation gate")
    return out


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, target qubit(s), optional rotation angle."""

    kind: GateKind
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        arity = 2 if self.kind is GateKind.CNOT else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.kind.value} expects {arity} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate target qubits {self.targets}")
        if self.kind in ROTATION_KINDS:
            if self.angle is None:
                raise ValueError(f"{self.kind.value} requires an angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} does not take an angle")

    def matrix(self) -> np.ndarray:
        """Unitary matrix of this gate (2x2, or 4x4 for CNOT)."""
        if self.kind in ROTATION_KINDS:
            return rotation_matrix(self.kind, self.angle)
        return _FIXED_MATRICES[self.kind].copy()


@dataclass(frozen=True)
class StateVector:
    """Pure q-qubit state: 2**q complex amplitudes, unit norm."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list; param_slots maps (gate index -> flat parameter index).

    Slot gates must be rotations; their stored angle is a placeholder that
    apply_circuit replaces with the supplied parameter value.
    """

    num_qubits: int
    gates: tuple[Gate, ...]
    param_slots: tuple[tuple[int, int], ...] = ()
    # gate index -> parameter index, derived once for the apply loop
    slot_by_gate: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "param_slots", tuple((int(g), int(p)) for g, p in self.param_slots))
        for gate in self.gates:
            for t in gate.targets:
                if not 0 <= t < self.num_qubits:
                    raise IndexError(f"gate target {t} out of range for {self.num_qubits} qubits")
        slot_by_gate = {}
        for gate_idx, param_idx in self.param_slots:
            if not 0 <= gate_idx < len(self.gates):
                raise ValueError(f"param slot references missing gate {gate_idx}")
            if self.gates[gate_idx].kind not in ROTATION_KINDS:
                raise ValueError(f"param slot {gate_idx} references a non-rotation gate")
            if gate_idx in slot_by_gate:
                raise ValueError(f"gate {gate_idx} bound to more than one parameter")
            slot_by_gate[gate_idx] = param_idx
        object.__setattr__(self, "slot_by_gate", slot_by_gate)

    @property
    def num_params(self) -> int:
        return max((p for _, p in self.param_slots), default=-1) + 1


# ---------------------------------------------------------------------------
# kernels: in-place operations on arrays of shape (..., 2**q)

def apply_single_kernel(amps: np.ndarray, mats: np.ndarray, qubit: int, num_qubits: int) -> None:
    """Apply one-qubit matrices in place.

    mats is (2, 2) for a shared gate, or (..., 2, 2) with leading axes
    broadcastable against the leading axes of amps (per-batch matrices).
    """
    low = 1 << (num_qubits - 1 - qubit)
    high = amps.shape[-1] // (2 * low)
    view = amps.reshape(amps.shape[:-1] + (high, 2, low))
    a = view[..., 0, :]
    b = view[..., 1, :]
    if mats.ndim == 2:
        u00, u01, u10, u11 = mats[0, 0], mats[0, 1], mats[1, 0], mats[1, 1]
    else:
        u00 = mats[..., 0, 0, None, None]
        u01 = mats[..., 0, 1, None, None]
        u10 = mats[..., 1, 0, None, None]
        u11 = mats[..., 1, 1, None, None]
    new_a = u00 * a + u01 * b
    new_b = u10 * a + u11 * b
    view[..., 0, :] = new_a
    view[..., 1, :] = new_b


def apply_cnot_kernel(amps: np.ndarray, control: int, target: int, num_qubits: int) -> None:
    """Apply CNOT in place by swapping target amplitudes where control=1."""
    first, second = sorted((control, target))
    low = 1 << (num_qubits - 1 - second)
    mid = 1 << (second - first - 1)
    high = amps.shape[-1] // (4 * mid * low)
    view = amps.reshape(amps.shape[:-1] + (high, 2, mid, 2, low))
    if control < target:
        tmp = view[..., 1, :, 0, :].copy()
        view[..., 1, :, 0, :] = view[..., 1, :, 1, :]
        view[..., 1, :, 1, :] = tmp
    else:
        tmp = view[..., 0, :, 1, :].copy()
        view[..., 0, :, 1, :] = view[..., 1, :, 1, :]
        view[..., 1, :, 1, :] = tmp


def expectation_z_kernel(amps: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    """<Z_qubit> for every state in the batch; output drops the last axis."""
    low = 1 << (num_qubits - 1 - qubit)
    high = amps.shape[-1] // (2 * low)
    p = (amps.real**2 + amps.imag**2).reshape(amps.shape[:-1] + (high, 2, low))
    return p[..., 0, :].sum(axis=(-2, -1)) - p[..., 1, :].sum(axis=(-2, -1))


def run_gates(amps: np.ndarray, circuit: Circuit, params: np.ndarray | None = None) -> None:
    """Apply circuit in place to a (..., 2**q) batch.

    params is a flat (P,) vector, or (V, P) to evaluate V parameter
    variants at once (amps must then carry a matching leading V axis).
    """
    q = circuit.num_qubits
    slot_by_gate = circuit.slot_by_gate
    variant_axis = params is not None and params.ndim == 2
    for gate_idx, gate in enumerate(circuit.gates):
        if gate.kind is GateKind.CNOT:
            apply_cnot_kernel(amps, gate.targets[0], gate.targets[1], q)
            continue
        param_idx = slot_by_gate.get(gate_idx)
        if param_idx is None:
            mats = gate.matrix()
        elif variant_axis:
            # one angle per variant, broadcast over the remaining batch axes
            theta = params[:, param_idx].reshape((-1,) + (1,) * (amps.ndim - 2))
            mats = rotation_matrix(gate.kind, theta)
        else:
            mats = rotation_matrix(gate.kind, params[param_idx])
        apply_single_kernel(amps, mats, gate.targets[0], q)


# ---------------------------------------------------------------------------
# public single-state operations

def zero_state(num_qubits: int) -> StateVector:
    """|0...0> on num_qubits qubits."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """New state U|psi>; the input state is left untouched."""
    q = state.num_qubits
    for t in gate.targets:
        if not 0 <= t < q:
            raise IndexError(f"gate target {t} out of range for {q}-qubit state")
    amps = state.amplitudes.copy()
    if gate.kind is GateKind.CNOT:
        apply_cnot_kernel(amps, gate.targets[0], gate.targets[1], q)
    else:
        apply_single_kernel(amps, gate.matrix(), gate.targets[0], q)
    return StateVector(q, amps)


def apply_circuit(state: StateVector, circuit: Circuit, params=()) -> StateVector:
    """Apply all gates in order, angles for slot gates taken from params."""
    if circuit.num_qubits != state.num_qubits:
        raise ValueError(
            f"circuit is on {circuit.num_qubits} qubits, state on {state.num_qubits}"
        )
    theta = np.asarray(params, dtype=float)
    if theta.ndim != 1 or theta.shape[0] != circuit.num_params:
        raise ValueError(f"expected {circuit.num_params} parameters, got shape {theta.shape}")
    amps = state.amplitudes.copy()
    run_gates(amps, circuit, theta if circuit.num_params else None)
    out = StateVector(state.num_qubits, amps)
    assert abs(out.norm() - 1.0) < 1e-10, "statevector norm drifted"
    return out


def expectation_z(state: StateVector, qubit: int) -> float:
    """Exact <Z> on one qubit: +1 for |0>, -1 for |1>."""
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.num_qubits}-qubit state")
    val = expectation_z_kernel(state.amplitudes, qubit, state.num_qubits)
    return float(np.clip(val, -1.0, 1.0))


def probabilities(state: StateVector) -> np.ndarray:
    """Measurement probabilities |amplitude_i|^2 over all basis states."""
    a = state.amplitudes
    return a.real**2 + a.imag**2
