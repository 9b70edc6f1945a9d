"""Statevector engine vs a dense Kronecker-product oracle."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qflsim.errors import CapacityError
from qflsim.qstate import (
    Circuit,
    Gate,
    GateKind,
    MAX_QUBITS,
    StateVector,
    apply_circuit,
    apply_gate,
    expectation_z,
    probabilities,
    rotation_matrix,
    run_gates,
    zero_state,
)

from oracles import circuit_unitary, gate_unitary, z_expectation_dense

ROTATIONS = (GateKind.RX, GateKind.RY, GateKind.RZ)
FIXED_SINGLE = (GateKind.PAULI_X, GateKind.PAULI_Y, GateKind.PAULI_Z, GateKind.HADAMARD)


def random_circuit(rng, num_qubits, num_gates):
    """Random gate soup with every gate kind, rotations angle-bound."""
    gates = []
    for _ in range(num_gates):
        kind = rng.choice(list(GateKind))
        if kind is GateKind.CNOT:
            if num_qubits < 2:
                kind = GateKind.PAULI_X
            else:
                c, t = rng.choice(num_qubits, size=2, replace=False)
                gates.append(Gate(GateKind.CNOT, (int(c), int(t))))
                continue
        target = int(rng.integers(num_qubits))
        if kind in ROTATIONS:
            gates.append(Gate(kind, (target,), angle=float(rng.uniform(-2 * np.pi, 2 * np.pi))))
        else:
            gates.append(Gate(kind, (target,)))
    return Circuit(num_qubits, tuple(gates))


def random_state(rng, num_qubits):
    amps = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return amps / np.linalg.norm(amps)


# ---------------------------------------------------------------------------
# gate matrices

def test_rotation_matrices_match_generator_oracle():
    rng = np.random.default_rng(0)
    for kind in ROTATIONS:
        for theta in rng.uniform(-3 * np.pi, 3 * np.pi, size=8):
            lib = rotation_matrix(kind, theta)
            oracle = gate_unitary(Gate(kind, (0,), angle=theta), 1)
            assert np.allclose(lib, oracle, atol=1e-12)


def test_rotation_matrix_batched_angles():
    thetas = np.array([[0.0, 1.0], [2.0, -0.5]])
    mats = rotation_matrix(GateKind.RY, thetas)
    assert mats.shape == (2, 2, 2, 2)
    for i in range(2):
        for j in range(2):
            assert np.allclose(mats[i, j], rotation_matrix(GateKind.RY, thetas[i, j]))


def test_rotation_matrix_rejects_non_rotation():
    with pytest.raises(ValueError):
        rotation_matrix(GateKind.HADAMARD, 0.3)


def test_gate_matrices_are_unitary():
    rng = np.random.default_rng(1)
    gates = [Gate(kind, (0,)) for kind in FIXED_SINGLE]
    gates += [Gate(kind, (0,), angle=float(rng.uniform(-7, 7))) for kind in ROTATIONS]
    gates.append(Gate(GateKind.CNOT, (0, 1)))
    for gate in gates:
        m = gate.matrix()
        assert np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=1e-12)


def test_rotation_at_zero_is_identity():
    for kind in ROTATIONS:
        assert np.allclose(rotation_matrix(kind, 0.0), np.eye(2), atol=1e-15)


# ---------------------------------------------------------------------------
# Gate / StateVector / Circuit construction

def test_gate_validates_arity_and_angle():
    with pytest.raises(ValueError):
        Gate(GateKind.PAULI_X, (0, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (0,))
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (1, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.RX, (0,))  # missing angle
    with pytest.raises(ValueError):
        Gate(GateKind.HADAMARD, (0,), angle=0.5)


def test_statevector_checks_length():
    with pytest.raises(ValueError):
        StateVector(2, np.array([1.0, 0.0]))


def test_circuit_rejects_out_of_range_target():
    with pytest.raises(IndexError):
        Circuit(1, (Gate(GateKind.PAULI_X, (1,)),))


def test_circuit_rejects_bad_param_slots():
    h = Gate(GateKind.HADAMARD, (0,))
    ry = Gate(GateKind.RY, (0,), angle=0.0)
    with pytest.raises(ValueError):
        Circuit(1, (h,), ((0, 0),))  # slot on a non-rotation gate
    with pytest.raises(ValueError):
        Circuit(1, (ry,), ((1, 0),))  # missing gate index
    with pytest.raises(ValueError):
        Circuit(1, (ry,), ((0, 0), (0, 1)))  # gate bound twice


def test_circuit_num_params():
    ry = Gate(GateKind.RY, (0,), angle=0.0)
    assert Circuit(1, (ry,)).num_params == 0
    assert Circuit(1, (ry, ry), ((0, 0), (1, 1))).num_params == 2
    # sparse slot numbering counts up to the highest index
    assert Circuit(1, (ry,), ((0, 3),)).num_params == 4


def test_zero_state_rejects_bad_qubit_counts():
    with pytest.raises(CapacityError):
        zero_state(0)
    with pytest.raises(CapacityError):
        zero_state(MAX_QUBITS + 1)


def test_apply_gate_rejects_out_of_range_target():
    with pytest.raises(IndexError):
        apply_gate(zero_state(1), Gate(GateKind.PAULI_X, (1,)))


def test_apply_circuit_checks_param_count():
    circ = Circuit(1, (Gate(GateKind.RY, (0,), angle=0.0),), ((0, 0),))
    with pytest.raises(ValueError):
        apply_circuit(zero_state(1), circ, ())
    with pytest.raises(ValueError):
        apply_circuit(zero_state(1), circ, (0.1, 0.2))
    with pytest.raises(ValueError):
        apply_circuit(zero_state(2), circ, (0.1,))  # qubit-count mismatch


# ---------------------------------------------------------------------------
# hand-checkable states

def test_bit_ordering_qubit0_is_most_significant():
    # X on qubit 0 of |00> gives |10> = index 2
    state = apply_gate(zero_state(2), Gate(GateKind.PAULI_X, (0,)))
    assert np.allclose(state.amplitudes, [0, 0, 1, 0])
    # X on qubit 1 gives |01> = index 1
    state = apply_gate(zero_state(2), Gate(GateKind.PAULI_X, (1,)))
    assert np.allclose(state.amplitudes, [0, 1, 0, 0])


def test_bell_state_probabilities():
    state = apply_gate(zero_state(2), Gate(GateKind.HADAMARD, (0,)))
    state = apply_gate(state, Gate(GateKind.CNOT, (0, 1)))
    assert np.allclose(probabilities(state), [0.5, 0.0, 0.0, 0.5], atol=1e-12)


def test_ry_pi_flips_to_one():
    state = apply_gate(zero_state(1), Gate(GateKind.RY, (0,), angle=np.pi))
    assert np.allclose(probabilities(state), [0.0, 1.0], atol=1e-12)
    assert expectation_z(state, 0) == pytest.approx(-1.0, abs=1e-12)


def test_cnot_control_target_orientation():
    # |10> -> |11>: control qubit 0 set, target qubit 1 flips
    state = apply_gate(zero_state(2), Gate(GateKind.PAULI_X, (0,)))
    state = apply_gate(state, Gate(GateKind.CNOT, (0, 1)))
    assert np.allclose(state.amplitudes, [0, 0, 0, 1])
    # |01> with control 0 clear stays put
    state = apply_gate(zero_state(2), Gate(GateKind.PAULI_X, (1,)))
    state = apply_gate(state, Gate(GateKind.CNOT, (0, 1)))
    assert np.allclose(state.amplitudes, [0, 1, 0, 0])


def test_cnot_reversed_orientation():
    # control 1, target 0: |01> -> |11>
    state = apply_gate(zero_state(2), Gate(GateKind.PAULI_X, (1,)))
    state = apply_gate(state, Gate(GateKind.CNOT, (1, 0)))
    assert np.allclose(state.amplitudes, [0, 0, 0, 1])


def test_self_inverse_gates_round_trip():
    rng = np.random.default_rng(2)
    amps = random_state(rng, 3)
    for gate in (
        Gate(GateKind.PAULI_X, (1,)),
        Gate(GateKind.HADAMARD, (2,)),
        Gate(GateKind.CNOT, (0, 2)),
    ):
        state = StateVector(3, amps.copy())
        out = apply_gate(apply_gate(state, gate), gate)
        assert np.allclose(out.amplitudes, amps, atol=1e-12)


def test_rotation_inverse_round_trip():
    rng = np.random.default_rng(3)
    amps = random_state(rng, 2)
    for kind in ROTATIONS:
        theta = float(rng.uniform(-5, 5))
        fwd = Gate(kind, (1,), angle=theta)
        back = Gate(kind, (1,), angle=-theta)
        out = apply_gate(apply_gate(StateVector(2, amps.copy()), fwd), back)
        assert np.allclose(out.amplitudes, amps, atol=1e-12)


# ---------------------------------------------------------------------------
# oracle equivalence on random circuits

def test_every_gate_kind_matches_dense_oracle():
    rng = np.random.default_rng(4)
    for q in (1, 2, 3):
        amps = random_state(rng, q)
        kinds = list(FIXED_SINGLE) + list(ROTATIONS) + ([GateKind.CNOT] if q > 1 else [])
        for kind in kinds:
            if kind is GateKind.CNOT:
                c, t = rng.choice(q, size=2, replace=False)
                gate = Gate(kind, (int(c), int(t)))
            elif kind in ROTATIONS:
                gate = Gate(kind, (int(rng.integers(q)),), angle=float(rng.uniform(-6, 6)))
            else:
                gate = Gate(kind, (int(rng.integers(q)),))
            fast = apply_gate(StateVector(q, amps.copy()), gate).amplitudes
            dense = gate_unitary(gate, q) @ amps
            assert np.allclose(fast, dense, atol=1e-12), (q, gate)


def test_random_circuits_match_dense_oracle():
    rng = np.random.default_rng(5)
    for trial in range(30):
        q = int(rng.integers(1, 4))
        circ = random_circuit(rng, q, int(rng.integers(1, 21)))
        amps = random_state(rng, q)
        fast = apply_circuit(StateVector(q, amps.copy()), circ).amplitudes
        dense = circuit_unitary(circ, q) @ amps
        assert np.max(np.abs(fast - dense)) < 1e-10, trial


def test_parameterized_circuit_matches_dense_oracle():
    rng = np.random.default_rng(6)
    ry = lambda t: Gate(GateKind.RY, (t,), angle=0.0)
    rx = lambda t: Gate(GateKind.RX, (t,), angle=0.0)
    circ = Circuit(
        2,
        (rx(0), ry(1), Gate(GateKind.CNOT, (0, 1)), ry(0)),
        ((0, 0), (1, 1), (3, 2)),
    )
    for _ in range(5):
        params = rng.uniform(-np.pi, np.pi, size=3)
        amps = random_state(rng, 2)
        fast = apply_circuit(StateVector(2, amps.copy()), circ, params).amplitudes
        dense = circuit_unitary(circ, 2, params) @ amps
        assert np.allclose(fast, dense, atol=1e-10)


def test_norm_preserved_on_large_random_circuits():
    rng = np.random.default_rng(7)
    for _ in range(10):
        q = int(rng.integers(1, 7))
        circ = random_circuit(rng, q, 100)
        out = apply_circuit(zero_state(q), circ)
        assert abs(out.norm() - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# expectation values

def test_expectation_z_matches_dense_observable():
    rng = np.random.default_rng(8)
    for q in (1, 2, 3):
        amps = random_state(rng, q)
        state = StateVector(q, amps.copy())
        for qubit in range(q):
            assert expectation_z(state, qubit) == pytest.approx(
                z_expectation_dense(amps, qubit, q), abs=1e-12
            )


def test_expectation_z_basis_states():
    assert expectation_z(zero_state(3), 1) == 1.0
    flipped = apply_gate(zero_state(3), Gate(GateKind.PAULI_X, (1,)))
    assert expectation_z(flipped, 1) == -1.0
    assert expectation_z(flipped, 0) == 1.0


def test_expectation_z_rejects_bad_qubit():
    with pytest.raises(IndexError):
        expectation_z(zero_state(2), 2)


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(9)
    circ = random_circuit(rng, 4, 40)
    out = apply_circuit(zero_state(4), circ)
    assert probabilities(out).sum() == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# batched kernels

def test_run_gates_batch_matches_single_state_loop():
    rng = np.random.default_rng(10)
    q = 3
    circ = random_circuit(rng, q, 25)
    batch = np.stack([random_state(rng, q) for _ in range(5)])
    fast = batch.copy()
    run_gates(fast, circ)
    for i in range(5):
        single = apply_circuit(StateVector(q, batch[i].copy()), circ).amplitudes
        assert np.allclose(fast[i], single, atol=1e-12)


def test_run_gates_variant_axis_matches_per_variant_runs():
    rng = np.random.default_rng(11)
    ry = Gate(GateKind.RY, (0,), angle=0.0)
    rx = Gate(GateKind.RX, (1,), angle=0.0)
    circ = Circuit(2, (ry, rx, Gate(GateKind.CNOT, (0, 1))), ((0, 0), (1, 1)))
    base = np.stack([random_state(rng, 2) for _ in range(3)])  # (B, 4)
    variants = rng.uniform(-np.pi, np.pi, size=(4, 2))  # (V, P)
    stacked = np.broadcast_to(base, (4, 3, 4)).copy()
    run_gates(stacked, circ, variants)
    for v in range(4):
        expect = base.copy()
        run_gates(expect, circ, variants[v])
        assert np.allclose(stacked[v], expect, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 30))
def test_random_circuit_preserves_norm_property(seed, q, n_gates):
    rng = np.random.default_rng(seed)
    circ = random_circuit(rng, q, n_gates)
    amps = random_state(rng, q)
    out = apply_circuit(StateVector(q, amps.copy()), circ)
    assert out.norm() == pytest.approx(1.0, abs=1e-10)
