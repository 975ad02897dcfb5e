import pytest

from models.circuit import (CnotGate, GateKind, QuantumCircuit, SingleGate, extract_skeleton,
                            reassemble)


def test_skeleton_of_running_example(running_example):
    skeleton = extract_skeleton(running_example)

    assert [(g.control, g.target) for g in skeleton.cnots] == [(2, 3), (0, 1), (1, 2), (2, 0), (0, 1)]
    assert skeleton.preludes == (
        (SingleGate(2, GateKind.H),),
        (),
        (SingleGate(1, GateKind.H),),
        (SingleGate(0, GateKind.T),),
        (),
    )
    assert skeleton.epilogue == ()
    assert skeleton.cnot(4) == CnotGate(2, 0)


def test_round_trip_of_running_example(running_example):
    rebuilt = reassemble(extract_skeleton(running_example))

    assert rebuilt == running_example
    assert len(rebuilt.gates) == 8


def test_only_single_gates_go_to_epilogue():
    circuit = QuantumCircuit(2, (SingleGate(0, GateKind.H), SingleGate(1, GateKind.X)))
    skeleton = extract_skeleton(circuit)

    assert skeleton.cnots == ()
    assert skeleton.epilogue == circuit.gates
    assert reassemble(skeleton) == circuit


def test_cnots_only_leave_preludes_empty():
    circuit = QuantumCircuit(2, (CnotGate(0, 1), CnotGate(1, 0)))
    skeleton = extract_skeleton(circuit)

    assert skeleton.preludes == ((), ())
    assert skeleton.epilogue == ()


def test_empty_circuit_round_trips():
    circuit = QuantumCircuit(3, ())

    assert reassemble(extract_skeleton(circuit)) == circuit


def test_gate_count_is_conserved(running_example):
    skeleton = extract_skeleton(running_example)
    total = len(skeleton.cnots) + sum(len(p) for p in skeleton.preludes) + len(skeleton.epilogue)

    assert total == len(running_example.gates)


def test_counts_and_original_cost(running_example):
    assert running_example.n == 4
    assert running_example.cnot_count == 5
    assert running_example.single_count == 3
    assert running_example.original_cost == 8


def test_cnot_rejects_equal_control_and_target():
    with pytest.raises(ValueError, match="control equals target"):
        CnotGate(1, 1)


def test_circuit_rejects_out_of_range_qubit():
    with pytest.raises(ValueError, match="out of range"):
        QuantumCircuit(2, (CnotGate(0, 2),))


def test_name_and_warnings_do_not_affect_equality():
    gates = (CnotGate(0, 1),)

    assert QuantumCircuit(2, gates, name="a") == QuantumCircuit(2, gates, name="b", warnings=("x",))
