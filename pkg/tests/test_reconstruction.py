import pytest

from models.architecture import CouplingMap
from models.circuit import CnotGate, GateKind, QuantumCircuit, SingleGate, extract_skeleton
from models.errors import ReconstructionError, VerificationError
from models.reconstruction import (MappedCircuit, Provenance, build_mapped_circuit, emit_qasm,
                                   read_mapped_qasm, swap_gates)
from models.solver import MappingSolution, solve_exact
from tests.helpers import random_circuit


@pytest.fixture
def pair():
    return CouplingMap("pair", 2, frozenset({(0, 1)}))


def swap_then_forward(pair_cm):
    """Two switched CNOTs, an H, one SWAP, then the CNOT runs forward (F = 15)"""
    circuit = QuantumCircuit(2, (CnotGate(1, 0), CnotGate(1, 0), SingleGate(0, GateKind.H),
                                 CnotGate(1, 0)), name="pair")
    solution = MappingSolution((0, 1), ((0, 1), (0, 1), (1, 0)), (True, True, False),
                               {2: (), 3: ((0, 1),)}, cost=15, subset_used=(0, 1),
                               points=(2, 3))
    return circuit, solution


def test_running_example_gains_four_h_gates(running_example, qx4):
    solution = solve_exact(extract_skeleton(running_example), qx4)
    mapped = build_mapped_circuit(running_example, solution, qx4)

    assert len(mapped) == 12
    assert mapped.count(Provenance.ORIGINAL) == 8
    assert mapped.count(Provenance.DIRECTION) == 4
    assert mapped.count(Provenance.SWAP) == 0
    assert mapped.cnot_count == 5
    assert mapped.m == 5
    assert mapped.gates[0] == SingleGate(2, GateKind.H)


def test_swap_block_and_prelude_order(pair):
    circuit, solution = swap_then_forward(pair)
    mapped = build_mapped_circuit(circuit, solution, pair)

    assert len(mapped) == 4 + 15
    assert mapped.count(Provenance.SWAP) == 7
    assert mapped.count(Provenance.DIRECTION) == 8
    # the H precedes the SWAP and sits on the pre-SWAP line of q0
    assert mapped.gates[10] == SingleGate(0, GateKind.H)
    assert mapped.provenance[11:18] == (Provenance.SWAP,) * 7
    assert mapped.gates[18] == CnotGate(0, 1)


def test_switched_cnot_is_wrapped_in_h_pairs(pair):
    circuit, solution = swap_then_forward(pair)
    mapped = build_mapped_circuit(circuit, solution, pair)

    assert mapped.gates[:5] == (SingleGate(1, GateKind.H), SingleGate(0, GateKind.H),
                                CnotGate(0, 1),
                                SingleGate(1, GateKind.H), SingleGate(0, GateKind.H))


def test_swap_gates_follow_the_edge_direction(pair):
    block = swap_gates((1, 0), pair)

    assert [g for g in block if isinstance(g, CnotGate)] == [CnotGate(0, 1)] * 3
    assert sum(isinstance(g, SingleGate) and g.kind is GateKind.H for g in block) == 4
    with pytest.raises(ReconstructionError, match="not a coupling edge"):
        swap_gates((0, 4), CouplingMap("gap", 5, frozenset({(0, 1)})))


def test_gate_count_grows_by_cost(qx4, line3, rng):
    for cm, n in [(qx4, 3), (qx4, 4), (line3, 3)] * 5:
        circuit = random_circuit(rng, n, int(rng.integers(1, 6)))
        solution = solve_exact(extract_skeleton(circuit), cm)
        mapped = build_mapped_circuit(circuit, solution, cm)
        assert len(mapped) == len(circuit.gates) + solution.cost
        assert mapped.count(Provenance.ORIGINAL) == len(circuit.gates)
        assert mapped.count(Provenance.SWAP) == 7 * solution.swap_count


def test_cnot_free_circuit(qx4):
    circuit = QuantumCircuit(2, (SingleGate(0, GateKind.H), SingleGate(1, GateKind.T)))
    solution = solve_exact(extract_skeleton(circuit), qx4)
    mapped = build_mapped_circuit(circuit, solution, qx4)

    assert solution.cost == 0
    assert mapped.gates == (SingleGate(0, GateKind.H), SingleGate(1, GateKind.T))
    assert mapped.provenance == (Provenance.ORIGINAL,) * 2


def test_emitted_qasm_reads_back(running_example, qx4):
    solution = solve_exact(extract_skeleton(running_example), qx4)
    mapped = build_mapped_circuit(running_example, solution, qx4)
    text = emit_qasm(mapped)

    assert text.startswith('OPENQASM 2.0;\ninclude "qelib1.inc";\n')
    assert "// direction-H" in text
    assert read_mapped_qasm(text) == mapped


def test_empty_mapped_circuit_is_header_and_register():
    lines = emit_qasm(MappedCircuit(5, name="empty")).splitlines()

    assert lines == ['OPENQASM 2.0;', 'include "qelib1.inc";', '// mapped: empty', 'qreg q[5];']


def test_untagged_gate_line_is_rejected():
    text = 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncx q[0],q[1];\n'
    with pytest.raises(VerificationError, match="provenance"):
        read_mapped_qasm(text)


def test_inconsistent_solutions_are_rejected(pair):
    circuit, solution = swap_then_forward(pair)
    short = MappingSolution((0, 1), ((0, 1),), (True,))
    with pytest.raises(ReconstructionError, match="covers 1 CNOTs"):
        build_mapped_circuit(circuit, short, pair)

    unswitched = MappingSolution((0, 1), solution.placements, (False, True, False),
                                 solution.swap_sequences, cost=11)
    with pytest.raises(ReconstructionError, match="not a coupling edge"):
        build_mapped_circuit(circuit, unswitched, pair)

    no_swap = MappingSolution((0, 1), solution.placements, solution.switches, {}, cost=8)
    with pytest.raises(ReconstructionError, match="SWAPs before g3"):
        build_mapped_circuit(circuit, no_swap, pair)


def test_tag_count_must_match_gates():
    with pytest.raises(ReconstructionError):
        MappedCircuit(2, (CnotGate(0, 1),), ())
