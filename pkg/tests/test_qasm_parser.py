import textwrap

import pytest

from models.circuit import CnotGate, GateKind, SingleGate
from models.errors import QasmError
from models.qasm_parser import load_qasm_file, parse_qasm, parse_qasm_with_lines
from tests.helpers import BENCHMARKS, RUNNING_EXAMPLE

HEADER = "OPENQASM 2.0;\n"


def test_single_cnot_program():
    circuit = parse_qasm(HEADER + "qreg q[2]; cx q[0],q[1];")

    assert circuit.n == 2
    assert circuit.gates == (CnotGate(0, 1),)


def test_running_example_file():
    circuit = load_qasm_file(RUNNING_EXAMPLE)

    assert circuit.name == "running_example"
    assert circuit.n == 4
    assert len(circuit.gates) == 8
    assert circuit.cnot_count == 5
    assert circuit.gates[0] == SingleGate(2, GateKind.H)


def test_header_include_and_comments():
    qasm = textwrap.dedent("""
        // leading comment
        OPENQASM 2.0;
        include "qelib1.inc";
        qreg q[3]; // register
        creg c[3];
        tdg q[2];
        sdg q[1];
        cx q[2],q[0];
    """)
    circuit = parse_qasm(qasm)

    assert circuit.gates == (SingleGate(2, GateKind.TDG), SingleGate(1, GateKind.SDG),
                             CnotGate(2, 0))


def test_control_equals_target_is_rejected():
    with pytest.raises(QasmError, match="control equals target"):
        parse_qasm(HEADER + "qreg q[1]; cx q[0],q[0];")


def test_unsupported_gate_is_rejected():
    with pytest.raises(QasmError, match="unsupported gate 'u3'"):
        parse_qasm(HEADER + "qreg q[1]; u3(0.1,0.2,0.3) q[0];")


def test_multiple_registers_are_rejected():
    with pytest.raises(QasmError, match="multiple quantum registers"):
        parse_qasm(HEADER + "qreg a[1]; qreg b[1];")


def test_index_out_of_range():
    with pytest.raises(QasmError, match="index 5 out of range"):
        parse_qasm(HEADER + "qreg q[2]; h q[5];")


def test_unknown_register():
    with pytest.raises(QasmError, match="unknown quantum register 'r'"):
        parse_qasm(HEADER + "qreg q[2]; h r[0];")


def test_unsupported_version():
    with pytest.raises(QasmError, match="version 3.0"):
        parse_qasm("OPENQASM 3.0; qreg q[1];")


def test_syntax_error_reports_line():
    qasm = "OPENQASM 2.0;\nqreg q[2];\ncx q[0] q[1];\n"
    with pytest.raises(QasmError) as info:
        parse_qasm(qasm)

    assert info.value.line == 3
    assert "line 3" in str(info.value)


def test_missing_register():
    with pytest.raises(QasmError, match="no quantum register"):
        parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\n')


def test_cx_on_whole_register_is_rejected():
    with pytest.raises(QasmError, match="whole registers"):
        parse_qasm(HEADER + "qreg q[2]; cx q,q[1];")


def test_single_gate_on_register_broadcasts():
    circuit = parse_qasm(HEADER + "qreg q[3]; h q;")

    assert circuit.gates == tuple(SingleGate(i, GateKind.H) for i in range(3))


def test_barrier_and_measure_are_dropped_with_warnings():
    circuit = load_qasm_file(BENCHMARKS / "ghz4.qasm")

    assert circuit.cnot_count == 3
    assert len(circuit.gates) == 4
    assert any("barrier" in w for w in circuit.warnings)
    assert any("4 measure" in w for w in circuit.warnings)


def test_gate_lines_follow_gates():
    _, lines = parse_qasm_with_lines(HEADER + "qreg q[2];\nh q;\ncx q[0],q[1]; // original\n")

    assert lines == ["h q;", "h q;", "cx q[0],q[1]; // original"]


def test_parsing_is_deterministic():
    text = RUNNING_EXAMPLE.read_text()

    assert parse_qasm(text) == parse_qasm(text)


@pytest.mark.parametrize("statement, gate", [
    ("h(0.3) q[0];", "h"),
    ("t(1) q[0];", "t"),
    ("x() q[0];", "x"),
    ("cx(0.5) q[0],q[1];", "cx"),
])
def test_parameters_on_fixed_gates_are_rejected(statement, gate):
    with pytest.raises(QasmError, match=f"gate '{gate}' takes no parameters") as info:
        parse_qasm(HEADER + "qreg q[2];\n" + statement + "\n")

    assert info.value.line == 3


def test_missing_header_is_rejected():
    with pytest.raises(QasmError, match="must start with an OPENQASM 2.0 header") as info:
        parse_qasm("qreg q[2];\ncx q[0],q[1];\n")

    assert info.value.line == 1


def test_empty_program_is_rejected():
    with pytest.raises(QasmError, match="OPENQASM 2.0 header"):
        parse_qasm("// nothing here\n")


def test_repeated_header_is_rejected():
    with pytest.raises(QasmError, match="only appear once"):
        parse_qasm(HEADER + "qreg q[1];\nOPENQASM 2.0;\n")
