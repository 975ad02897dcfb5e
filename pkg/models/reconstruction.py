"""
Mapped circuit reconstruction
Turns a MappingSolution back into a physical circuit: single-qubit gates on the
lines hosting their logical qubits, each SWAP as 3 CNOTs + 4 H along the
coupling edge, reversed CNOTs between H pairs. Every gate carries a provenance tag.
"""
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from models.architecture import apply_swap
from models.circuit import CnotGate, GateKind, SingleGate, extract_skeleton
from models.errors import ReconstructionError, VerificationError
from models.qasm_parser import parse_qasm_with_lines


class Provenance(Enum):
    ORIGINAL = "original"
    SWAP = "swap-inserted"
    DIRECTION = "direction-H"


@dataclass(frozen=True)
class MappedCircuit:
    """Gates over m physical lines with one provenance tag per gate"""
    m: int
    gates: Tuple = ()
    provenance: Tuple[Provenance, ...] = ()
    name: str = field(default="mapped", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        object.__setattr__(self, 'provenance', tuple(self.provenance))
        if len(self.gates) != len(self.provenance):
            raise ReconstructionError(
                f"{len(self.gates)} gates but {len(self.provenance)} provenance tags")

    def __len__(self):
        return len(self.gates)

    def count(self, tag):
        return sum(1 for p in self.provenance if p is tag)

    @property
    def cnot_count(self):
        return sum(1 for g in self.gates if isinstance(g, CnotGate))


def swap_gates(edge, cm):
    """Seven gates exchanging physical qubits edge[0] and edge[1]

    CNOTs run along the coupling direction; the middle one is reversed by H gates.
    """
    i, j = edge
    if cm.has_edge(i, j):
        a, b = i, j
    elif cm.has_edge(j, i):
        a, b = j, i
    else:
        raise ReconstructionError(f"SWAP on ({i}, {j}) which is not a coupling edge")
    cx = CnotGate(a, b)
    return [cx, SingleGate(a, GateKind.H), SingleGate(b, GateKind.H),
            cx, SingleGate(a, GateKind.H), SingleGate(b, GateKind.H), cx]


def build_mapped_circuit(circuit, solution, cm):
    """Physical circuit for a logical circuit under a mapping solution

    Before CNOT k: the prelude single-qubit gates under the previous placement, then
    the SWAPs of point k, then the CNOT (H-conjugated when switched). The epilogue
    follows under the final placement.

    Raises:
        ReconstructionError: the solution breaks one of its invariants
    """
    skeleton = extract_skeleton(circuit)
    if len(solution.placements) != len(skeleton) or len(solution.switches) != len(skeleton):
        raise ReconstructionError(f"solution covers {len(solution.placements)} CNOTs, "
                                  f"circuit has {len(skeleton)}")
    gates = []
    tags = []

    def emit(gate, tag):
        gates.append(gate)
        tags.append(tag)

    def place_singles(singles, placement):
        for gate in singles:
            emit(SingleGate(placement[gate.qubit], gate.kind), Provenance.ORIGINAL)

    current = tuple(solution.initial)
    for k, (prelude, cnot) in enumerate(zip(skeleton.preludes, skeleton.cnots), start=1):
        place_singles(prelude, current)
        for edge in solution.swap_sequences.get(k, ()):
            for gate in swap_gates(edge, cm):
                emit(gate, Provenance.SWAP)
            current = apply_swap(current, edge)
        if current != tuple(solution.placements[k - 1]):
            raise ReconstructionError(
                f"SWAPs before g{k} reach {current}, solution says {solution.placements[k - 1]}")

        pc, pt = current[cnot.control], current[cnot.target]
        if not solution.switches[k - 1]:
            if not cm.has_edge(pc, pt):
                raise ReconstructionError(f"g{k} on ({pc}, {pt}) is not a coupling edge")
            emit(CnotGate(pc, pt), Provenance.ORIGINAL)
        else:
            if not cm.has_edge(pt, pc):
                raise ReconstructionError(f"switched g{k} on ({pt}, {pc}) is not a coupling edge")
            emit(SingleGate(pc, GateKind.H), Provenance.DIRECTION)
            emit(SingleGate(pt, GateKind.H), Provenance.DIRECTION)
            emit(CnotGate(pt, pc), Provenance.ORIGINAL)
            emit(SingleGate(pc, GateKind.H), Provenance.DIRECTION)
            emit(SingleGate(pt, GateKind.H), Provenance.DIRECTION)

    place_singles(skeleton.epilogue, current)
    return MappedCircuit(cm.m, gates, tags, name=circuit.name)


def _gate_text(gate):
    if isinstance(gate, CnotGate):
        return f"cx q[{gate.control}],q[{gate.target}];"
    return f"{gate.kind.value} q[{gate.qubit}];"


def emit_qasm(mapped):
    """OpenQASM 2.0 text, one gate per line with its provenance as a trailing comment"""
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"// mapped: {mapped.name}",
        f"qreg q[{mapped.m}];",
    ]
    lines.extend(f"{_gate_text(gate)} // {tag.value}"
                 for gate, tag in zip(mapped.gates, mapped.provenance))
    return "\n".join(lines) + "\n"


_TAG = re.compile(r"//\s*(original|swap-inserted|direction-H)\s*$")


def read_mapped_qasm(text, name="mapped"):
    """Parse QASM written by emit_qasm, recovering provenance from the trailing comments

    Raises:
        QasmError: the QASM itself is malformed
        VerificationError: a gate line carries no provenance tag
    """
    circuit, gate_lines = parse_qasm_with_lines(text, name=name)
    tags = []
    for gate, source in zip(circuit.gates, gate_lines):
        match = _TAG.search(source)
        if match is None:
            raise VerificationError(f"gate line without provenance tag: {source.strip()!r}")
        tags.append(Provenance(match.group(1)))
    return MappedCircuit(circuit.n, circuit.gates, tags, name=name)
