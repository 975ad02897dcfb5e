"""
Mapped circuit verification
Coupling legality, placement tracking (folding SWAP blocks and H-conjugated
CNOTs back to logical gates) and unitary equivalence by dense simulation.

Unitaries use big-endian line order: line 0 is the most significant bit.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from models.architecture import apply_swap
from models.circuit import CnotGate, GateKind, SingleGate
from models.errors import VerificationError
from models.reconstruction import Provenance
from models.solver import SWAP_COST, SWITCH_COST

log = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-10
MAX_SIM_QUBITS = 6

_SQRT_HALF = 1 / np.sqrt(2)

GATE_MATRICES = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
}

# rows/cols indexed by (control bit, target bit)
CX_MATRIX = np.array([[1, 0, 0, 0],
                      [0, 1, 0, 0],
                      [0, 0, 0, 1],
                      [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of the verification checks; None marks a check that was not run"""
    coupling_legal: Optional[bool] = None
    tracking_ok: Optional[bool] = None
    unitary_ok: Optional[bool] = None
    max_deviation: Optional[float] = None

    @property
    def passed(self):
        return all(check is not False
                   for check in (self.coupling_legal, self.tracking_ok, self.unitary_ok))

    def failed_checks(self):
        return [name for name in ('coupling_legal', 'tracking_ok', 'unitary_ok')
                if getattr(self, name) is False]


def gate_matrix(gate):
    """Matrix and acted-on lines of a gate"""
    if isinstance(gate, CnotGate):
        return CX_MATRIX, (gate.control, gate.target)
    return GATE_MATRICES[gate.kind], (gate.qubit,)


def apply_gate(unitary, matrix, lines, num_qubits):
    """Left-multiply unitary by matrix acting on the given lines"""
    k = len(lines)
    tensor = unitary.reshape((2,) * num_qubits + (-1,))
    gate = matrix.reshape((2,) * (2 * k))
    result = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(lines)))
    result = np.moveaxis(result, list(range(k)), list(lines))
    return result.reshape(2 ** num_qubits, -1)


def circuit_unitary(gates, num_qubits):
    """Dense unitary of a gate sequence on num_qubits lines

    Raises:
        VerificationError: more than MAX_SIM_QUBITS lines
    """
    if num_qubits > MAX_SIM_QUBITS:
        raise VerificationError(
            f"{num_qubits} qubits exceed the simulation cap of {MAX_SIM_QUBITS}")
    unitary = np.eye(2 ** num_qubits, dtype=complex)
    for gate in gates:
        matrix, lines = gate_matrix(gate)
        unitary = apply_gate(unitary, matrix, lines, num_qubits)
    return unitary


def is_unitary(matrix, tol=UNITARY_TOLERANCE):
    identity = np.eye(matrix.shape[0])
    return float(np.max(np.abs(matrix @ matrix.conj().T - identity))) <= tol


def permutation_unitary(lines, num_qubits):
    """Permutation matrix sending virtual line v to physical line lines[v]"""
    size = 2 ** num_qubits
    matrix = np.zeros((size, size))
    for source in range(size):
        target = 0
        for v, physical in enumerate(lines):
            if (source >> (num_qubits - 1 - v)) & 1:
                target |= 1 << (num_qubits - 1 - physical)
        matrix[target, source] = 1
    return matrix


def check_coupling_legal(mapped, cm):
    """True iff every CNOT of the mapped circuit runs along a coupling edge"""
    for gate in mapped.gates:
        if isinstance(gate, CnotGate) and not cm.has_edge(gate.control, gate.target):
            log.info("CNOT (%d, %d) is not an edge of %s", gate.control, gate.target, cm.name)
            return False
    return True


def _is_swap_block(block):
    if len(block) != 7 or not all(isinstance(block[i], CnotGate) for i in (0, 3, 6)):
        return False
    cx = block[0]
    if block[3] != cx or block[6] != cx:
        return False
    pair = {cx.control, cx.target}
    for first, second in ((1, 2), (4, 5)):
        hs = (block[first], block[second])
        if not all(isinstance(g, SingleGate) and g.kind is GateKind.H for g in hs):
            return False
        if {g.qubit for g in hs} != pair:
            return False
    return True


def _is_switched_block(block):
    if len(block) != 5 or not isinstance(block[2], CnotGate):
        return False
    pair = {block[2].control, block[2].target}
    for first, second in ((0, 1), (3, 4)):
        hs = (block[first], block[second])
        if not all(isinstance(g, SingleGate) and g.kind is GateKind.H for g in hs):
            return False
        if {g.qubit for g in hs} != pair:
            return False
    return True


def check_tracking(circuit, mapped, solution):
    """Replay the mapped circuit symbolically and compare with the logical circuit

    SWAP blocks exchange the logical qubits of their two lines; an H-conjugated
    CNOT folds back to the reversed CNOT. The folded gate list must equal the
    original circuit and the tracked placement must end at the solution's final one.
    """
    hosted = {p: j for j, p in enumerate(solution.initial)}
    gates, tags = mapped.gates, mapped.provenance
    folded = []
    pos = 0
    while pos < len(gates):
        tag = tags[pos]
        if tag is Provenance.SWAP:
            block = gates[pos:pos + 7]
            if tags[pos:pos + 7] != (Provenance.SWAP,) * 7 or not _is_swap_block(block):
                return False
            a, b = block[0].control, block[0].target
            qa, qb = hosted.pop(a, None), hosted.pop(b, None)
            if qa is not None:
                hosted[b] = qa
            if qb is not None:
                hosted[a] = qb
            pos += 7
            continue
        if tag is Provenance.DIRECTION:
            block = gates[pos:pos + 5]
            expected = (Provenance.DIRECTION, Provenance.DIRECTION, Provenance.ORIGINAL,
                        Provenance.DIRECTION, Provenance.DIRECTION)
            if tags[pos:pos + 5] != expected or not _is_switched_block(block):
                return False
            cx = block[2]
            if cx.control not in hosted or cx.target not in hosted:
                return False
            folded.append(CnotGate(hosted[cx.target], hosted[cx.control]))
            pos += 5
            continue
        gate = gates[pos]
        if any(q not in hosted for q in gate.qubits):
            return False
        if isinstance(gate, CnotGate):
            if hosted[gate.control] == hosted[gate.target]:
                return False
            folded.append(CnotGate(hosted[gate.control], hosted[gate.target]))
        else:
            folded.append(SingleGate(hosted[gate.qubit], gate.kind))
        pos += 1

    final = tuple(sorted(hosted, key=hosted.get))
    return tuple(folded) == circuit.gates and final == tuple(solution.final)


def _tracked_lines(solution, m):
    """Physical line of every virtual line before and after the circuit

    Virtual lines 0..n-1 are the logical qubits, the rest the unused physical
    qubits in ascending order; SWAPs move both kinds.
    """
    used = set(solution.initial)
    lines_in = tuple(solution.initial) + tuple(p for p in range(m) if p not in used)
    lines_out = lines_in
    for k in sorted(solution.swap_sequences):
        for edge in solution.swap_sequences[k]:
            lines_out = apply_swap(lines_out, edge)
    return lines_in, lines_out


def check_unitary_equivalence(circuit, mapped, solution):
    """Compare the mapped unitary with the original one embedded by the solution

    Checks U_mapped = E_out (U_orig (x) I) E_in^-1 with E_in, E_out the permutations
    of the initial and final placements.

    Raises:
        VerificationError: circuit or mapped circuit too large to simulate
    """
    n, m = circuit.n, mapped.m
    if max(n, m) > MAX_SIM_QUBITS:
        raise VerificationError(
            f"simulation needs {max(n, m)} qubits, cap is {MAX_SIM_QUBITS}")
    if n > m:
        raise VerificationError(f"{n} logical qubits on {m} physical lines")
    embedded = np.kron(circuit_unitary(circuit.gates, n), np.eye(2 ** (m - n)))
    lines_in, lines_out = _tracked_lines(solution, m)
    expected = permutation_unitary(lines_out, m) @ embedded @ permutation_unitary(lines_in, m).T
    actual = circuit_unitary(mapped.gates, m)
    deviation = float(np.max(np.abs(actual - expected)))
    return EquivalenceReport(unitary_ok=deviation <= UNITARY_TOLERANCE, max_deviation=deviation)


def verify_mapping(circuit, mapped, solution, cm):
    """Run every check; unitary equivalence is skipped above MAX_SIM_QUBITS"""
    coupling = check_coupling_legal(mapped, cm)
    tracking = check_tracking(circuit, mapped, solution)
    if max(circuit.n, mapped.m) <= MAX_SIM_QUBITS:
        unitary = check_unitary_equivalence(circuit, mapped, solution)
        return EquivalenceReport(coupling, tracking, unitary.unitary_ok, unitary.max_deviation)
    log.info("%s: %d lines, unitary check skipped", circuit.name, mapped.m)
    return EquivalenceReport(coupling, tracking, None, None)


def check_solution(solution, skeleton, cm, points=None) -> List[str]:
    """Problems with a MappingSolution's own invariants (empty list: valid)

    Checks cost accounting, that SWAP replay links consecutive placements (and
    happens only at permutation points) and that every CNOT meets the coupling
    map in the direction its switch flag says.
    """
    problems = []
    count = len(skeleton)
    if len(solution.placements) != count or len(solution.switches) != count:
        return [f"solution covers {len(solution.placements)} CNOTs, skeleton has {count}"]

    expected_cost = SWAP_COST * solution.swap_count + SWITCH_COST * solution.switch_count
    if solution.cost != expected_cost:
        problems.append(f"cost {solution.cost} != 7*{solution.swap_count} + "
                        f"4*{solution.switch_count}")

    allowed_points = set(range(2, count + 1) if points is None else points)
    for k in solution.swap_sequences:
        if k not in allowed_points:
            problems.append(f"SWAPs before g{k}, which is not a permutation point")

    current = tuple(solution.initial)
    for k in range(1, count + 1):
        for edge in solution.swap_sequences.get(k, ()):
            if not cm.is_adjacent(*edge):
                problems.append(f"SWAP before g{k} on uncoupled pair {tuple(edge)}")
            current = apply_swap(current, edge)
        placement = tuple(solution.placements[k - 1])
        if current != placement:
            problems.append(f"replayed placement {current} at g{k} differs from {placement}")
            current = placement
        if len(set(placement)) != len(placement) or len(placement) != skeleton.n:
            problems.append(f"placement {placement} at g{k} is not injective over "
                            f"{skeleton.n} qubits")
            continue
        cnot = skeleton.cnot(k)
        pc, pt = placement[cnot.control], placement[cnot.target]
        if solution.switches[k - 1]:
            if not cm.has_edge(pt, pc):
                problems.append(f"switched g{k} on ({pt}, {pc}) is not a coupling edge")
        elif not cm.has_edge(pc, pt):
            problems.append(f"g{k} on ({pc}, {pt}) is not a coupling edge")
    return problems
