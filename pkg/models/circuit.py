"""
Quantum circuit representation
Logical circuits as ordered gate sequences plus the CNOT skeleton the mapper reasons over
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple, Union


class GateKind(Enum):
    """Single-qubit gates accepted by the mapper (value = OpenQASM name)"""
    H = "h"
    T = "t"
    TDG = "tdg"
    S = "s"
    SDG = "sdg"
    X = "x"
    Y = "y"
    Z = "z"

    @classmethod
    def from_qasm(cls, name):
        """Look up a gate kind by its OpenQASM name, None if unsupported"""
        for kind in cls:
            if kind.value == name:
                return kind
        return None


@dataclass(frozen=True)
class SingleGate:
    """Single-qubit gate U(q_j)"""
    qubit: int
    kind: GateKind

    def __post_init__(self):
        if self.qubit < 0:
            raise ValueError(f"negative qubit index {self.qubit}")

    @property
    def qubits(self):
        return (self.qubit,)


@dataclass(frozen=True)
class CnotGate:
    """CNOT(q_c, q_t)"""
    control: int
    target: int

    def __post_init__(self):
        if self.control < 0 or self.target < 0:
            raise ValueError(f"negative qubit index in CNOT({self.control}, {self.target})")
        if self.control == self.target:
            raise ValueError(f"CNOT control equals target (qubit {self.control})")

    @property
    def qubits(self):
        return (self.control, self.target)


Gate = Union[SingleGate, CnotGate]


@dataclass(frozen=True)
class QuantumCircuit:
    """Logical circuit: n qubits and gates in program order

    Args:
        n: Number of logical qubits
        gates: Gates in program order (never reordered)
        name: Optional label used in reports
        warnings: Parser notes (dropped barriers/measurements); not part of equality
    """
    n: int
    gates: Tuple[Gate, ...] = ()
    name: str = field(default="circuit", compare=False)
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        for gate in self.gates:
            for q in gate.qubits:
                if q >= self.n:
                    raise ValueError(f"qubit index {q} out of range for {self.n} qubits")

    @property
    def cnot_count(self):
        return sum(1 for g in self.gates if isinstance(g, CnotGate))

    @property
    def single_count(self):
        return len(self.gates) - self.cnot_count

    @property
    def original_cost(self):
        """Single-qubit gates plus CNOTs before mapping"""
        return len(self.gates)


@dataclass(frozen=True)
class CnotSkeleton:
    """Circuit with single-qubit gates lifted out around the CNOTs

    preludes[k - 1] holds the single-qubit gates between CNOT k-1 and CNOT k
    (1-based k); epilogue holds those after the last CNOT.
    """
    n: int
    cnots: Tuple[CnotGate, ...] = ()
    preludes: Tuple[Tuple[SingleGate, ...], ...] = ()
    epilogue: Tuple[SingleGate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'cnots', tuple(self.cnots))
        object.__setattr__(self, 'preludes', tuple(tuple(p) for p in self.preludes))
        object.__setattr__(self, 'epilogue', tuple(self.epilogue))
        if len(self.preludes) != len(self.cnots):
            raise ValueError(
                f"{len(self.preludes)} preludes for {len(self.cnots)} CNOTs")

    def __len__(self):
        return len(self.cnots)

    def cnot(self, k):
        """CNOT with 1-based index k"""
        return self.cnots[k - 1]


def extract_skeleton(circuit):
    """Split a circuit into its CNOT sequence and the interleaved single-qubit gates

    Args:
        circuit: QuantumCircuit

    Returns:
        CnotSkeleton whose interleaving reproduces the circuit exactly
    """
    cnots = []
    preludes = []
    pending = []
    for gate in circuit.gates:
        if isinstance(gate, CnotGate):
            cnots.append(gate)
            preludes.append(tuple(pending))
            pending = []
        else:
            pending.append(gate)
    return CnotSkeleton(circuit.n, cnots, preludes, pending)


def reassemble(skeleton, name="circuit"):
    """Inverse of extract_skeleton"""
    gates = []
    for prelude, cnot in zip(skeleton.preludes, skeleton.cnots):
        gates.extend(prelude)
        gates.append(cnot)
    gates.extend(skeleton.epilogue)
    return QuantumCircuit(skeleton.n, tuple(gates), name=name)
