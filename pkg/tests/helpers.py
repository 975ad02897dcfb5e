"""Shared builders for the test suite"""
from pathlib import Path

from models.circuit import CnotGate, GateKind, QuantumCircuit, SingleGate


def random_circuit(rng, n, cnots, singles=2):
    """Random circuit with the given CNOT count and a sprinkling of single-qubit gates"""
    kinds = list(GateKind)
    gates = []
    for _ in range(cnots):
        for _ in range(int(rng.integers(0, singles + 1))):
            gates.append(SingleGate(int(rng.integers(n)), kinds[int(rng.integers(len(kinds)))]))
        control, target = rng.choice(n, size=2, replace=False)
        gates.append(CnotGate(int(control), int(target)))
    if rng.integers(2):
        gates.append(SingleGate(int(rng.integers(n)), GateKind.T))
    return QuantumCircuit(n, tuple(gates), name="random")


def cnot_circuit(n, pairs):
    return QuantumCircuit(n, tuple(CnotGate(c, t) for c, t in pairs))


ROOT = Path(__file__).resolve().parent.parent
BENCHMARKS = ROOT / "benchmarks"
ARCHITECTURES = ROOT / "architectures"
RUNNING_EXAMPLE = BENCHMARKS / "running_example.qasm"
