"""
QX Mapper Models Package
Circuit representation, architectures, encoding, solving, reconstruction and verification
"""
from .architecture import CouplingMap, build_swap_table, builtin_qx4, connected_subsets
from .circuit import CnotGate, CnotSkeleton, GateKind, QuantumCircuit, SingleGate, extract_skeleton
from .qasm_parser import parse_qasm
from .solver import MappingSolution, solve_exact, solve_with_subsets

__all__ = ['CouplingMap', 'build_swap_table', 'builtin_qx4', 'connected_subsets',
           'CnotGate', 'CnotSkeleton', 'GateKind', 'QuantumCircuit', 'SingleGate',
           'extract_skeleton', 'parse_qasm', 'MappingSolution', 'solve_exact',
           'solve_with_subsets']
