"""
Permutation-point strategies
A permutation point k (1-based CNOT index) allows the placement to change right
before CNOT k. Index 1 is never a point: the initial placement is free.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from models.errors import StrategyError

log = logging.getLogger(__name__)


class PolicyKind(Enum):
    """Point-set policies (value = CLI mode name)"""
    ALL_GATES = "exact"
    DISJOINT_QUBITS = "disjoint"
    ODD_GATES = "odd"
    QUBIT_TRIANGLE = "triangle"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PermutationPolicy:
    kind: PolicyKind = PolicyKind.ALL_GATES
    custom_points: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'custom_points',
                           tuple(sorted(set(int(k) for k in self.custom_points))))
        if self.kind is not PolicyKind.CUSTOM and self.custom_points:
            raise StrategyError(f"explicit points only apply to the custom policy, not {self.kind.value}")

    @classmethod
    def all_gates(cls):
        return cls(PolicyKind.ALL_GATES)

    @classmethod
    def disjoint_qubits(cls):
        return cls(PolicyKind.DISJOINT_QUBITS)

    @classmethod
    def odd_gates(cls):
        return cls(PolicyKind.ODD_GATES)

    @classmethod
    def qubit_triangle(cls):
        return cls(PolicyKind.QUBIT_TRIANGLE)

    @classmethod
    def custom(cls, points):
        return cls(PolicyKind.CUSTOM, tuple(points))

    @classmethod
    def from_mode(cls, mode, points=()):
        """Policy for a CLI mode name ('exact-subsets' maps to all gates)"""
        if mode == "exact-subsets":
            return cls.all_gates()
        try:
            kind = PolicyKind(mode)
        except ValueError:
            raise StrategyError(f"unknown mode '{mode}'") from None
        if kind is PolicyKind.CUSTOM:
            return cls.custom(points)
        return cls(kind)

    @property
    def name(self):
        return self.kind.value


def validate_points(points, cnot_count):
    """Normalise a point set to a sorted tuple within 2..cnot_count

    Args:
        points: Iterable of 1-based CNOT indices, or None for every CNOT after the first
        cnot_count: |G| of the skeleton

    Raises:
        StrategyError: index 1 or an index outside the circuit
    """
    if points is None:
        return tuple(range(2, cnot_count + 1))
    points = tuple(sorted(set(int(k) for k in points)))
    if 1 in points:
        raise StrategyError("CNOT 1 cannot be a permutation point: the initial placement is free")
    bad = [k for k in points if not 2 <= k <= cnot_count]
    if bad:
        raise StrategyError(f"permutation points {bad} outside 2..{cnot_count}")
    return points


def _block_starts(skeleton, fits):
    """Greedy left-to-right clustering; fits(support, qubits) decides whether a CNOT joins the block"""
    starts = []
    support = None
    for k, cnot in enumerate(skeleton.cnots, start=1):
        qubits = set(cnot.qubits)
        if support is not None and fits(support, qubits):
            support |= qubits
        else:
            starts.append(k)
            support = qubits
    return frozenset(starts[1:])


def points_all_gates(skeleton):
    return frozenset(range(2, len(skeleton) + 1))


def points_disjoint_qubits(skeleton):
    """Start of every block of consecutive CNOTs on pairwise disjoint qubits, except the first"""
    return _block_starts(skeleton, lambda support, qubits: support.isdisjoint(qubits))


def points_odd_gates(skeleton, cm=None):
    """Odd CNOT indices from 3 on

    With a coupling map, warns when no physical qubit can interact with two
    others (odd-gate blocks of two CNOTs sharing a qubit then need a SWAP).
    """
    if cm is not None and max((d for _, d in cm.graph.degree), default=0) < 2:
        log.warning("%s: no physical qubit has two neighbours; odd-gates mapping may be infeasible",
                    cm.name)
    return frozenset(range(3, len(skeleton) + 1, 2))


def points_qubit_triangle(skeleton, cm):
    """Start of every block whose CNOTs touch at most three logical qubits, except the first

    Raises:
        StrategyError: the coupling graph has no triangle
    """
    if not cm.has_triangle():
        raise StrategyError(f"{cm.name} has no triangle of physical qubits; "
                            f"the qubit-triangle strategy does not apply")
    return _block_starts(skeleton, lambda support, qubits: len(support | qubits) <= 3)


def resolve_points(policy, skeleton, cm):
    """Point set of a policy for a skeleton on a coupling map, as a sorted tuple"""
    kind = policy.kind
    if kind is PolicyKind.ALL_GATES:
        points = points_all_gates(skeleton)
    elif kind is PolicyKind.DISJOINT_QUBITS:
        points = points_disjoint_qubits(skeleton)
    elif kind is PolicyKind.ODD_GATES:
        points = points_odd_gates(skeleton, cm)
    elif kind is PolicyKind.QUBIT_TRIANGLE:
        points = points_qubit_triangle(skeleton, cm)
    else:
        points = policy.custom_points
    return validate_points(points, len(skeleton))
