"""
Mapping Controller Module
=========================
Runs one mapping mode on one circuit: permutation-point selection, solving on the
full map or on every connected subset, deadline handling and the oracle cross-check.
"""
import logging
import time
from dataclasses import dataclass
from typing import Tuple

from models.architecture import DEFAULT_MAX_PLACEMENTS, connected_subsets
from models.circuit import QuantumCircuit, extract_skeleton
from models.errors import InfeasibleMappingError
from models.solver import (DEFAULT_ORACLE_NODE_CAP, MappingSolution, brute_force_oracle,
                           solve_exact, solve_with_subsets)
from models.strategies import PermutationPolicy, resolve_points

log = logging.getLogger(__name__)

MODES = ("exact", "exact-subsets", "disjoint", "odd", "triangle", "custom")


@dataclass(frozen=True)
class MappingRun:
    """One solved mode: the solution plus what produced it"""
    circuit: QuantumCircuit
    mode: str
    solution: MappingSolution
    points: Tuple[int, ...]
    used_subsets: bool
    seconds: float

    @property
    def mapped_cost(self):
        """Gate count after mapping: original gates plus F"""
        return self.circuit.original_cost + self.solution.cost


class MappingController:
    """Solves circuits on one coupling map"""

    def __init__(self, cm, jobs=1, timeout=None, max_placements=DEFAULT_MAX_PLACEMENTS,
                 oracle_node_cap=DEFAULT_ORACLE_NODE_CAP):
        """Initialize controller

        Args:
            cm: CouplingMap to map onto
            jobs: Worker threads for subset enumeration
            timeout: Seconds per run (None: unbounded)
            max_placements: Swap-table size cap
            oracle_node_cap: Node budget of the brute-force oracle
        """
        self.cm = cm
        self.jobs = max(1, jobs)
        self.timeout = timeout
        self.max_placements = max_placements
        self.oracle_node_cap = oracle_node_cap

    def points_for(self, skeleton, mode, custom_points=()):
        """Permutation points of a mode for a skeleton"""
        policy = PermutationPolicy.from_mode(mode, custom_points)
        return resolve_points(policy, skeleton, self.cm)

    def run(self, circuit, mode="exact", custom_points=(), use_subsets=False):
        """Map a circuit in one mode

        Args:
            circuit: QuantumCircuit
            mode: One of MODES
            custom_points: Points for mode 'custom'
            use_subsets: Solve per connected subset (implied by 'exact-subsets')

        Returns:
            MappingRun

        Raises:
            InfeasibleMappingError, StrategyError, MappingTimeoutError
        """
        start = time.perf_counter()
        deadline = time.monotonic() + self.timeout if self.timeout else None
        skeleton = extract_skeleton(circuit)
        points = self.points_for(skeleton, mode, custom_points)
        subsets = use_subsets or mode == "exact-subsets"

        if subsets:
            solution = solve_with_subsets(skeleton, self.cm, points, self.jobs, deadline,
                                          self.max_placements, circuit.name)
        else:
            solution = solve_exact(skeleton, self.cm, None, points, deadline,
                                   self.max_placements, circuit.name)
        seconds = time.perf_counter() - start
        log.info("%s [%s%s]: F=%d in %.3fs", circuit.name, mode,
                 "+subsets" if subsets and mode != "exact-subsets" else "", solution.cost, seconds)
        return MappingRun(circuit, mode, solution, points, subsets, seconds)

    def oracle_cost(self, run):
        """Brute-force optimum for the same points (and subset enumeration) as a run

        Raises:
            OracleCapError: the instance is too large for exhaustive search
            InfeasibleMappingError: no subset admits a mapping
        """
        skeleton = extract_skeleton(run.circuit)
        if not run.used_subsets:
            return brute_force_oracle(skeleton, self.cm, None, run.points,
                                      self.oracle_node_cap, self.max_placements)
        costs = []
        for subset in connected_subsets(self.cm, max(skeleton.n, 1)):
            try:
                costs.append(brute_force_oracle(skeleton, self.cm, subset, run.points,
                                                self.oracle_node_cap, self.max_placements))
            except InfeasibleMappingError:
                continue
        if not costs:
            raise InfeasibleMappingError("oracle found no feasible subset")
        return min(costs)
