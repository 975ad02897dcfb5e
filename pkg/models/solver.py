"""
Exact mapping solver
Minimises F = 7 * SWAPs + 4 * switched CNOTs by dynamic programming over
segments (runs of CNOTs between permutation points). Each segment keeps one
placement; moving between segments costs 7 per SWAP of the table distance.

brute_force_oracle is a separate exhaustive search used to cross-check the
solver on small instances.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from debug_logger import get_logger
from models.architecture import (DEFAULT_MAX_PLACEMENTS, build_swap_table, check_deadline,
                                 connected_subsets)
from models.errors import (ArchitectureError, InfeasibleMappingError, OracleCapError,
                           VerificationError)
from models.strategies import validate_points

log = logging.getLogger(__name__)

SWAP_COST = 7
SWITCH_COST = 4
DEFAULT_ORACLE_NODE_CAP = 5 * 10 ** 6

Placement = Tuple[int, ...]
Edge = Tuple[int, int]


@dataclass(frozen=True)
class MappingSolution:
    """Placement per CNOT plus the SWAPs and direction switches realising it

    Args:
        initial: Placement before CNOT 1
        placements: Placement while CNOT k executes (index k - 1)
        switches: True where CNOT k runs reversed between H gates
        swap_sequences: Point k -> undirected edges swapped right before CNOT k
        cost: F in elementary gates
        subset_used: Physical qubits placements and SWAPs are confined to
        points: Permutation points the solution was computed for
    """
    initial: Placement
    placements: Tuple[Placement, ...]
    switches: Tuple[bool, ...]
    swap_sequences: Dict[int, Tuple[Edge, ...]] = field(default_factory=dict)
    cost: int = 0
    subset_used: Tuple[int, ...] = ()
    points: Tuple[int, ...] = ()

    @property
    def swap_count(self):
        return sum(len(seq) for seq in self.swap_sequences.values())

    @property
    def switch_count(self):
        return sum(1 for s in self.switches if s)

    @property
    def final(self):
        """Placement after the last CNOT"""
        return self.placements[-1] if self.placements else self.initial

    def sort_key(self):
        """Deterministic order: cost, then lexicographic placements"""
        return (self.cost, self.placements, self.initial, self.subset_used)


def segments_of(cnot_count, points):
    """Inclusive (first, last) CNOT ranges between permutation points"""
    starts = [1] + list(points)
    ends = [s - 1 for s in starts[1:]] + [cnot_count]
    return list(zip(starts, ends))


def direction_matrix(cm):
    """m x m boolean matrix, True where (i, j) is a coupling edge"""
    directed = np.zeros((cm.m, cm.m), dtype=bool)
    for i, j in cm.edges:
        directed[i, j] = True
    return directed


def _segment_layer(skeleton, first, last, placements, directed):
    """Placement indices legal for every CNOT first..last and their switch penalty"""
    legal = np.ones(len(placements), dtype=bool)
    switched = np.zeros(len(placements), dtype=np.int64)
    for k in range(first, last + 1):
        cnot = skeleton.cnot(k)
        pc = placements[:, cnot.control]
        pt = placements[:, cnot.target]
        forward = directed[pc, pt]
        legal &= forward | directed[pt, pc]
        if not legal.any():
            raise InfeasibleMappingError(
                f"no placement executes CNOTs g{first}..g{k} without a permutation in between",
                cnot_index=k)
        switched += ~forward
    nodes = np.flatnonzero(legal)
    return nodes, SWITCH_COST * switched[nodes]


def trivial_solution(skeleton, cm, allowed=None):
    """Solution for a skeleton without CNOTs: lowest allowed qubits, cost 0"""
    allowed = tuple(sorted(range(cm.m) if allowed is None else allowed))
    if skeleton.n > len(allowed):
        raise ArchitectureError(
            f"{skeleton.n} logical qubits do not fit on {len(allowed)} physical qubits")
    return MappingSolution(initial=tuple(allowed[:skeleton.n]), placements=(), switches=(),
                           swap_sequences={}, cost=0, subset_used=allowed, points=())


def solve_exact(skeleton, cm, allowed=None, points=None, deadline=None,
                max_placements=DEFAULT_MAX_PLACEMENTS, name="circuit"):
    """Minimum-cost mapping of a CNOT skeleton

    Args:
        skeleton: CnotSkeleton
        cm: CouplingMap
        allowed: Physical qubits to use (default: all)
        points: Permutation points (default: every CNOT after the first)
        deadline: time.monotonic() value after which MappingTimeoutError is raised
        max_placements: Placement cap handed to the swap table
        name: Label for the debug trace

    Returns:
        MappingSolution, the lexicographically smallest placement sequence among
        all minimum-cost ones

    Raises:
        InfeasibleMappingError: some segment has no legal placement
        MappingTimeoutError: deadline passed
    """
    if len(skeleton) == 0:
        return trivial_solution(skeleton, cm, allowed)
    points = validate_points(points, len(skeleton))
    check_deadline(deadline)
    table = build_swap_table(cm, skeleton.n, allowed, max_placements)

    debug = get_logger()
    debug.log_instance(name, skeleton.n, len(skeleton), cm.name, cm.m, points)

    placements = np.array(table.placements, dtype=np.int64).reshape(len(table), skeleton.n)
    directed = direction_matrix(cm)
    segments = segments_of(len(skeleton), points)

    layers = []
    for first, last in segments:
        check_deadline(deadline)
        layers.append(_segment_layer(skeleton, first, last, placements, directed))

    # backward cost-to-go per segment node
    togo = [None] * len(layers)
    togo[-1] = layers[-1][1]
    for s in range(len(layers) - 2, -1, -1):
        check_deadline(deadline)
        nodes, node_cost = layers[s]
        following = layers[s + 1][0]
        step = SWAP_COST * table.submatrix(nodes, following, deadline).astype(np.int64)
        togo[s] = node_cost + (step + togo[s + 1][None, :]).min(axis=1)
        first, last = segments[s]
        debug.log_layer(s + 1, first, last, len(nodes), int(togo[s].min()))

    # forward pass: argmin keeps the first (lexicographically smallest) optimum
    choice = int(np.argmin(togo[0]))
    chosen = [int(layers[0][0][choice])]
    for s in range(1, len(layers)):
        nodes = layers[s][0]
        step = SWAP_COST * table.row(chosen[-1])[nodes].astype(np.int64) + togo[s]
        chosen.append(int(nodes[int(np.argmin(step))]))
    cost = int(togo[0].min())

    per_cnot = []
    for (first, last), index in zip(segments, chosen):
        per_cnot.extend([table.placements[index]] * (last - first + 1))
    switches = tuple(not cm.has_edge(p[c.control], p[c.target])
                     for p, c in zip(per_cnot, skeleton.cnots))
    swap_sequences = {k: table.witness(per_cnot[k - 2], per_cnot[k - 1]) for k in points}

    solution = MappingSolution(initial=per_cnot[0], placements=tuple(per_cnot),
                               switches=switches, swap_sequences=swap_sequences, cost=cost,
                               subset_used=table.allowed, points=points)
    debug.log_solution(solution)
    log.info("%s on %s %s: F=%d (%d SWAPs, %d switched)", name, cm.name, list(table.allowed),
             cost, solution.swap_count, solution.switch_count)
    return solution


def solve_with_subsets(skeleton, cm, points=None, jobs=1, deadline=None,
                       max_placements=DEFAULT_MAX_PLACEMENTS, name="circuit"):
    """Solve on every connected n-qubit subset and keep the cheapest solution

    Subsets are solved concurrently on a thread pool; the result does not depend on
    the number of workers.

    Raises:
        ArchitectureError: n exceeds the number of physical qubits
        InfeasibleMappingError: no subset admits a mapping
        MappingTimeoutError: deadline passed
    """
    n = max(skeleton.n, 1)
    subsets = connected_subsets(cm, n)
    if not subsets:
        raise ArchitectureError(f"{cm.name} has no connected subset of {n} qubits")

    def attempt(subset):
        try:
            return solve_exact(skeleton, cm, subset, points, deadline, max_placements, name)
        except InfeasibleMappingError as e:
            log.info("%s: subset %s infeasible: %s", name, list(subset), e)
            return e

    outcomes = {}
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        futures = {executor.submit(attempt, subset): subset for subset in subsets}
        for future in as_completed(futures):
            outcomes[futures[future]] = future.result()

    solutions = [o for o in outcomes.values() if isinstance(o, MappingSolution)]
    if not solutions:
        first_failure = outcomes[subsets[0]]
        raise InfeasibleMappingError(
            f"none of the {len(subsets)} connected subsets admits a mapping",
            cnot_index=first_failure.cnot_index)
    return min(solutions, key=MappingSolution.sort_key)


def brute_force_oracle(skeleton, cm, allowed=None, points=None,
                       node_cap=DEFAULT_ORACLE_NODE_CAP, max_placements=DEFAULT_MAX_PLACEMENTS):
    """Minimum cost by exhaustive depth-first search over segment placements

    Branches are visited cheapest first and cut once their cost plus the cheapest
    switch penalties of the remaining segments reaches the best complete sequence.

    Raises:
        InfeasibleMappingError: some segment has no legal placement
        OracleCapError: more than node_cap search nodes visited
    """
    if len(skeleton) == 0:
        return 0
    points = validate_points(points, len(skeleton))
    table = build_swap_table(cm, skeleton.n, allowed, max_placements)

    layers = []
    for first, last in segments_of(len(skeleton), points):
        cnots = skeleton.cnots[first - 1:last]
        layer = []
        for index, p in enumerate(table.placements):
            penalty = 0
            for cnot in cnots:
                if cm.has_edge(p[cnot.control], p[cnot.target]):
                    continue
                if cm.has_edge(p[cnot.target], p[cnot.control]):
                    penalty += SWITCH_COST
                    continue
                break
            else:
                layer.append((index, penalty))
        if not layer:
            raise InfeasibleMappingError(f"no legal placement for CNOTs g{first}..g{last}",
                                         cnot_index=first)
        layers.append(layer)

    floor = [0] * (len(layers) + 1)
    for s in range(len(layers) - 1, -1, -1):
        floor[s] = floor[s + 1] + min(penalty for _, penalty in layers[s])

    best = math.inf
    visited = 0

    def descend(s, previous, cost):
        nonlocal best, visited
        if s == len(layers):
            best = min(best, cost)
            return
        if previous is None:
            options = sorted((penalty, index) for index, penalty in layers[s])
        else:
            dist = table.row(previous)
            options = sorted((penalty + SWAP_COST * int(dist[index]), index)
                             for index, penalty in layers[s])
        for step, index in options:
            if cost + step + floor[s + 1] >= best:
                break
            visited += 1
            if visited > node_cap:
                raise OracleCapError(f"oracle visited more than {node_cap} nodes")
            descend(s + 1, index, cost + step)

    descend(0, None, 0)
    return int(best)


def solution_to_dict(solution):
    """JSON-ready dict of a MappingSolution"""
    return {
        'initial': list(solution.initial),
        'placements': [list(p) for p in solution.placements],
        'switches': list(solution.switches),
        'swap_sequences': {str(k): [list(e) for e in seq]
                           for k, seq in sorted(solution.swap_sequences.items())},
        'cost': solution.cost,
        'swap_count': solution.swap_count,
        'switch_count': solution.switch_count,
        'subset_used': list(solution.subset_used),
        'points': list(solution.points),
    }


def solution_from_dict(data):
    """Inverse of solution_to_dict

    Raises:
        VerificationError: missing or mistyped fields
    """
    try:
        return MappingSolution(
            initial=tuple(int(q) for q in data['initial']),
            placements=tuple(tuple(int(q) for q in p) for p in data['placements']),
            switches=tuple(bool(s) for s in data['switches']),
            swap_sequences={int(k): tuple((int(e[0]), int(e[1])) for e in seq)
                            for k, seq in data['swap_sequences'].items()},
            cost=int(data['cost']),
            subset_used=tuple(int(q) for q in data.get('subset_used', ())),
            points=tuple(int(k) for k in data.get('points', ())),
        )
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as e:
        raise VerificationError(f"malformed solution data: {e}") from e
