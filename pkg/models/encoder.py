"""
Weighted MaxSAT encoding of the mapping problem

Variables:
    x(k, i, j)  logical qubit j sits on physical qubit i while CNOT k executes
    y(k, a, b)  placement a (before CNOT k) becomes placement b, k a permutation point
    z(k)        CNOT k executes with control and target exchanged
    aux         Tseitin conjunctions, numbered after every x/y/z id

Hard clauses force legal placements; soft clauses not-y weigh 7 per SWAP of the
transition and not-z weighs 4, so the optimum of the instance is F.
"""
import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np
from pysat.card import CardEnc, EncType

from debug_logger import get_logger
from models.architecture import DEFAULT_MAX_PLACEMENTS, build_swap_table
from models.errors import ArchitectureError, EncodingError
from models.solver import SWAP_COST, SWITCH_COST, MappingSolution
from models.strategies import validate_points

log = logging.getLogger(__name__)


class VarBook:
    """Dense 1-based variable numbering: x ids, then y, then z, then auxiliaries"""

    def __init__(self, cnot_count, n, allowed, placement_count, points):
        self.cnot_count = cnot_count
        self.n = n
        self.allowed = tuple(allowed)
        self.placement_count = placement_count
        self.points = tuple(points)
        self._slot = {p: s for s, p in enumerate(self.allowed)}

        self.x_count = cnot_count * len(self.allowed) * n
        self.y_base = self.x_count + 1
        block = placement_count ** 2
        self._y_offset = {k: s * block for s, k in enumerate(self.points)}
        self.y_count = len(self.points) * block
        self.z_base = self.y_base + self.y_count
        self.z_count = cnot_count
        self.aux_base = self.z_base + self.z_count
        self.aux_count = 0

    def hosts(self, i):
        return i in self._slot

    def x(self, k, i, j):
        return 1 + ((k - 1) * len(self.allowed) + self._slot[i]) * self.n + j

    def y(self, k, a, b):
        """Transition from placement index a to placement index b before CNOT k"""
        return self.y_base + self._y_offset[k] + a * self.placement_count + b

    def z(self, k):
        return self.z_base + k - 1

    def new_aux(self):
        self.aux_count += 1
        return self.aux_base + self.aux_count - 1

    @property
    def var_count(self):
        return self.aux_base + self.aux_count - 1

    def ranges(self):
        """Inclusive id range per family; an empty family reads (lo, lo - 1)"""
        return {
            'x': (1, self.x_count),
            'y': (self.y_base, self.z_base - 1),
            'z': (self.z_base, self.aux_base - 1),
            'aux': (self.aux_base, self.var_count),
        }

    def decode_x(self, var):
        """(k, i, j) of an x id"""
        rest, j = divmod(var - 1, self.n)
        k0, slot = divmod(rest, len(self.allowed))
        return k0 + 1, self.allowed[slot], j


@dataclass
class EncodedInstance:
    """Hard clauses, unit soft clauses and the bookkeeping needed to read models back"""
    var_count: int
    hard: List[List[int]]
    soft: List[Tuple[int, List[int]]]
    book: VarBook
    meta: Dict[str, object] = field(default_factory=dict)
    skeleton: object = None
    cm: object = None
    table: object = None
    aux_defs: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def top(self):
        """Weight of hard clauses: exceeds the sum of all soft weights"""
        return 1 + sum(weight for weight, _ in self.soft)

    @cached_property
    def hard_arrays(self):
        return _flatten(self.hard)

    @cached_property
    def soft_arrays(self):
        lits, starts, empty = _flatten([clause for _, clause in self.soft])
        weights = np.array([weight for weight, clause in self.soft if clause], dtype=np.int64)
        return lits, starts, empty, weights


@dataclass(frozen=True)
class AssignmentScore:
    satisfies: bool
    cost: int
    violated_hard: int = 0


def _flatten(clauses):
    """Concatenated literals and start offsets of the non-empty clauses, plus the empty count"""
    kept = [c for c in clauses if c]
    lengths = np.fromiter((len(c) for c in kept), dtype=np.int64, count=len(kept))
    lits = np.fromiter(itertools.chain.from_iterable(kept), dtype=np.int64,
                       count=int(lengths.sum()))
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64) if kept \
        else np.zeros(0, dtype=np.int64)
    return lits, starts, len(clauses) - len(kept)


def _satisfied(values, lits, starts):
    """Per clause: at least one literal true under the boolean vector values[var]"""
    if not starts.size:
        return np.zeros(0, dtype=bool)
    truth = values[np.abs(lits)] == (lits > 0)
    return np.logical_or.reduceat(truth, starts)


def _at_most_one(lits):
    if len(lits) < 2:
        return []
    return CardEnc.atmost(lits=lits, bound=1, encoding=EncType.pairwise).clauses


def encode(skeleton, cm, allowed=None, points=None, max_placements=DEFAULT_MAX_PLACEMENTS,
           name="circuit"):
    """Build the weighted MaxSAT instance for a skeleton on a coupling map

    Args:
        skeleton: CnotSkeleton with at least one CNOT
        cm: CouplingMap
        allowed: Physical qubits in play (default: all); coupling edges are intersected with it
        points: Permutation points (default: every CNOT after the first)
        max_placements: Placement cap for the transition table
        name: Circuit label recorded in meta

    Raises:
        EncodingError: empty skeleton, disconnected or too small subset
    """
    if len(skeleton) == 0:
        raise EncodingError("nothing to encode: the circuit has no CNOT gates")
    points = validate_points(points, len(skeleton))
    try:
        table = build_swap_table(cm, skeleton.n, allowed, max_placements)
    except ArchitectureError as e:
        raise EncodingError(str(e)) from e

    n = skeleton.n
    cnot_count = len(skeleton)
    allowed = table.allowed
    book = VarBook(cnot_count, n, allowed, len(table), points)
    hard = []
    soft = []
    aux_defs = []

    # every logical qubit on exactly one physical qubit, every physical qubit hosts at most one
    for k in range(1, cnot_count + 1):
        for j in range(n):
            lits = [book.x(k, i, j) for i in allowed]
            hard.append(lits)
            hard.extend(_at_most_one(lits))
        for i in allowed:
            hard.extend(_at_most_one([book.x(k, i, j) for j in range(n)]))

    conjunctions = {}

    def conjunction(a, b):
        key = (min(a, b), max(a, b))
        aux = conjunctions.get(key)
        if aux is None:
            aux = book.new_aux()
            conjunctions[key] = aux
            hard.extend(([-aux, a], [-aux, b], [aux, -a, -b]))
            aux_defs.append((aux, a, b))
        return aux

    # coupling constraint per CNOT, and z(k) <-> only the reversed orientation is used
    directed = sorted((i, j) for i, j in cm.edges if book.hosts(i) and book.hosts(j))
    directed_set = set(directed)
    for k, cnot in enumerate(skeleton.cnots, start=1):
        c, t = cnot.control, cnot.target
        realisations = []
        reversed_only = []
        for i, j in directed:
            realisations.append(conjunction(book.x(k, i, c), book.x(k, j, t)))
            reverse = conjunction(book.x(k, i, t), book.x(k, j, c))
            realisations.append(reverse)
            if (j, i) not in directed_set:
                reversed_only.append(reverse)
        hard.append(list(dict.fromkeys(realisations)))
        z = book.z(k)
        hard.append([-z] + reversed_only)
        hard.extend([-r, z] for r in reversed_only)
        soft.append((SWITCH_COST, [-z]))

    # placement changes only at permutation points, priced by the swap table
    point_set = set(points)
    for k in range(2, cnot_count + 1):
        if k in point_set:
            transitions = []
            for a, before in enumerate(table.placements):
                dist = table.row(a)
                for b, after in enumerate(table.placements):
                    y = book.y(k, a, b)
                    transitions.append(y)
                    for j in range(n):
                        hard.append([-y, book.x(k - 1, before[j], j)])
                        hard.append([-y, book.x(k, after[j], j)])
                    if dist[b]:
                        soft.append((SWAP_COST * int(dist[b]), [-y]))
            hard.append(transitions)
        else:
            for i in allowed:
                for j in range(n):
                    hard.append([-book.x(k - 1, i, j), book.x(k, i, j)])
                    hard.append([book.x(k - 1, i, j), -book.x(k, i, j)])

    instance = EncodedInstance(
        var_count=book.var_count, hard=hard, soft=soft, book=book,
        meta={
            'circuit': name,
            'architecture': cm.name,
            'n': n,
            'cnots': cnot_count,
            'allowed': list(allowed),
            'points': list(points),
        },
        skeleton=skeleton, cm=cm, table=table, aux_defs=aux_defs)
    get_logger().log_encoding(instance)
    log.info("encoded %s on %s: %d vars, %d hard, %d soft", name, cm.name,
             instance.var_count, len(hard), len(soft))
    return instance


def _clause_line(weight, clause):
    return " ".join([str(weight)] + [str(lit) for lit in clause] + ["0"])


def emit_wcnf(inst):
    """Weighted CNF text ('p wcnf' header, hard clauses at weight top)"""
    top = inst.top
    meta = inst.meta
    lines = [
        f"c qxmapper circuit={meta.get('circuit')} architecture={meta.get('architecture')}",
        f"c allowed={' '.join(map(str, meta.get('allowed', ())))} "
        f"points={' '.join(map(str, meta.get('points', ())))}",
        f"p wcnf {inst.var_count} {len(inst.hard) + len(inst.soft)} {top}",
    ]
    lines.extend(_clause_line(top, clause) for clause in inst.hard)
    lines.extend(_clause_line(weight, clause) for weight, clause in inst.soft)
    return "\n".join(lines) + "\n"


def variable_map_text(inst):
    """Sidecar text: id range per family, then every x and z id with its meaning"""
    book = inst.book
    lines = [
        f"c qxmapper variable map for {inst.meta.get('circuit')} on {inst.meta.get('architecture')}",
        f"c allowed {' '.join(map(str, book.allowed))}",
        f"c points {' '.join(map(str, book.points))}",
    ]
    for family, (lo, hi) in book.ranges().items():
        lines.append(f"{family} {lo} {hi}")
    for var in range(1, book.x_count + 1):
        k, i, j = book.decode_x(var)
        lines.append(f"x {k} {i} {j} {var}")
    for k in range(1, book.cnot_count + 1):
        lines.append(f"z {k} {book.z(k)}")
    return "\n".join(lines) + "\n"


def _assignment_vector(inst, assignment):
    """Boolean vector indexed by variable id (slot 0 unused)"""
    values = np.zeros(inst.var_count + 1, dtype=bool)
    if isinstance(assignment, Mapping):
        missing = [v for v in range(1, inst.var_count + 1) if v not in assignment]
        if missing:
            raise EncodingError(
                f"assignment misses {len(missing)} variable(s), first is {missing[0]}")
        for v in range(1, inst.var_count + 1):
            values[v] = bool(assignment[v])
    else:
        given = np.asarray(assignment, dtype=bool)
        if given.shape != (inst.var_count,):
            raise EncodingError(
                f"assignment has {given.size} values for {inst.var_count} variables")
        values[1:] = given
    return values


def evaluate_assignment(inst, assignment):
    """Check the hard clauses and sum the weights of violated soft clauses

    Args:
        inst: EncodedInstance
        assignment: Mapping var -> bool, or a sequence whose item v - 1 is var v

    Returns:
        AssignmentScore(satisfies, cost, violated_hard)

    Raises:
        EncodingError: a variable has no value
    """
    values = _assignment_vector(inst, assignment)
    lits, starts, empty = inst.hard_arrays
    violated = int((~_satisfied(values, lits, starts)).sum()) + empty
    soft_lits, soft_starts, soft_empty, weights = inst.soft_arrays
    soft_ok = _satisfied(values, soft_lits, soft_starts)
    cost = int(weights[~soft_ok].sum())
    cost += sum(weight for weight, clause in inst.soft if not clause)
    return AssignmentScore(satisfies=violated == 0, cost=cost, violated_hard=violated)


def solution_to_assignment(solution, inst):
    """Assignment realising a MappingSolution in the instance's variables

    Raises:
        EncodingError: the solution does not fit the instance
    """
    book = inst.book
    if len(solution.placements) != book.cnot_count or len(solution.switches) != book.cnot_count:
        raise EncodingError(f"solution covers {len(solution.placements)} CNOTs, "
                            f"instance has {book.cnot_count}")
    if tuple(sorted(solution.swap_sequences)) != book.points:
        raise EncodingError(f"solution points {sorted(solution.swap_sequences)} differ from "
                            f"instance points {list(book.points)}")

    values = np.zeros(inst.var_count + 1, dtype=bool)
    for k, placement in enumerate(solution.placements, start=1):
        if len(placement) != book.n or not all(book.hosts(i) for i in placement):
            raise EncodingError(f"placement {placement} at g{k} does not fit "
                                f"{book.n} qubits on {list(book.allowed)}")
        for j, i in enumerate(placement):
            values[book.x(k, i, j)] = True
    for k in book.points:
        a = inst.table.index_of(solution.placements[k - 2])
        b = inst.table.index_of(solution.placements[k - 1])
        values[book.y(k, a, b)] = True
    for k, switched in enumerate(solution.switches, start=1):
        values[book.z(k)] = switched
    for aux, a, b in inst.aux_defs:
        values[aux] = values[a] and values[b]
    return {v: bool(values[v]) for v in range(1, inst.var_count + 1)}


def decode_solution(inst, assignment, table=None):
    """MappingSolution read from the x variables of a model

    y and z are implied by x, so only x is consulted; switches and SWAP witnesses
    are recomputed from the coupling map and the swap table.

    Raises:
        EncodingError: x does not describe legal placements
    """
    book = inst.book
    table = table or inst.table
    skeleton = inst.skeleton
    values = _assignment_vector(inst, assignment)

    placements = []
    for k in range(1, book.cnot_count + 1):
        placement = []
        for j in range(book.n):
            hosts = [i for i in book.allowed if values[book.x(k, i, j)]]
            if len(hosts) != 1:
                raise EncodingError(f"logical q{j} at g{k} sits on {len(hosts)} physical qubits")
            placement.append(hosts[0])
        if len(set(placement)) != book.n:
            raise EncodingError(f"placement {tuple(placement)} at g{k} is not injective")
        placements.append(tuple(placement))

    point_set = set(book.points)
    for k in range(2, book.cnot_count + 1):
        if k not in point_set and placements[k - 1] != placements[k - 2]:
            raise EncodingError(f"placement changes before g{k}, which is not a permutation point")

    switches = []
    for k, (placement, cnot) in enumerate(zip(placements, skeleton.cnots), start=1):
        pc, pt = placement[cnot.control], placement[cnot.target]
        if inst.cm.has_edge(pc, pt):
            switches.append(False)
        elif inst.cm.has_edge(pt, pc):
            switches.append(True)
        else:
            raise EncodingError(f"g{k} lands on uncoupled physical qubits ({pc}, {pt})")

    swap_sequences = {k: table.witness(placements[k - 2], placements[k - 1]) for k in book.points}
    cost = (SWAP_COST * sum(len(seq) for seq in swap_sequences.values())
            + SWITCH_COST * sum(switches))
    return MappingSolution(initial=placements[0], placements=tuple(placements),
                           switches=tuple(switches), swap_sequences=swap_sequences,
                           cost=cost, subset_used=book.allowed, points=book.points)


def parse_model(text, var_count):
    """Read a MaxSAT solver model ('v 1 -2 3 ... 0' or 'v 0110...') into var -> bool

    Variables the model does not mention are False.

    Raises:
        EncodingError: solver reported no model, or a literal is out of range
    """
    values = {v: False for v in range(1, var_count + 1)}
    seen = False
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s ") and "UNSAT" in line.upper():
            raise EncodingError(f"solver reported {line[2:].strip()}")
        if not line.startswith("v"):
            continue
        seen = True
        tokens = line[1:].split()
        if len(tokens) == 1 and len(tokens[0]) > 1 and set(tokens[0]) <= {"0", "1"}:
            bits = tokens[0]
            if len(bits) > var_count:
                raise EncodingError(f"model has {len(bits)} values for {var_count} variables")
            for v, bit in enumerate(bits, start=1):
                values[v] = bit == "1"
            continue
        for token in tokens:
            try:
                lit = int(token)
            except ValueError:
                raise EncodingError(f"bad literal '{token}' in model") from None
            if lit == 0:
                continue
            if abs(lit) > var_count:
                raise EncodingError(f"literal {lit} outside 1..{var_count}")
            values[abs(lit)] = lit > 0
    if not seen:
        raise EncodingError("no 'v' model lines found")
    return values


def search_space_bits(n, m, cnot_count, points=None):
    """Bits of the x search space: n * m per segment, one segment per point plus the first"""
    point_count = cnot_count - 1 if points is None else len(points)
    return n * m * (point_count + 1)
