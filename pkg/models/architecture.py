"""
Architecture models - coupling maps, connected subsets and minimal SWAP distances

A placement is a tuple `assign` with assign[j] = physical qubit hosting logical qubit j.
SWAP distances are exact: breadth-first search over all placements, where a SWAP
exchanges the contents (logical qubit or empty slot) of one undirected coupling edge.
"""
import json
import logging
import math
import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from pathlib import Path
from typing import FrozenSet, Tuple

import networkx as nx
import numpy as np

from debug_logger import get_logger
from models.errors import ArchitectureError, MappingTimeoutError

log = logging.getLogger(__name__)

DEFAULT_MAX_PLACEMENTS = 10 ** 7

# tables up to this many placements get every BFS row at build time
PRECOMPUTE_LIMIT = 2048

# IBM QX4 as drawn in its coupling map, 1-indexed (p1..p5)
QX4_EDGES_1_INDEXED = ((2, 1), (3, 1), (3, 2), (4, 3), (4, 5), (5, 3))

ARCHITECTURES_DIR = Path(__file__).resolve().parent.parent / "architectures"

Placement = Tuple[int, ...]


@dataclass(frozen=True)
class CouplingMap:
    """Directed interaction graph: (i, j) in edges allows CNOT with control p_i, target p_j"""
    name: str
    m: int
    edges: FrozenSet[Tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 'edges', frozenset(tuple(e) for e in self.edges))
        if self.m < 1:
            raise ArchitectureError(f"{self.name}: needs at least one physical qubit")
        for i, j in self.edges:
            if i == j:
                raise ArchitectureError(f"{self.name}: self-loop on qubit {i}")
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise ArchitectureError(
                    f"{self.name}: edge ({i}, {j}) out of range for {self.m} qubits")

    def has_edge(self, control, target):
        return (control, target) in self.edges

    def is_adjacent(self, a, b):
        """Undirected adjacency (a SWAP may be placed on {a, b})"""
        return (a, b) in self.edges or (b, a) in self.edges

    @cached_property
    def undirected_edges(self):
        """Sorted list of undirected edges as (low, high) pairs"""
        return tuple(sorted({(min(i, j), max(i, j)) for i, j in self.edges}))

    @cached_property
    def graph(self):
        """Undirected networkx view of the coupling map"""
        g = nx.Graph()
        g.add_nodes_from(range(self.m))
        g.add_edges_from(self.undirected_edges)
        return g

    def is_connected_subset(self, qubits):
        qubits = list(qubits)
        if not qubits:
            return False
        return nx.is_connected(self.graph.subgraph(qubits))

    def has_triangle(self):
        """True if the undirected coupling graph contains a 3-clique"""
        return any(count > 0 for count in nx.triangles(self.graph).values())

    def to_dict(self):
        return {
            'name': self.name,
            'qubits': self.m,
            'edges': [list(e) for e in sorted(self.edges)],
        }


def builtin_qx4():
    """IBM QX4 coupling map (5 qubits), stored 0-indexed"""
    return CouplingMap("ibm-qx4", 5, frozenset((c - 1, t - 1) for c, t in QX4_EDGES_1_INDEXED))


BUILTIN_ARCHITECTURES = {
    'ibm-qx4': builtin_qx4,
}


def load_coupling_map(text):
    """Build a CouplingMap from JSON text {"name", "qubits", "edges"}

    Raises:
        ArchitectureError: malformed JSON, missing fields, self-loop, bad index
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ArchitectureError(f"malformed coupling map JSON: {e}") from e
    if not isinstance(data, dict):
        raise ArchitectureError("coupling map JSON must be an object")
    try:
        name = str(data['name'])
        m = int(data['qubits'])
        edges = [(int(e[0]), int(e[1])) for e in data['edges']]
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ArchitectureError(f"coupling map JSON needs name, qubits, edges: {e}") from e
    if any(len(e) != 2 for e in data['edges']):
        raise ArchitectureError("every edge must be a [control, target] pair")
    return CouplingMap(name, m, frozenset(edges))


def resolve_architecture(name_or_path):
    """Resolve a built-in architecture name or a JSON file path"""
    if name_or_path in BUILTIN_ARCHITECTURES:
        return BUILTIN_ARCHITECTURES[name_or_path]()
    path = Path(name_or_path)
    if not path.exists():
        fixture = ARCHITECTURES_DIR / f"{name_or_path}.json"
        if fixture.exists():
            path = fixture
        else:
            raise ArchitectureError(f"unknown architecture '{name_or_path}'")
    return load_coupling_map(path.read_text(encoding="utf-8"))


def connected_subsets(cm, n):
    """All size-n physical-qubit subsets whose induced undirected subgraph is connected

    Returns:
        List of sorted tuples in lexicographic order
    """
    if not 1 <= n <= cm.m:
        raise ArchitectureError(f"subset size {n} outside 1..{cm.m}")
    return [subset for subset in combinations(range(cm.m), n)
            if cm.is_connected_subset(subset)]


def check_deadline(deadline):
    """Raise MappingTimeoutError once time.monotonic() passes deadline (None: no limit)"""
    if deadline is not None and time.monotonic() > deadline:
        raise MappingTimeoutError("mapping deadline passed")


def apply_swap(placement, edge):
    """Exchange the contents of physical qubits edge[0] and edge[1]"""
    a, b = edge
    return tuple(b if p == a else a if p == b else p for p in placement)


class SwapDistanceTable:
    """Minimal SWAP counts between placements of n logical qubits on an allowed subset

    Rows come from level-synchronous BFS and are cached read-only; small tables
    are filled completely at build time.
    """

    def __init__(self, cm, n, allowed, max_placements=DEFAULT_MAX_PLACEMENTS):
        self.cm = cm
        self.n = n
        self.allowed = tuple(sorted(allowed))

        if n > len(self.allowed):
            raise ArchitectureError(
                f"{n} logical qubits do not fit on {len(self.allowed)} allowed qubits")
        if any(not 0 <= q < cm.m for q in self.allowed):
            raise ArchitectureError(f"allowed subset {self.allowed} out of range for {cm.name}")
        if not cm.is_connected_subset(self.allowed):
            raise ArchitectureError(
                f"allowed subset {list(self.allowed)} is disconnected on {cm.name}")
        count = math.perm(len(self.allowed), n)
        if count > max_placements:
            raise ArchitectureError(
                f"{count} placements exceed the cap of {max_placements}")

        allowed_set = set(self.allowed)
        self.edges = tuple(e for e in cm.undirected_edges
                           if e[0] in allowed_set and e[1] in allowed_set)
        # permutations of a sorted sequence come out in lexicographic order
        self.placements = list(permutations(self.allowed, n))
        self.index = {p: i for i, p in enumerate(self.placements)}
        self.neighbors = np.array(
            [[self.index[apply_swap(p, e)] for e in self.edges] for p in self.placements],
            dtype=np.int64).reshape(len(self.placements), len(self.edges))
        self._rows = {}
        if len(self.placements) <= PRECOMPUTE_LIMIT:
            for source in range(len(self.placements)):
                self.row(source)

        log.debug("swap table %s n=%d allowed=%s: %d placements",
                  cm.name, n, self.allowed, len(self.placements))
        get_logger().log_table(cm.name, n, self.allowed, len(self.placements), len(self.edges))

    def __len__(self):
        return len(self.placements)

    def index_of(self, placement):
        try:
            return self.index[tuple(placement)]
        except KeyError:
            raise ArchitectureError(
                f"placement {tuple(placement)} is not an injective placement on "
                f"{list(self.allowed)}") from None

    def row(self, source):
        """Distances from placement index `source` to every placement (numpy int array)"""
        cached = self._rows.get(source)
        if cached is not None:
            return cached
        dist = np.full(len(self.placements), -1, dtype=np.int32)
        dist[source] = 0
        frontier = np.array([source], dtype=np.int64)
        level = 0
        while frontier.size:
            level += 1
            candidates = np.unique(self.neighbors[frontier].ravel())
            candidates = candidates[dist[candidates] < 0]
            dist[candidates] = level
            frontier = candidates
        if (dist < 0).any():
            raise ArchitectureError("unreachable placements: allowed subset is disconnected")
        dist.setflags(write=False)
        self._rows[source] = dist
        return dist

    def submatrix(self, sources, targets, deadline=None):
        """Distance block rows=sources, cols=targets (placement indices)

        Raises:
            MappingTimeoutError: deadline passed while rows were being filled
        """
        targets = np.asarray(targets, dtype=np.int64)
        if len(sources) == 0:
            return np.zeros((0, targets.size), dtype=np.int32)
        rows = []
        for s in sources:
            check_deadline(deadline)
            rows.append(self.row(s)[targets])
        return np.stack(rows)

    def distance(self, a, b):
        """Minimal SWAP count turning placement a into placement b"""
        return int(self.row(self.index_of(a))[self.index_of(b)])

    def witness(self, a, b):
        """One minimal SWAP sequence (undirected edges) turning a into b"""
        dist = self.row(self.index_of(a))
        current = self.index_of(b)
        backwards = []
        while dist[current] > 0:
            for e, nxt in enumerate(self.neighbors[current]):
                if dist[nxt] == dist[current] - 1:
                    backwards.append(self.edges[e])
                    current = int(nxt)
                    break
        return tuple(reversed(backwards))


@lru_cache(maxsize=64)
def _cached_table(cm, n, allowed, max_placements):
    return SwapDistanceTable(cm, n, allowed, max_placements)


def build_swap_table(cm, n, allowed=None, max_placements=DEFAULT_MAX_PLACEMENTS):
    """Memoized SwapDistanceTable for (map, n, allowed)

    Args:
        cm: CouplingMap
        n: Number of logical qubits to place
        allowed: Physical qubits SWAPs and placements are confined to (default: all)
        max_placements: Cap on m!/(m-n)! before the table is rejected

    Raises:
        ArchitectureError: disconnected subset, n too large, cap exceeded
    """
    allowed = tuple(sorted(range(cm.m) if allowed is None else set(allowed)))
    return _cached_table(cm, n, allowed, max_placements)


def swaps_of_permutation(cm, pi):
    """Minimal number of coupling-edge SWAPs realising permutation pi of all m qubits

    pi[i] is the physical position the state of p_i ends up on.
    """
    pi = tuple(int(p) for p in pi)
    if sorted(pi) != list(range(cm.m)):
        raise ArchitectureError(f"{pi} is not a permutation of {cm.m} elements")
    table = build_swap_table(cm, cm.m)
    return table.distance(tuple(range(cm.m)), pi)
