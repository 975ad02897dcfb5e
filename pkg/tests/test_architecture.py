import json
import time

import networkx as nx
import pytest

from models.architecture import (CouplingMap, apply_swap, build_swap_table, builtin_qx4,
                                 connected_subsets, load_coupling_map, resolve_architecture,
                                 swaps_of_permutation)
from models.errors import ArchitectureError, MappingTimeoutError
from tests.helpers import ARCHITECTURES


def p(i):
    """0-indexed physical qubit of the 1-indexed name p_i"""
    return i - 1


def test_qx4_shape(qx4):
    assert qx4.m == 5
    assert len(qx4.edges) == 6
    assert qx4.has_edge(p(3), p(1))
    assert not qx4.has_edge(p(1), p(2))
    assert qx4.has_edge(p(2), p(1))
    assert qx4.is_adjacent(p(1), p(2))


def test_qx4_triangles(qx4):
    triangles = {frozenset(c) for c in nx.enumerate_all_cliques(qx4.graph) if len(c) == 3}

    assert qx4.has_triangle()
    assert triangles == {frozenset({p(1), p(2), p(3)}), frozenset({p(3), p(4), p(5)})}


def test_load_line3():
    cm = load_coupling_map('{"name":"line3","qubits":3,"edges":[[0,1],[1,2]]}')

    assert cm.m == 3
    assert cm.edges == frozenset({(0, 1), (1, 2)})
    assert not cm.has_triangle()


def test_qx4_fixture_equals_builtin():
    cm = load_coupling_map((ARCHITECTURES / "ibm-qx4.json").read_text())

    assert cm == builtin_qx4()


@pytest.mark.parametrize("text, message", [
    ('{"name":"bad","qubits":2,"edges":[[0,0]]}', "self-loop"),
    ('{"name":"bad","qubits":2,"edges":[[0,2]]}', "out of range"),
    ('{"name":"bad","qubits":2', "malformed"),
    ('{"name":"bad","edges":[]}', "needs name, qubits, edges"),
])
def test_load_rejects_bad_maps(text, message):
    with pytest.raises(ArchitectureError, match=message):
        load_coupling_map(text)


def test_resolve_architecture_by_name_and_fixture():
    assert resolve_architecture("ibm-qx4") == builtin_qx4()
    assert resolve_architecture("line3").m == 3
    assert resolve_architecture(str(ARCHITECTURES / "line3.json")).name == "line3"
    with pytest.raises(ArchitectureError, match="unknown architecture"):
        resolve_architecture("no-such-device")


def test_connected_subsets_of_qx4(qx4):
    subsets = connected_subsets(qx4, 4)

    assert len(subsets) == 4
    assert all(p(3) in s for s in subsets)
    assert subsets == sorted(subsets)
    assert connected_subsets(qx4, 5) == [(0, 1, 2, 3, 4)]
    assert len(connected_subsets(qx4, 2)) == 6


def test_connected_subsets_of_line(line3):
    assert connected_subsets(line3, 2) == [(0, 1), (1, 2)]


def test_connected_subsets_rejects_bad_size(qx4):
    with pytest.raises(ArchitectureError):
        connected_subsets(qx4, 6)


def test_single_edge_exchange_has_distance_one(qx4):
    table = build_swap_table(qx4, 4)
    a = (p(1), p(2), p(4), p(5))
    b = apply_swap(a, (p(4), p(5)))

    assert b == (p(1), p(2), p(5), p(4))
    assert table.distance(a, a) == 0
    assert table.distance(a, b) == 1
    for placement in table.placements[:20]:
        for edge in table.edges:
            if apply_swap(placement, edge) != placement:
                assert table.distance(placement, apply_swap(placement, edge)) == 1


def test_triangle_rotation_needs_two_swaps(qx4):
    table = build_swap_table(qx4, 3, allowed=(p(1), p(2), p(3)))
    a = (p(1), p(2), p(3))
    rotated = (p(2), p(3), p(1))

    assert table.distance(a, rotated) == 2


def test_moving_into_an_empty_slot_costs_one_swap(qx4):
    table = build_swap_table(qx4, 2)

    assert table.distance((p(1), p(2)), (p(3), p(2))) == 1


def test_distance_is_a_metric(qx4, rng):
    table = build_swap_table(qx4, 4)
    count = len(table)
    for _ in range(1000):
        a, b, c = (table.placements[int(i)] for i in rng.integers(count, size=3))
        ab, bc, ac = table.distance(a, b), table.distance(b, c), table.distance(a, c)
        assert table.distance(a, a) == 0
        assert ab == table.distance(b, a)
        assert ac <= ab + bc
        assert (ab == 0) == (a == b)


def test_witness_replays_to_target(qx4, rng):
    table = build_swap_table(qx4, 3)
    for _ in range(200):
        a, b = (table.placements[int(i)] for i in rng.integers(len(table), size=2))
        current = a
        witness = table.witness(a, b)
        for edge in witness:
            assert qx4.is_adjacent(*edge)
            current = apply_swap(current, edge)
        assert current == b
        assert len(witness) == table.distance(a, b)


def test_table_on_subset_stays_inside(qx4):
    allowed = connected_subsets(qx4, 4)[0]
    table = build_swap_table(qx4, 4, allowed)

    assert len(table) == 24
    assert all(set(e) <= set(allowed) for e in table.edges)


def test_table_rejects_disconnected_subset(qx4):
    with pytest.raises(ArchitectureError, match="disconnected"):
        build_swap_table(qx4, 2, allowed=(p(1), p(5)))


def test_table_rejects_too_many_qubits(line3):
    with pytest.raises(ArchitectureError, match="do not fit"):
        build_swap_table(line3, 4)


def test_table_rejects_cap(qx4):
    with pytest.raises(ArchitectureError, match="exceed the cap"):
        build_swap_table(qx4, 4, max_placements=100)


def test_tables_are_memoized(qx4):
    assert build_swap_table(qx4, 2) is build_swap_table(builtin_qx4(), 2)


def test_swaps_of_permutation(qx4):
    identity = tuple(range(5))
    swapped = apply_swap(identity, (p(3), p(1)))

    assert swaps_of_permutation(qx4, identity) == 0
    assert swaps_of_permutation(qx4, swapped) == 1
    assert len(build_swap_table(qx4, 5).row(0)) == 120
    with pytest.raises(ArchitectureError, match="not a permutation"):
        swaps_of_permutation(qx4, (0, 0, 1, 2, 3))


def test_full_permutation_distance_is_invariant_under_automorphisms(qx4, rng):
    table = build_swap_table(qx4, 5)
    identity = tuple(range(5))
    automorphisms = list(nx.algorithms.isomorphism.GraphMatcher(qx4.graph, qx4.graph)
                         .isomorphisms_iter())
    assert len(automorphisms) > 1
    for _ in range(50):
        pi = table.placements[int(rng.integers(len(table)))]
        for auto in automorphisms:
            inverse = {v: k for k, v in auto.items()}
            relabelled = tuple(auto[pi[inverse[j]]] for j in range(5))
            assert table.distance(identity, relabelled) == table.distance(identity, pi)


def test_coupling_map_rejects_self_loop():
    with pytest.raises(ArchitectureError, match="self-loop"):
        CouplingMap("x", 2, frozenset({(1, 1)}))


def test_to_dict_reloads_and_matches_fixture(qx4):
    data = qx4.to_dict()
    fixture = json.loads((ARCHITECTURES / "ibm-qx4.json").read_text())

    assert load_coupling_map(json.dumps(data)) == qx4
    assert data['qubits'] == fixture['qubits']
    assert sorted(map(tuple, data['edges'])) == sorted(map(tuple, fixture['edges']))


def test_submatrix_stops_at_deadline(qx4):
    table = build_swap_table(qx4, 3)

    with pytest.raises(MappingTimeoutError):
        table.submatrix([0, 1, 2], [0, 1], deadline=time.monotonic() - 1)
    assert table.submatrix([0], [0, 1], deadline=time.monotonic() + 60).shape == (1, 2)
