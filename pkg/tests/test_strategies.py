import logging

import pytest

from models.architecture import CouplingMap
from models.circuit import extract_skeleton
from models.errors import StrategyError
from models.solver import solve_exact
from models.strategies import (PermutationPolicy, PolicyKind, points_all_gates,
                               points_disjoint_qubits, points_odd_gates, points_qubit_triangle,
                               resolve_points, validate_points)
from tests.helpers import cnot_circuit, random_circuit


def test_point_sets_of_running_example(qx4, running_example):
    skeleton = extract_skeleton(running_example)

    assert points_disjoint_qubits(skeleton) == {3, 4, 5}
    assert points_odd_gates(skeleton) == {3, 5}
    assert points_qubit_triangle(skeleton, qx4) == {2}
    assert points_all_gates(skeleton) == {2, 3, 4, 5}


def test_strategies_keep_the_running_example_minimal(qx4, running_example):
    skeleton = extract_skeleton(running_example)
    for mode in ("disjoint", "odd", "triangle"):
        points = resolve_points(PermutationPolicy.from_mode(mode), skeleton, qx4)
        assert solve_exact(skeleton, qx4, points=points).cost == 4


def test_disjoint_on_repeated_pair():
    skeleton = extract_skeleton(cnot_circuit(2, [(0, 1)] * 4))

    assert points_disjoint_qubits(skeleton) == {2, 3, 4}


def test_disjoint_pairs_form_one_block():
    skeleton = extract_skeleton(cnot_circuit(4, [(0, 1), (2, 3)]))

    assert points_disjoint_qubits(skeleton) == set()


def test_odd_gates_by_length():
    assert points_odd_gates(extract_skeleton(cnot_circuit(2, [(0, 1)]))) == set()
    assert points_odd_gates(extract_skeleton(cnot_circuit(2, [(0, 1)] * 7))) == {3, 5, 7}


def test_odd_gates_warns_without_a_degree_two_qubit(caplog):
    pair = CouplingMap("pair", 2, frozenset({(0, 1)}))
    skeleton = extract_skeleton(cnot_circuit(2, [(0, 1)] * 3))

    with caplog.at_level(logging.WARNING):
        points_odd_gates(skeleton, pair)
    assert "no physical qubit has two neighbours" in caplog.text


def test_triangle_on_two_qubits_is_one_block(qx4):
    skeleton = extract_skeleton(cnot_circuit(2, [(0, 1), (1, 0), (0, 1)]))

    assert points_qubit_triangle(skeleton, qx4) == set()


def test_triangle_needs_a_triangle(line3):
    skeleton = extract_skeleton(cnot_circuit(2, [(0, 1)]))

    with pytest.raises(StrategyError, match="no triangle"):
        points_qubit_triangle(skeleton, line3)


def test_disjoint_blocks_are_pairwise_disjoint(rng):
    for _ in range(50):
        skeleton = extract_skeleton(random_circuit(rng, 5, int(rng.integers(1, 10))))
        starts = sorted({1} | points_disjoint_qubits(skeleton)) + [len(skeleton) + 1]
        for first, nxt in zip(starts, starts[1:]):
            seen = set()
            for k in range(first, nxt):
                qubits = set(skeleton.cnot(k).qubits)
                assert seen.isdisjoint(qubits)
                seen |= qubits


def test_disjoint_blocks_fit_one_placement(qx4, rng):
    for _ in range(20):
        skeleton = extract_skeleton(random_circuit(rng, 4, int(rng.integers(1, 7))))
        solve_exact(skeleton, qx4, points=points_disjoint_qubits(skeleton))


def test_point_sets_never_contain_the_first_gate(qx4, rng):
    for _ in range(50):
        skeleton = extract_skeleton(random_circuit(rng, 4, int(rng.integers(1, 9))))
        for points in (points_disjoint_qubits(skeleton), points_odd_gates(skeleton),
                       points_qubit_triangle(skeleton, qx4)):
            assert 1 not in points
            assert points <= set(range(2, len(skeleton) + 1))


def test_custom_policy_matches_odd_gates(qx4, running_example):
    skeleton = extract_skeleton(running_example)
    custom = PermutationPolicy.from_mode("custom", (5, 3))

    assert custom.kind is PolicyKind.CUSTOM
    assert resolve_points(custom, skeleton, qx4) == (3, 5)
    assert resolve_points(PermutationPolicy.odd_gates(), skeleton, qx4) == (3, 5)


@pytest.mark.parametrize("points, message", [
    ((1, 3), "CNOT 1"),
    ((2, 9), r"outside 2\.\.5"),
])
def test_invalid_custom_points(points, message):
    with pytest.raises(StrategyError, match=message):
        validate_points(points, 5)


def test_policy_modes():
    assert PermutationPolicy.from_mode("exact-subsets") == PermutationPolicy.all_gates()
    assert PermutationPolicy.from_mode("triangle").name == "triangle"
    with pytest.raises(StrategyError, match="unknown mode"):
        PermutationPolicy.from_mode("greedy")
    with pytest.raises(StrategyError):
        PermutationPolicy(PolicyKind.ODD_GATES, (3,))
