"""The seven communication-aware mapping heuristics."""
from __future__ import annotations

import numpy as np
import pytest

from oracles import brute_force_min_dilation
from mapkit import (
    CommMatrix,
    Mapping,
    build_topology,
    dilation,
    map_bipartition,
    map_bokhari,
    map_fhgreedy,
    map_greedy,
    map_greedy_allc,
    map_pacmap,
    map_topo_aware,
    random_matrix,
    ring_matrix,
    sfc_map,
)

ALL_AWARE = (map_bokhari, map_topo_aware, map_greedy, map_fhgreedy,
             map_greedy_allc, map_bipartition, map_pacmap)


def cardinality(matrix: CommMatrix, mapping: Mapping, topology) -> int:
    """Ordered communicating pairs placed on adjacent nodes."""
    count = 0
    for i in range(matrix.n):
        for j in range(matrix.n):
            if matrix.entries[i, j] > 0 and topology.distance_ids(
                    mapping.assignment[i], mapping.assignment[j]) == 1:
                count += 1
    return count


def zero_matrix(n: int) -> CommMatrix:
    return CommMatrix("count", np.zeros((n, n)))


# -- bokhari ---------------------------------------------------------------------

def test_bokhari_zero_matrix_returns_initial_unchanged():
    topo = build_topology("mesh", (2, 2, 1))
    initial = sfc_map("sweep", topo)
    out = map_bokhari(zero_matrix(4), topo, initial=initial)
    assert out.assignment == initial.assignment


def test_bokhari_reaches_full_ring_adjacency_on_2x2x1():
    topo = build_topology("mesh", (2, 2, 1))
    matrix = ring_matrix(4)
    out = map_bokhari(matrix, topo, initial=sfc_map("sweep", topo))
    assert cardinality(matrix, out, topo) == 4


def test_bokhari_same_seed_same_mapping(mesh444):
    matrix = random_matrix(64, seed=10)
    a = map_bokhari(matrix, mesh444, seed=5)
    b = map_bokhari(matrix, mesh444, seed=5)
    assert a.assignment == b.assignment


def test_bokhari_never_lowers_cardinality(torus444):
    for seed in range(4):
        matrix = random_matrix(64, density=0.1, seed=seed)
        initial = sfc_map("scan", torus444)
        before = cardinality(matrix, initial, torus444)
        out = map_bokhari(matrix, torus444, initial=initial, seed=seed)
        assert cardinality(matrix, out, torus444) >= before


# -- topo-aware --------------------------------------------------------------------

def test_topo_aware_single_process():
    topo = build_topology("mesh", (1, 1, 1))
    out = map_topo_aware(zero_matrix(1), topo)
    assert out.assignment == (0,)


def test_topo_aware_two_cliques_reach_brute_force_optimum():
    topo = build_topology("mesh", (2, 2, 2))
    e = np.zeros((8, 8))
    for block in (range(0, 4), range(4, 8)):
        for i in block:
            for j in block:
                if i != j:
                    e[i, j] = 100.0
    matrix = CommMatrix("count", e)
    out = map_topo_aware(matrix, topo)
    assert dilation(matrix, out, topo) == brute_force_min_dilation(matrix, topo)


def test_topo_aware_zero_matrix_is_bijection(mesh444):
    out = map_topo_aware(zero_matrix(64), mesh444)
    assert sorted(out.assignment) == list(range(64))


# -- greedy family -------------------------------------------------------------------

def test_two_process_pair_lands_on_the_two_adjacent_nodes():
    topo = build_topology("mesh", (2, 1, 1))
    e = np.zeros((2, 2))
    e[0, 1] = 100.0
    matrix = CommMatrix("count", e)
    for algo in (map_greedy, map_fhgreedy, map_greedy_allc):
        out = algo(matrix, topo)
        assert dilation(matrix, out, topo) == 100.0


def test_greedy_allc_beats_sweep_on_8_ring():
    topo = build_topology("mesh", (2, 2, 2))
    matrix = ring_matrix(8)
    best = brute_force_min_dilation(matrix, topo)
    d_allc = dilation(matrix, map_greedy_allc(matrix, topo), topo)
    d_sweep = dilation(matrix, sfc_map("sweep", topo), topo)
    assert best <= d_allc <= d_sweep


def test_greedy_and_fhgreedy_seeded_reproducibility(torus444):
    matrix = random_matrix(64, seed=21)
    for algo in (map_greedy, map_fhgreedy):
        a = algo(matrix, torus444, seed=3)
        b = algo(matrix, torus444, seed=3)
        assert a.assignment == b.assignment
        assert sorted(a.assignment) == list(range(64))


# -- bipartition ---------------------------------------------------------------------

def test_bipartition_first_cut_separates_zero_weight_blocks(mesh444):
    e = np.zeros((64, 64))
    for block in (range(0, 32), range(32, 64)):
        for i in block:
            for j in block:
                if i != j:
                    e[i, j] = 5.0
    matrix = CommMatrix("count", e)
    out = map_bipartition(matrix, mesh444)
    halves = [{mesh444.coord(out.assignment[r])[0] < 2 for r in block}
              for block in (range(0, 32), range(32, 64))]
    assert halves[0] in ({True}, {False})
    assert halves[1] in ({True}, {False})
    assert halves[0] != halves[1]


def test_bipartition_zero_matrix_is_bijection(mesh444):
    out = map_bipartition(zero_matrix(64), mesh444)
    assert sorted(out.assignment) == list(range(64))


def test_bipartition_4_ring_is_optimal():
    topo = build_topology("mesh", (2, 2, 1))
    matrix = ring_matrix(4)
    out = map_bipartition(matrix, topo)
    assert dilation(matrix, out, topo) == brute_force_min_dilation(matrix, topo)


# -- pacmap -----------------------------------------------------------------------

def test_pacmap_places_star_center_at_lowest_central_node(mesh444):
    e = np.zeros((64, 64))
    e[3, :] = 7.0
    e[:, 3] = 7.0
    np.fill_diagonal(e, 0.0)
    matrix = CommMatrix("count", e)
    sums = mesh444.distance_matrix.sum(axis=1)
    best_nodes = np.flatnonzero(sums == sums.min())
    out = map_pacmap(matrix, mesh444)
    assert out.assignment[3] == int(best_nodes.min())


def test_pacmap_zero_matrix_centers_rank_0(mesh444):
    sums = mesh444.distance_matrix.sum(axis=1)
    best_node = int(np.flatnonzero(sums == sums.min()).min())
    out = map_pacmap(zero_matrix(64), mesh444)
    assert sorted(out.assignment) == list(range(64))
    assert out.assignment[0] == best_node


def test_pacmap_two_processes():
    topo = build_topology("mesh", (2, 1, 1))
    e = np.zeros((2, 2))
    e[0, 1] = 4.0
    e[1, 0] = 2.0
    matrix = CommMatrix("count", e)
    out = map_pacmap(matrix, topo)
    assert dilation(matrix, out, topo) == 6.0


# -- shared contracts ----------------------------------------------------------------

@pytest.mark.parametrize("algo", ALL_AWARE)
def test_size_mismatch_rejected(algo, mesh444):
    with pytest.raises(ValueError, match="does not match"):
        algo(random_matrix(8), mesh444)


@pytest.mark.parametrize("algo", ALL_AWARE)
def test_bijective_on_rectangular_grids(algo):
    for topo in (build_topology("mesh", (4, 2, 2)),
                 build_topology("torus", (3, 3, 3)),
                 build_topology("haec_box", (2, 2, 3))):
        matrix = random_matrix(topo.n_nodes, seed=13)
        out = algo(matrix, topo)
        assert sorted(out.assignment) == list(range(topo.n_nodes))


@pytest.mark.parametrize("algo", (map_topo_aware, map_greedy_allc, map_bipartition,
                                  map_pacmap))
def test_seedless_algorithms_deterministic(algo, haec444):
    matrix = random_matrix(64, seed=17)
    assert algo(matrix, haec444).assignment == algo(matrix, haec444).assignment
