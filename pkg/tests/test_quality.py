"""Dilation, hop statistics, and per-link load accounting."""
from __future__ import annotations

import numpy as np
import pytest

from mapkit import (
    CommMatrix,
    Mapping,
    build_topology,
    dilation,
    hop_stats,
    link_loads,
    quality_report,
    random_matrix,
    ring_matrix,
    sfc_map,
)
from oracles import direct_dilation


def identity_mapping(topology, algorithm="identity"):
    return Mapping(tuple(range(topology.n_nodes)), topology.kind, topology.dims,
                   algorithm)


def test_single_adjacent_message(mesh444):
    e = np.zeros((64, 64))
    e[0, 1] = 10.0
    matrix = CommMatrix("count", e)
    assert dilation(matrix, identity_mapping(mesh444), mesh444) == 10.0


def test_zero_matrix_zero_dilation(mesh444):
    matrix = CommMatrix("count", np.zeros((64, 64)))
    assert dilation(matrix, identity_mapping(mesh444), mesh444) == 0.0


def test_8_ring_on_2x2x2_matches_direct_double_loop():
    topo = build_topology("mesh", (2, 2, 2))
    matrix = ring_matrix(8)
    mapping = sfc_map("sweep", topo)
    expect = direct_dilation(matrix.entries, mapping.assignment, "mesh", (2, 2, 2))
    assert dilation(matrix, mapping, topo) == expect


def test_dilation_matches_direct_loop_on_all_topologies(mesh444, torus444, haec444):
    rng = np.random.default_rng(0)
    matrix = random_matrix(64, seed=33)
    assign = tuple(int(v) for v in rng.permutation(64))
    for topo in (mesh444, torus444, haec444):
        mapping = Mapping(assign, topo.kind, topo.dims, "shuffled")
        expect = direct_dilation(matrix.entries, assign, topo.kind, topo.dims)
        assert dilation(matrix, mapping, topo) == expect


def test_hop_stats_single_message_distance_4(mesh444):
    e = np.zeros((64, 64))
    e[0, 1] = 1.0
    matrix = CommMatrix("count", e)
    assign = list(range(64))
    assign[1], assign[mesh444.node_id((3, 1, 0))] = assign[mesh444.node_id((3, 1, 0))], assign[1]
    mapping = Mapping(tuple(assign), "mesh", (4, 4, 4), "swapped")
    assert hop_stats(matrix, mapping, mesh444) == (4.0, 4.0)


def test_hop_stats_zero_matrix_warns(mesh444):
    matrix = CommMatrix("count", np.zeros((64, 64)))
    with pytest.warns(UserWarning):
        assert hop_stats(matrix, identity_mapping(mesh444), mesh444) == (0.0, 0.0)


def test_uniform_matrix_average_hops_is_mean_pairwise_distance(mesh444):
    e = np.ones((64, 64)) - np.eye(64)
    matrix = CommMatrix("count", e)
    pair_dists = [mesh444.distance_ids(u, v)
                  for u in range(64) for v in range(64) if u != v]
    expect = sum(pair_dists) / len(pair_dists)
    _, avg = hop_stats(matrix, identity_mapping(mesh444), mesh444)
    assert avg == pytest.approx(expect, rel=1e-12)


def test_link_loads_three_hop_route(mesh444):
    e = np.zeros((64, 64))
    dst = mesh444.node_id((3, 0, 0))
    e[0, dst] = 7.0
    matrix = CommMatrix("count", e)
    report = link_loads(matrix, identity_mapping(mesh444), mesh444)
    assert report.link_loads == {(0, 1): 7.0, (1, 2): 7.0, (2, 3): 7.0}
    assert sum(report.link_loads.values()) == 21.0 == report.dilation


def test_link_loads_zero_matrix_empty(mesh444):
    matrix = CommMatrix("count", np.zeros((64, 64)))
    assert link_loads(matrix, identity_mapping(mesh444), mesh444).link_loads == {}


def test_link_load_sum_equals_dilation_on_torus(torus444):
    matrix = random_matrix(64, seed=44)
    mapping = sfc_map("sweep", torus444)
    report = link_loads(matrix, mapping, torus444)
    assert sum(report.link_loads.values()) == pytest.approx(
        dilation(matrix, mapping, torus444), rel=1e-12)


def test_every_loaded_link_is_a_topology_link(haec444):
    matrix = random_matrix(64, seed=45)
    report = link_loads(matrix, sfc_map("hilbert", haec444), haec444)
    assert set(report.link_loads) <= set(haec444.links)


def test_torus_translation_leaves_dilation_unchanged(torus444):
    matrix = random_matrix(64, seed=46)
    base = sfc_map("scan", torus444)
    d0 = dilation(matrix, base, torus444)
    for shift in ((1, 0, 0), (2, 3, 1), (3, 3, 3)):
        moved = tuple(
            torus444.node_id(tuple((c + s) % 4 for c, s in zip(torus444.coord(node), shift)))
            for node in base.assignment)
        mapping = Mapping(moved, "torus", (4, 4, 4), "shifted")
        assert dilation(matrix, mapping, torus444) == d0


def test_full_wireless_boards_never_worse_than_torus_or_mesh(
        mesh444, torus444, haecfull444):
    matrix = random_matrix(64, seed=47)
    assign = sfc_map("sweep", mesh444).assignment
    d = {topo.kind: dilation(matrix, Mapping(assign, topo.kind, topo.dims, "sweep"), topo)
         for topo in (mesh444, torus444, haecfull444)}
    assert d["haec_box"] <= d["torus"] <= d["mesh"]


def test_size_mismatch_rejected(mesh444):
    matrix = random_matrix(8)
    with pytest.raises(ValueError, match="does not match"):
        dilation(matrix, identity_mapping(mesh444), mesh444)


def test_report_serialization(mesh444):
    matrix = ring_matrix(64, kind="volume")
    report = quality_report(matrix, sfc_map("sweep", mesh444), mesh444,
                            app="ringapp", run_id="r1")
    d = report.as_dict()
    assert d["app"] == "ringapp"
    assert d["matrix"] == "volume"
    assert d["algorithm"] == "sweep"
    assert all(isinstance(k, str) and "-" in k for k in d["link_loads"])
    row = report.csv_row()
    assert row[0] == "r1"
    assert float(row[5]) == report.dilation
