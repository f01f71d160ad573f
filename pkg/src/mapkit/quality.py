"""Pre-simulation mapping evaluation: dilation, hop statistics, link loads.

Dilation is the distance-weighted communication sum (hop-Bytes for volume
matrices, hop-counts for count matrices): lower means the mapping keeps
heavy communication on short routes.  Link loads break the same quantity
down per directed link by materializing routes; the two views must agree.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .comm import CommMatrix
from .mapping import Mapping
from .topology import Topology


@dataclass
class QualityReport:
    """Scalar quality metrics of one (matrix, mapping, topology) triple."""

    dilation: float
    total_hops: float
    avg_hops: float
    total_weight: float
    matrix_kind: str
    algorithm: str
    topology_kind: str
    link_loads: dict[tuple[int, int], float] = field(default_factory=dict)
    app: str = ""
    run_id: str = ""

    def as_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "app": self.app,
            "algorithm": self.algorithm,
            "matrix": self.matrix_kind,
            "topology": self.topology_kind,
            "dilation": self.dilation,
            "total_hops": self.total_hops,
            "avg_hops": self.avg_hops,
            "total_weight": self.total_weight,
            "link_loads": {f"{u}-{v}": w for (u, v), w in sorted(self.link_loads.items())},
        }

    def csv_row(self) -> list[str]:
        return [self.run_id, self.app, self.algorithm, self.matrix_kind,
                self.topology_kind, repr(self.dilation), repr(self.total_hops),
                repr(self.avg_hops)]


CSV_HEADER = ["run_id", "app", "algorithm", "matrix", "topology",
              "dilation", "total_hops", "avg_hops"]


def _checked(matrix: CommMatrix, mapping: Mapping, topology: Topology) -> np.ndarray:
    n = topology.n_nodes
    if matrix.n != n:
        raise ValueError(f"matrix size {matrix.n} does not match node count {n}")
    if len(mapping.assignment) != n:
        raise ValueError(f"mapping covers {len(mapping.assignment)} ranks, need {n}")
    return matrix.entries


def dilation(matrix: CommMatrix, mapping: Mapping, topology: Topology) -> float:
    """Sum over ordered rank pairs of hop distance times matrix weight."""
    m = _checked(matrix, mapping, topology)
    assign = np.asarray(mapping.assignment)
    dist = topology.distance_matrix[np.ix_(assign, assign)]
    return float((dist * m).sum())


def hop_stats(matrix: CommMatrix, mapping: Mapping, topology: Topology) -> tuple[float, float]:
    """(total hops, average hops per unit weight) for a mapped matrix.

    Total hops is the dilation; the average divides by the matrix total and
    is defined as 0 (with a warning) for all-zero matrices.
    """
    m = _checked(matrix, mapping, topology)
    total_weight = float(m.sum())
    total = dilation(matrix, mapping, topology)
    if total_weight == 0:
        warnings.warn("all-zero matrix: average hops reported as 0")
        return (total, 0.0)
    return (total, total / total_weight)


def link_loads(matrix: CommMatrix, mapping: Mapping, topology: Topology,
               app: str = "", run_id: str = "") -> QualityReport:
    """Route every matrix entry and accumulate its weight on each hop's link.

    The per-link sums add up to the dilation computed from distances, which
    doubles as an internal consistency check between the two code paths.
    """
    m = _checked(matrix, mapping, topology)
    loads: dict[tuple[int, int], float] = {}
    assign = mapping.assignment
    for i, j in zip(*np.nonzero(m)):
        w = float(m[i, j])
        for u, v, _ in topology.route_ids(assign[int(i)], assign[int(j)]):
            key = (u, v)
            loads[key] = loads.get(key, 0.0) + w
    total, avg = _stats_quiet(matrix, mapping, topology)
    return QualityReport(
        dilation=dilation(matrix, mapping, topology),
        total_hops=total,
        avg_hops=avg,
        total_weight=float(m.sum()),
        matrix_kind=matrix.kind,
        algorithm=mapping.algorithm,
        topology_kind=topology.kind,
        link_loads=loads,
        app=app,
        run_id=run_id,
    )


def _stats_quiet(matrix: CommMatrix, mapping: Mapping, topology: Topology) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return hop_stats(matrix, mapping, topology)


def quality_report(matrix: CommMatrix, mapping: Mapping, topology: Topology,
                   app: str = "", run_id: str = "") -> QualityReport:
    """Full report: dilation, hop stats, and per-link loads."""
    return link_loads(matrix, mapping, topology, app=app, run_id=run_id)
