"""Process-to-node mappings: the Mapping type, ASCII file I/O, and dispatch.

A mapping is a bijection from process ranks onto node ids of one topology.
Twelve algorithms produce mappings: five communication-oblivious space-filling
curve walks (sweep, scan, hilbert, gray, peano) and seven communication-aware
heuristics (bokhari, topo-aware, greedy, fhgreedy, greedy-allc, bipartition,
pacmap).  Aware algorithms need a communication matrix; three of them
(bokhari, greedy, fhgreedy) are additionally randomized and take a seed.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from . import sfc
from .topology import Topology

OBLIVIOUS_ALGORITHMS = ("sweep", "scan", "hilbert", "gray", "peano")
AWARE_ALGORITHMS = ("bokhari", "topo-aware", "greedy", "fhgreedy",
                    "greedy-allc", "bipartition", "pacmap")
ALGORITHMS = OBLIVIOUS_ALGORITHMS + AWARE_ALGORITHMS
SEEDED_ALGORITHMS = ("bokhari", "greedy", "fhgreedy")
DEFAULT_SEED = 42


@dataclass(frozen=True)
class Mapping:
    """Bijective rank -> node id assignment plus provenance."""

    assignment: tuple[int, ...]
    topology_kind: str
    dims: tuple[int, int, int]
    algorithm: str
    matrix_kind: str = "none"      # count | volume | none
    seed: int | None = None

    def __post_init__(self) -> None:
        n = self.dims[0] * self.dims[1] * self.dims[2]
        if len(self.assignment) != n:
            raise ValueError(
                f"assignment length {len(self.assignment)} != node count {n}")
        if sorted(self.assignment) != list(range(n)):
            raise ValueError("assignment is not bijective onto node ids")

    @property
    def n(self) -> int:
        return len(self.assignment)

    def node_of(self, rank: int) -> int:
        return self.assignment[rank]


def default_seed() -> int:
    """Seed used when none is given; MAPKIT_SEED overrides the built-in 42."""
    env = os.environ.get("MAPKIT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"MAPKIT_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


# -- file format --------------------------------------------------------------
# Three comment headers, then one line per rank: "rank x y z", ranks ascending.

def format_mapping(mapping: Mapping) -> str:
    dx, dy, _ = mapping.dims
    lines = [
        f"# algorithm={mapping.algorithm}",
        f"# matrix={mapping.matrix_kind}",
        f"# seed={'none' if mapping.seed is None else mapping.seed}",
    ]
    for rank, node in enumerate(mapping.assignment):
        x = node % dx
        y = (node // dx) % dy
        z = node // (dx * dy)
        lines.append(f"{rank} {x} {y} {z}")
    return "\n".join(lines) + "\n"


def write_mapping(mapping: Mapping, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_mapping(mapping))


def read_mapping(path, topology: Topology) -> Mapping:
    meta = {"algorithm": "unknown", "matrix": "none", "seed": "none"}
    pairs: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                body = text.lstrip("#").strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            parts = text.split()
            if len(parts) != 4:
                raise ValueError(f"{path}: line {lineno}: expected 'rank x y z'")
            try:
                rank, x, y, z = (int(p) for p in parts)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-integer field") from None
            pairs.append((rank, topology.node_id((x, y, z))))
    n = topology.n_nodes
    if len(pairs) != n:
        raise ValueError(f"{path}: {len(pairs)} ranks, topology has {n} nodes")
    if sorted(r for r, _ in pairs) != list(range(n)):
        raise ValueError(f"{path}: ranks are not exactly 0..{n - 1}")
    assignment = [0] * n
    for rank, node in pairs:
        assignment[rank] = node
    if sorted(assignment) != list(range(n)):
        raise ValueError(f"{path}: not bijective (duplicate or missing node)")
    seed = None if meta["seed"] in ("none", "") else int(meta["seed"])
    return Mapping(tuple(assignment), topology.kind, topology.dims,
                   meta["algorithm"], meta["matrix"], seed)


# -- generation ----------------------------------------------------------------

def sfc_map(kind: str, topology: Topology) -> Mapping:
    """Rank r goes to the r-th node along the chosen curve; matrix-free."""
    cells = sfc.curve(kind, topology.dims)
    assignment = tuple(topology.node_id(c) for c in cells)
    return Mapping(assignment, topology.kind, topology.dims, kind, "none", None)


def generate_mapping(algorithm: str, topology: Topology, matrix=None,
                     seed: int | None = None) -> Mapping:
    """Run any of the twelve algorithms by name.

    Oblivious algorithms ignore ``matrix`` and ``seed``.  Aware algorithms
    require a matrix; the seeded ones fall back to :func:`default_seed`.
    """
    from . import aware  # imported here to avoid a module cycle

    if algorithm in OBLIVIOUS_ALGORITHMS:
        return sfc_map(algorithm, topology)
    if algorithm not in AWARE_ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if matrix is None:
        raise ValueError(f"algorithm {algorithm!r} requires a communication matrix")
    if algorithm in SEEDED_ALGORITHMS and seed is None:
        seed = default_seed()
    if algorithm == "bokhari":
        return aware.map_bokhari(matrix, topology, seed=seed)
    if algorithm == "topo-aware":
        return aware.map_topo_aware(matrix, topology)
    if algorithm == "greedy":
        return aware.map_greedy(matrix, topology, seed=seed)
    if algorithm == "fhgreedy":
        return aware.map_fhgreedy(matrix, topology, seed=seed)
    if algorithm == "greedy-allc":
        return aware.map_greedy_allc(matrix, topology)
    if algorithm == "bipartition":
        return aware.map_bipartition(matrix, topology)
    return aware.map_pacmap(matrix, topology)
