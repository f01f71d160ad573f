"""3-D direct-network topologies: mesh, torus, and the stacked-board HAEC box.

A topology is a set of compute nodes on an integer grid plus a typed link set
and a deterministic routing rule.  Nodes are addressed either by coordinate
``(x, y, z)`` or by linear id ``x + dx*y + dx*dy*z``.  Routes are computed with
dimension-order routing (X, then Y, then Z); on wrap-around dimensions the
shorter direction wins and ties break toward increasing coordinates.

The HAEC box stacks ``dz`` boards of ``dx`` x ``dy`` nodes.  Each board is a
2-D optical torus; boards are coupled by wireless links that connect every
node of a board with every node of the neighbouring board (or of all other
boards when ``wireless_full`` is set, which makes any cross-board pair one
hop apart).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

Coord = tuple[int, int, int]

TOPOLOGY_KINDS = ("mesh", "torus", "haec_box")


@dataclass(frozen=True)
class LinkSpec:
    """Physical characteristics of one link class."""

    kind: str
    bandwidth: float          # bit/s
    latency: float            # seconds
    bit_error_rate: float     # per-bit error probability

    def __post_init__(self) -> None:
        if self.kind not in ("optical", "wireless"):
            raise ValueError(f"link kind must be optical or wireless, got {self.kind!r}")
        if self.bandwidth <= 0:
            raise ValueError(f"link bandwidth must be positive, got {self.bandwidth}")
        if self.latency < 0:
            raise ValueError(f"link latency must be non-negative, got {self.latency}")
        if not 0.0 <= self.bit_error_rate < 1.0:
            raise ValueError(
                f"bit error rate must lie in [0, 1), got {self.bit_error_rate}")


# Defaults: board-level optical links and inter-board wireless links.
OPTICAL = LinkSpec("optical", bandwidth=250e9, latency=10e-12, bit_error_rate=1e-12)
WIRELESS = LinkSpec("wireless", bandwidth=100e9, latency=100e-12, bit_error_rate=1e-8)

DEFAULT_LINK_TABLE: dict[str, LinkSpec] = {"optical": OPTICAL, "wireless": WIRELESS}


@dataclass(frozen=True)
class Route:
    """An ordered walk ``source -> ... -> destination`` over declared links.

    ``hops`` holds ``(from_id, to_id, LinkSpec)`` triples; an empty route means
    source and destination coincide.
    """

    hops: tuple[tuple[int, int, LinkSpec], ...]

    def __len__(self) -> int:
        return len(self.hops)

    def __iter__(self):
        return iter(self.hops)


class Topology:
    """A concrete network instance; build via :func:`build_topology`."""

    def __init__(self, kind: str, dims: Coord, links: dict[tuple[int, int], LinkSpec],
                 link_table: dict[str, LinkSpec], wireless_full: bool = False):
        self.kind = kind
        self.dims = dims
        self.wireless_full = wireless_full
        self.link_table = link_table
        # Links are stored directed; construction inserts both directions.
        self.links = links
        self._route_cache: dict[tuple[int, int], Route] = {}

    @property
    def n_nodes(self) -> int:
        dx, dy, dz = self.dims
        return dx * dy * dz

    def node_id(self, coord: Coord) -> int:
        x, y, z = self._check_coord(coord)
        dx, dy, _ = self.dims
        return x + dx * y + dx * dy * z

    def coord(self, node: int) -> Coord:
        if not 0 <= node < self.n_nodes:
            raise ValueError(f"node id {node} out of range [0, {self.n_nodes})")
        dx, dy, _ = self.dims
        x = node % dx
        y = (node // dx) % dy
        z = node // (dx * dy)
        return (x, y, z)

    def _check_coord(self, coord: Coord) -> Coord:
        x, y, z = coord
        dx, dy, dz = self.dims
        if not (0 <= x < dx and 0 <= y < dy and 0 <= z < dz):
            raise ValueError(f"coordinate {coord} out of range for dims {self.dims}")
        return (x, y, z)

    # -- distances ---------------------------------------------------------

    def distance(self, a: Coord, b: Coord) -> int:
        """Hop count of the deterministic route from ``a`` to ``b``."""
        ax, ay, az = self._check_coord(a)
        bx, by, bz = self._check_coord(b)
        dx, dy, dz = self.dims
        if self.kind == "mesh":
            return abs(ax - bx) + abs(ay - by) + abs(az - bz)
        if self.kind == "torus":
            return (_ring_dist(ax, bx, dx) + _ring_dist(ay, by, dy)
                    + _ring_dist(az, bz, dz))
        # haec_box
        if az == bz:
            return _ring_dist(ax, bx, dx) + _ring_dist(ay, by, dy)
        return 1 if self.wireless_full else abs(az - bz)

    def distance_ids(self, u: int, v: int) -> int:
        return self.distance(self.coord(u), self.coord(v))

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """``(n, n)`` int64 array of pairwise hop counts, indexed by node id."""
        dx, dy, dz = self.dims
        ids = np.arange(self.n_nodes)
        x = ids % dx
        y = (ids // dx) % dy
        z = ids // (dx * dy)
        if self.kind == "mesh":
            return (_absdiff(x) + _absdiff(y) + _absdiff(z)).astype(np.int64)
        if self.kind == "torus":
            return (_ringdiff(x, dx) + _ringdiff(y, dy) + _ringdiff(z, dz)).astype(np.int64)
        board = _ringdiff(x, dx) + _ringdiff(y, dy)
        dzm = _absdiff(z)
        cross = np.ones_like(dzm) if self.wireless_full else dzm
        return np.where(dzm == 0, board, cross).astype(np.int64)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Boolean node adjacency; true exactly where one declared link exists."""
        return self.distance_matrix == 1

    # -- routing -----------------------------------------------------------

    def route(self, a: Coord, b: Coord) -> Route:
        return self.route_ids(self.node_id(a), self.node_id(b))

    def route_ids(self, u: int, v: int) -> Route:
        key = (u, v)
        cached = self._route_cache.get(key)
        if cached is not None:
            return cached
        path = self._path(self.coord(u), self.coord(v))
        hops = []
        for s, t in zip(path, path[1:]):
            si, ti = self.node_id(s), self.node_id(t)
            spec = self.links.get((si, ti))
            if spec is None:
                raise RuntimeError(f"routing stepped over undeclared link {s} -> {t}")
            hops.append((si, ti, spec))
        route = Route(tuple(hops))
        self._route_cache[key] = route
        return route

    def _path(self, a: Coord, b: Coord) -> list[Coord]:
        """Node sequence from a to b under the topology's routing rule."""
        dx, dy, dz = self.dims
        if self.kind == "mesh":
            return _dor_path(a, b, self.dims, wrap=(False, False, False))
        if self.kind == "torus":
            return _dor_path(a, b, self.dims, wrap=(True, True, True))
        # haec_box: same board is a 2-D torus walk; cross-board traffic first
        # takes one wireless hop that already lands on the destination column.
        ax, ay, az = a
        bx, by, bz = b
        if az == bz:
            return _dor_path(a, b, self.dims, wrap=(True, True, False))
        if self.wireless_full:
            return [a, b]
        path = [a]
        step = 1 if bz > az else -1
        path.append((bx, by, az + step))
        while path[-1][2] != bz:
            px, py, pz = path[-1]
            path.append((px, py, pz + step))
        return path


def _ring_dist(a: int, b: int, dim: int) -> int:
    d = abs(a - b)
    return min(d, dim - d)


def _absdiff(v: np.ndarray) -> np.ndarray:
    return np.abs(v[:, None] - v[None, :])


def _ringdiff(v: np.ndarray, dim: int) -> np.ndarray:
    d = np.abs(v[:, None] - v[None, :])
    return np.minimum(d, dim - d)


def _axis_steps(cur: int, target: int, dim: int, wrap: bool) -> list[int]:
    """Successive coordinate values walking one axis toward ``target``."""
    if cur == target:
        return []
    if wrap:
        fwd = (target - cur) % dim
        back = (cur - target) % dim
        # Shorter way around wins; a tie goes toward increasing coordinates.
        if fwd <= back:
            return [(cur + k) % dim for k in range(1, fwd + 1)]
        return [(cur - k) % dim for k in range(1, back + 1)]
    step = 1 if target > cur else -1
    return list(range(cur + step, target + step, step))


def _dor_path(a: Coord, b: Coord, dims: Coord, wrap: tuple[bool, bool, bool]) -> list[Coord]:
    path = [a]
    cur = list(a)
    for axis in (0, 1, 2):
        for value in _axis_steps(cur[axis], b[axis], dims[axis], wrap[axis]):
            cur[axis] = value
            path.append(tuple(cur))
    return path


def build_topology(kind: str, dims: Coord, link_table: dict[str, LinkSpec] | None = None,
                   wireless_full: bool = False) -> Topology:
    """Construct a topology instance with its full link set.

    ``kind`` is one of ``mesh``, ``torus``, ``haec_box`` (``haec`` accepted as
    an alias).  ``link_table`` may override the default ``optical`` and
    ``wireless`` link classes.  ``wireless_full`` only affects ``haec_box``.
    """
    if kind == "haec":
        kind = "haec_box"
    if kind not in TOPOLOGY_KINDS:
        raise ValueError(f"unknown topology kind {kind!r}; expected one of {TOPOLOGY_KINDS}")
    dims = tuple(int(d) for d in dims)  # type: ignore[assignment]
    if len(dims) != 3 or any(d <= 0 for d in dims):
        raise ValueError(f"dims must be three positive integers, got {dims}")
    dx, dy, dz = dims
    if kind == "haec_box" and dx != dy:
        raise ValueError(f"haec_box boards must be square, got {dx}x{dy}")
    table = dict(DEFAULT_LINK_TABLE)
    if link_table:
        table.update(link_table)
    optical, wireless = table["optical"], table["wireless"]

    topo = Topology(kind, dims, {}, table, wireless_full)
    links: dict[tuple[int, int], LinkSpec] = {}

    def add(a: Coord, b: Coord, spec: LinkSpec) -> None:
        u, v = topo.node_id(a), topo.node_id(b)
        links[(u, v)] = spec
        links[(v, u)] = spec

    if kind == "mesh":
        for z in range(dz):
            for y in range(dy):
                for x in range(dx):
                    c = (x, y, z)
                    for axis in (0, 1, 2):
                        if c[axis] + 1 < dims[axis]:
                            n = list(c)
                            n[axis] = c[axis] + 1
                            add(c, tuple(n), optical)
    elif kind == "torus":
        for z in range(dz):
            for y in range(dy):
                for x in range(dx):
                    c = (x, y, z)
                    for axis in (0, 1, 2):
                        if dims[axis] == 1:
                            continue
                        n = list(c)
                        n[axis] = (c[axis] + 1) % dims[axis]
                        if tuple(n) != c:
                            add(c, tuple(n), optical)
    else:  # haec_box
        for z in range(dz):
            for y in range(dy):
                for x in range(dx):
                    c = (x, y, z)
                    for axis in (0, 1):
                        if dims[axis] == 1:
                            continue
                        n = list(c)
                        n[axis] = (c[axis] + 1) % dims[axis]
                        if tuple(n) != c:
                            add(c, tuple(n), optical)
        for z1 in range(dz):
            for z2 in range(z1 + 1, dz):
                if not wireless_full and z2 - z1 != 1:
                    continue
                for y1 in range(dy):
                    for x1 in range(dx):
                        for y2 in range(dy):
                            for x2 in range(dx):
                                add((x1, y1, z1), (x2, y2, z2), wireless)

    topo.links = links
    return topo
