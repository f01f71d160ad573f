"""Communication-aware mapping heuristics.

All seven algorithms take an n x n communication matrix and a topology with
exactly n nodes and return a bijective mapping.  Ties are always broken
toward the smallest rank or node id so that every run is reproducible;
bokhari, greedy and fhgreedy additionally consume a seed for their random
choices.  W denotes the symmetrized matrix M + M^T throughout.
"""
from __future__ import annotations

import random
from collections import deque

import numpy as np

from .comm import CommMatrix
from .mapping import Mapping, default_seed, sfc_map
from .topology import Topology


def _checked(matrix: CommMatrix, topology: Topology) -> tuple[np.ndarray, int]:
    n = topology.n_nodes
    if matrix.n != n:
        raise ValueError(f"matrix size {matrix.n} does not match node count {n}")
    return matrix.entries, n


def _mapping(assign, topology: Topology, algorithm: str, matrix: CommMatrix,
             seed: int | None = None) -> Mapping:
    return Mapping(tuple(int(v) for v in assign), topology.kind, topology.dims,
                   algorithm, matrix.kind, seed)


def _coords(topology: Topology) -> np.ndarray:
    return np.array([topology.coord(i) for i in range(topology.n_nodes)], dtype=np.float64)


# -- bokhari ------------------------------------------------------------------

def map_bokhari(matrix: CommMatrix, topology: Topology, initial: Mapping | None = None,
                max_outer: int = 16, seed: int | None = None) -> Mapping:
    """Pairwise-interchange search maximizing adjacency cardinality.

    Cardinality counts ordered pairs (i, j) with M[i][j] > 0 whose nodes are
    adjacent.  Steepest-ascent swaps run until no swap helps; then n/4 random
    swaps perturb the best mapping and the climb repeats, for at most
    ``max_outer`` rounds or until a round fails to improve.
    """
    m, n = _checked(matrix, topology)
    if initial is None:
        initial = sfc_map("sweep", topology)
    if len(initial.assignment) != n:
        raise ValueError(f"initial mapping covers {len(initial.assignment)} ranks, need {n}")
    if seed is None:
        seed = default_seed()
    rng = random.Random(seed)

    P = m > 0
    # B[i][j] counts the directed communicating pairs between i and j (0..2);
    # a swap's cardinality gain is linear in B, which keeps it vectorizable.
    B = P.astype(np.int64) + P.T.astype(np.int64)
    A = topology.adjacency.astype(np.int64)

    def cardinality(assign: np.ndarray) -> int:
        return int(np.sum(P & (A[np.ix_(assign, assign)] > 0)))

    def climb(assign: np.ndarray) -> None:
        # C[u][p] = sum_j B[u][j] * A[p][node_of(j)], maintained across swaps.
        C = B @ A[assign, :]
        lower = np.tril_indices(n)
        while True:
            crank = C[:, assign]
            diag = np.diagonal(crank).copy()
            gain = crank + crank.T - diag[:, None] - diag[None, :] \
                + 2 * B * A[np.ix_(assign, assign)]
            gain[lower] = -1
            flat = int(np.argmax(gain))
            a, b = divmod(flat, n)
            if gain[a, b] <= 0:
                return
            pa, pb = assign[a], assign[b]
            C += np.outer(B[:, a] - B[:, b], A[pb] - A[pa])
            assign[a], assign[b] = pb, pa

    best = np.array(initial.assignment, dtype=np.int64)
    climb(best)
    best_card = cardinality(best)
    for _ in range(max_outer - 1):
        trial = best.copy()
        for _ in range(n // 4):
            i, j = rng.randrange(n), rng.randrange(n)
            trial[i], trial[j] = trial[j], trial[i]
        climb(trial)
        c = cardinality(trial)
        if c > best_card:
            best, best_card = trial, c
        else:
            break
    return _mapping(best, topology, "bokhari", matrix, seed)


# -- topo-aware ---------------------------------------------------------------

def map_topo_aware(matrix: CommMatrix, topology: Topology) -> Mapping:
    """Greedy placement minimizing distance-weighted cost to the mapped set.

    The globally heaviest process starts at the node with minimal total
    distance to all nodes; each following process is the one with maximal
    communication to the mapped set, put on the free node minimizing
    sum over mapped u of W[t][u] * distance(node, node_of(u)).
    """
    m, n = _checked(matrix, topology)
    W = m + m.T
    D = topology.distance_matrix.astype(np.float64)

    first_rank = int(np.argmax(W.sum(axis=1)))
    first_node = int(np.argmin(D.sum(axis=1)))

    assign = np.full(n, -1, dtype=np.int64)
    assign[first_rank] = first_node
    rank_free = np.ones(n, dtype=bool)
    rank_free[first_rank] = False
    node_free = np.ones(n, dtype=bool)
    node_free[first_node] = False
    placed_ranks = [first_rank]
    placed_nodes = [first_node]
    conn = W[:, first_rank].copy()

    for _ in range(n - 1):
        t = int(np.argmax(np.where(rank_free, conn, -np.inf)))
        cost = D[:, placed_nodes] @ W[t, placed_ranks]
        p = int(np.argmin(np.where(node_free, cost, np.inf)))
        assign[t] = p
        rank_free[t] = False
        node_free[p] = False
        placed_ranks.append(t)
        placed_nodes.append(p)
        conn += W[:, t]
    return _mapping(assign, topology, "topo-aware", matrix)


# -- greedy -------------------------------------------------------------------

def map_greedy(matrix: CommMatrix, topology: Topology, seed: int | None = None) -> Mapping:
    """Heaviest-neighbour-first placement near the mapped set's centroid.

    The heaviest process lands on a random node; each following process is
    the heaviest unmapped neighbour of the mapped set and goes to the free
    node closest to the centroid of the mapped nodes weighted by its
    communication with them.
    """
    m, n = _checked(matrix, topology)
    if seed is None:
        seed = default_seed()
    rng = random.Random(seed)
    W = m + m.T
    coords = _coords(topology)

    first_rank = int(np.argmax(W.sum(axis=1)))
    first_node = rng.randrange(n)

    assign = np.full(n, -1, dtype=np.int64)
    assign[first_rank] = first_node
    rank_free = np.ones(n, dtype=bool)
    rank_free[first_rank] = False
    node_free = np.ones(n, dtype=bool)
    node_free[first_node] = False
    placed_ranks = [first_rank]
    placed_nodes = [first_node]
    conn = W[:, first_rank].copy()

    for _ in range(n - 1):
        t = int(np.argmax(np.where(rank_free, conn, -np.inf)))
        w = W[t, placed_ranks]
        spots = coords[placed_nodes]
        if w.sum() > 0:
            centroid = (spots * w[:, None]).sum(axis=0) / w.sum()
        else:
            centroid = spots.mean(axis=0)
        d2 = ((coords - centroid) ** 2).sum(axis=1)
        p = int(np.argmin(np.where(node_free, d2, np.inf)))
        assign[t] = p
        rank_free[t] = False
        node_free[p] = False
        placed_ranks.append(t)
        placed_nodes.append(p)
        conn += W[:, t]
    return _mapping(assign, topology, "greedy", matrix, seed)


# -- fhgreedy -------------------------------------------------------------------

def map_fhgreedy(matrix: CommMatrix, topology: Topology, seed: int | None = None) -> Mapping:
    """Frontier variant of greedy: each placed process immediately pulls in
    its unmapped neighbours, heaviest first, onto the free nodes nearest to it.

    Processes enter a FIFO once placed; if the queue drains with processes
    left (disconnected matrix), the heaviest leftover restarts it on the
    lowest free node id.
    """
    m, n = _checked(matrix, topology)
    if seed is None:
        seed = default_seed()
    rng = random.Random(seed)
    W = m + m.T
    D = topology.distance_matrix
    totals = W.sum(axis=1)

    first_rank = int(np.argmax(totals))
    first_node = rng.randrange(n)

    assign = np.full(n, -1, dtype=np.int64)
    assign[first_rank] = first_node
    rank_free = np.ones(n, dtype=bool)
    rank_free[first_rank] = False
    node_free = np.ones(n, dtype=bool)
    node_free[first_node] = False
    placed = 1
    queue: deque[int] = deque([first_rank])

    while placed < n:
        if not queue:
            t = int(np.argmax(np.where(rank_free, totals, -np.inf)))
            p = int(np.flatnonzero(node_free)[0])
            assign[t] = p
            rank_free[t] = False
            node_free[p] = False
            placed += 1
            queue.append(t)
            continue
        t = queue.popleft()
        here = assign[t]
        nbrs = [int(j) for j in np.flatnonzero(rank_free & (W[t] > 0))]
        nbrs.sort(key=lambda j: (-W[t, j], j))
        free_nodes = [int(q) for q in np.flatnonzero(node_free)]
        free_nodes.sort(key=lambda q: (D[here, q], q))
        for j, q in zip(nbrs, free_nodes):
            assign[j] = q
            rank_free[j] = False
            node_free[q] = False
            placed += 1
            queue.append(j)
    return _mapping(assign, topology, "fhgreedy", matrix, seed)


# -- greedy-allc -----------------------------------------------------------------

def map_greedy_allc(matrix: CommMatrix, topology: Topology) -> Mapping:
    """Pair-driven placement, seed-free.

    The heaviest process starts on the highest-degree node.  Process pairs
    sorted by descending weight are then placed together: if one side is
    already mapped the other takes the nearest free node, otherwise the pair
    takes the closest free node pair.  Silent processes fill up the remaining
    nodes in rank order.
    """
    m, n = _checked(matrix, topology)
    W = m + m.T
    D = topology.distance_matrix

    first_rank = int(np.argmax(W.sum(axis=1)))
    first_node = int(np.argmax(topology.adjacency.sum(axis=1)))

    assign = np.full(n, -1, dtype=np.int64)
    assign[first_rank] = first_node
    node_free = np.ones(n, dtype=bool)
    node_free[first_node] = False

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if W[i, j] > 0]
    pairs.sort(key=lambda ij: (-W[ij[0], ij[1]], ij[0], ij[1]))

    def nearest_free(p: int) -> int:
        return int(np.argmin(np.where(node_free, D[p], np.inf)))

    for i, j in pairs:
        if assign[i] >= 0 and assign[j] >= 0:
            continue
        if assign[i] >= 0 or assign[j] >= 0:
            placed, other = (i, j) if assign[i] >= 0 else (j, i)
            q = nearest_free(int(assign[placed]))
            assign[other] = q
            node_free[q] = False
            continue
        free = np.flatnonzero(node_free)
        sub = D[np.ix_(free, free)].astype(np.float64)
        np.fill_diagonal(sub, np.inf)
        flat = int(np.argmin(sub))
        a, b = divmod(flat, len(free))
        assign[i] = int(free[a])
        assign[j] = int(free[b])
        node_free[free[a]] = False
        node_free[free[b]] = False

    leftover_nodes = deque(int(q) for q in np.flatnonzero(node_free))
    for i in range(n):
        if assign[i] < 0:
            assign[i] = leftover_nodes.popleft()
    return _mapping(assign, topology, "greedy-allc", matrix)


# -- bipartition -------------------------------------------------------------

def map_bipartition(matrix: CommMatrix, topology: Topology) -> Mapping:
    """Recursive bisection of processes against box halves of the topology.

    The node box splits in the middle of its largest extent (first axis on
    ties; the lower half takes the ceiling).  The processes split into
    matching-size groups by greedy growth from the heaviest vertex followed
    by gain-driven swap refinement.  When both halves hold the same number
    of nodes, the two groups go to whichever halves sit closer to the
    processes they talk to among those already placed by earlier splits;
    with nothing placed (or on a cost tie) the group containing the growth
    seed keeps the lower half.
    """
    m, n = _checked(matrix, topology)
    W = m + m.T
    D = topology.distance_matrix.astype(np.float64)
    assign = np.full(n, -1, dtype=np.int64)

    def box_nodes(box) -> int:
        x0, x1, y0, y1, z0, z1 = box
        return (x1 - x0) * (y1 - y0) * (z1 - z0)

    def node_ids(box) -> np.ndarray:
        x0, x1, y0, y1, z0, z1 = box
        return np.asarray([topology.node_id((x, y, z))
                           for z in range(z0, z1)
                           for y in range(y0, y1)
                           for x in range(x0, x1)], dtype=np.int64)

    def anchor_cost(group: list[int], box) -> float:
        placed = np.flatnonzero(assign >= 0)
        if placed.size == 0:
            return 0.0
        mean_dist = D[np.ix_(node_ids(box), assign[placed])].mean(axis=0)
        return float(sum(W[p, placed] @ mean_dist for p in group))

    def recurse(procs: list[int], box) -> None:
        x0, x1, y0, y1, z0, z1 = box
        if len(procs) == 1:
            assign[procs[0]] = topology.node_id((x0, y0, z0))
            return
        extents = (x1 - x0, y1 - y0, z1 - z0)
        axis = int(np.argmax(extents))
        e = extents[axis]
        cut = (e + 1) // 2
        if axis == 0:
            low = (x0, x0 + cut, y0, y1, z0, z1)
            high = (x0 + cut, x1, y0, y1, z0, z1)
        elif axis == 1:
            low = (x0, x1, y0, y0 + cut, z0, z1)
            high = (x0, x1, y0 + cut, y1, z0, z1)
        else:
            low = (x0, x1, y0, y1, z0, z0 + cut)
            high = (x0, x1, y0, y1, z0 + cut, z1)
        group_a, group_b = _bisect(procs, W, box_nodes(low))
        if box_nodes(low) == box_nodes(high):
            straight = anchor_cost(group_a, low) + anchor_cost(group_b, high)
            crossed = anchor_cost(group_a, high) + anchor_cost(group_b, low)
            if crossed < straight:
                group_a, group_b = group_b, group_a
        recurse(group_a, low)
        recurse(group_b, high)

    dx, dy, dz = topology.dims
    recurse(list(range(n)), (0, dx, 0, dy, 0, dz))
    return _mapping(assign, topology, "bipartition", matrix)


def _bisect(procs: list[int], W: np.ndarray, size_a: int) -> tuple[list[int], list[int]]:
    """Split ``procs`` into groups of size_a / rest with a small cut.

    Greedy growth from the heaviest vertex, then swap refinement: while some
    A-B swap strictly reduces the cut weight, apply the best one (bounded by
    2 * len(procs) passes).
    """
    k = len(procs)
    sub = W[np.ix_(procs, procs)]
    in_a = np.zeros(k, dtype=bool)
    seed_v = int(np.argmax(sub.sum(axis=1)))
    in_a[seed_v] = True
    conn = sub[seed_v].copy()
    for _ in range(size_a - 1):
        v = int(np.argmax(np.where(~in_a, conn, -np.inf)))
        in_a[v] = True
        conn += sub[v]

    rowsum = sub.sum(axis=1)
    for _ in range(2 * k):
        toward_a = sub[:, in_a].sum(axis=1)
        d_a = rowsum - 2 * toward_a          # gain term for vertices in A
        d_b = 2 * toward_a - rowsum          # gain term for vertices in B
        ia = np.flatnonzero(in_a)
        ib = np.flatnonzero(~in_a)
        if len(ia) == 0 or len(ib) == 0:
            break
        gains = d_a[ia][:, None] + d_b[ib][None, :] - 2 * sub[np.ix_(ia, ib)]
        flat = int(np.argmax(gains))
        r, c = divmod(flat, len(ib))
        if gains[r, c] <= 0:
            break
        in_a[ia[r]] = False
        in_a[ib[c]] = True
    group_a = [procs[v] for v in range(k) if in_a[v]]
    group_b = [procs[v] for v in range(k) if not in_a[v]]
    return group_a, group_b


# -- pacmap -------------------------------------------------------------------

def map_pacmap(matrix: CommMatrix, topology: Topology) -> Mapping:
    """Centre-out expansion.

    The heaviest process sits at the node with minimal total distance to all
    nodes.  Expansion keeps a frontier of free nodes adjacent to the
    allocation; each step maps the process with maximal communication to the
    mapped set onto the frontier node minimizing its distance-weighted cost.
    """
    m, n = _checked(matrix, topology)
    W = m + m.T
    D = topology.distance_matrix.astype(np.float64)
    adjacency = topology.adjacency

    center_rank = int(np.argmax(W.sum(axis=1)))
    center_node = int(np.argmin(D.sum(axis=1)))

    assign = np.full(n, -1, dtype=np.int64)
    assign[center_rank] = center_node
    rank_free = np.ones(n, dtype=bool)
    rank_free[center_rank] = False
    node_free = np.ones(n, dtype=bool)
    node_free[center_node] = False
    frontier = adjacency[center_node] & node_free
    placed_ranks = [center_rank]
    placed_nodes = [center_node]
    conn = W[:, center_rank].copy()

    for _ in range(n - 1):
        t = int(np.argmax(np.where(rank_free, conn, -np.inf)))
        pool = frontier if frontier.any() else node_free
        cost = D[:, placed_nodes] @ W[t, placed_ranks]
        p = int(np.argmin(np.where(pool, cost, np.inf)))
        assign[t] = p
        rank_free[t] = False
        node_free[p] = False
        frontier[p] = False
        frontier |= adjacency[p] & node_free
        placed_ranks.append(t)
        placed_nodes.append(p)
        conn += W[:, t]
    return _mapping(assign, topology, "pacmap", matrix)
