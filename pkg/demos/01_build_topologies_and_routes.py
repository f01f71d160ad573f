"""
Building 3-D topologies and routing between nodes
=================================================

A topology is a box of dx*dy*dz nodes with a fixed linearisation
(x + dx*y + dx*dy*z) and deterministic dimension-order routes.  Three
kinds exist: a mesh (no wraparound), a torus (wraparound in x, y, z),
and a stack of optically-linked boards joined by wireless links.
"""

import numpy as np

from mapkit import build_topology

# Build all three kinds over the same 4x4x4 box of 64 nodes.
mesh = build_topology("mesh", (4, 4, 4))
torus = build_topology("torus", (4, 4, 4))
haec = build_topology("haec", (4, 4, 4))

for t in (mesh, torus, haec):
    print(f"{t.kind:5s}  nodes={t.n_nodes}  links={len(t.links)}")

# Coordinates and node ids convert both ways.
nid = mesh.node_id((3, 2, 1))
print("node (3,2,1) has id", nid, "and maps back to", mesh.coord(nid))

# Routes are deterministic: x first, then y, then z.  Every hop names the
# link it crosses and the link kind it uses.
route = mesh.route((0, 0, 0), (2, 1, 1))
print("mesh route (0,0,0) -> (2,1,1):")
for src, dst, link in route.hops:
    print("   ", mesh.coord(src), "->", mesh.coord(dst), f"[{link.kind}]")

# The torus wraps: the same pair of opposite corners is much closer.
print("corner distance  mesh:", mesh.distance((0, 0, 0), (3, 3, 3)),
      " torus:", torus.distance((0, 0, 0), (3, 3, 3)),
      " haec:", haec.distance((0, 0, 0), (3, 3, 3)))

# On the board stack, moving between boards takes a wireless hop straight
# above/below the destination column, then continues board-by-board.
route = haec.route((1, 2, 0), (3, 0, 2))
print("haec route (1,2,0) -> (3,0,2):")
for src, dst, link in route.hops:
    print("   ", haec.coord(src), "->", haec.coord(dst), f"[{link.kind}]")

# By default only neighbouring boards see each other, so crossing k
# boards costs k wireless hops and the stack has no vertical wraparound.
# With wireless_full=True every board pair is one hop, and then adding
# shortcuts can only shrink distances: haec <= torus <= mesh for every
# node pair.
haec_full = build_topology("haec", (4, 4, 4), wireless_full=True)
dm, dt, dh = (t.distance_matrix for t in (mesh, torus, haec_full))
print("full-wireless haec <= torus <= mesh everywhere:",
      bool(np.all(dh <= dt) and np.all(dt <= dm)))
print("average pair distance  mesh:", dm.mean(), " torus:", dt.mean(),
      " haec(adjacent):", haec.distance_matrix.mean(),
      " haec(full):", dh.mean())
