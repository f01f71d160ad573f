"""
Space-filling-curve mappings
============================

The five matrix-oblivious mappings place rank i on the i-th cell of a
walk through the node box.  Curves differ in how well consecutive ranks
stay adjacent, which matters for codes whose heavy communication is
between neighbouring ranks.
"""

from mapkit import CURVES, build_topology, format_mapping, ring_matrix, sfc_map
from mapkit.quality import dilation

mesh = build_topology("mesh", (4, 4, 4))

# Where do the first eight ranks land under each curve?
for kind in CURVES:
    mapping = sfc_map(kind, mesh)
    cells = [mesh.coord(node) for node in mapping.assignment[:8]]
    print(f"{kind:8s}", " ".join(str(c) for c in cells))

# A curve is "smooth" when consecutive ranks sit one hop apart.  Count
# adjacent consecutive pairs out of the 63 steps on the 4x4x4 mesh.
print()
for kind in CURVES:
    mapping = sfc_map(kind, mesh)
    a = mapping.assignment
    adjacent = sum(mesh.distance_ids(a[i], a[i + 1]) == 1 for i in range(63))
    print(f"{kind:8s} {adjacent}/63 unit steps")

# That smoothness shows up directly as dilation (hop-weighted traffic)
# for a ring exchange, where rank i talks only to rank i+1 mod n.
ring = ring_matrix(64)
print()
for kind in CURVES:
    mapping = sfc_map(kind, mesh)
    print(f"{kind:8s} ring dilation {dilation(ring, mapping, mesh)}")

# Mappings serialise to a small text format whose header records how the
# mapping was produced; oblivious mappings carry matrix=none.
text = format_mapping(sfc_map("hilbert", mesh))
print()
print("\n".join(text.splitlines()[:7]))
print("...")
