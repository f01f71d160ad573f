"""Space-filling curve walks over 3-D grids.

Each generator returns the full cell sequence of one curve family on a
``(dx, dy, dz)`` box, starting at (0, 0, 0).  Curves defined only on special
side lengths (hilbert: equal power-of-two sides; peano: powers of three) are
built on the smallest enclosing cube and clipped to the box, keeping the
in-bounds cells in curve order.
"""
from __future__ import annotations

Coord = tuple[int, int, int]

CURVE_KINDS = ("sweep", "scan", "hilbert", "gray", "peano")


def sweep_curve(dims: Coord) -> list[Coord]:
    """Lexicographic XYZ walk: x fastest, then y, then z."""
    dx, dy, dz = _check_dims(dims)
    return [(x, y, z) for z in range(dz) for y in range(dy) for x in range(dx)]


def scan_curve(dims: Coord) -> list[Coord]:
    """Boustrophedon walk: x reverses on every other row.

    The row parity counter runs over the whole walk rather than per plane, so
    the first row of a new plane continues in the opposite direction of the
    last row below it and consecutive cells stay grid-adjacent at plane seams.
    """
    dx, dy, dz = _check_dims(dims)
    cells: list[Coord] = []
    row = 0
    for z in range(dz):
        ys = range(dy) if z % 2 == 0 else range(dy - 1, -1, -1)
        for y in ys:
            xs = range(dx) if row % 2 == 0 else range(dx - 1, -1, -1)
            cells.extend((x, y, z) for x in xs)
            row += 1
    return cells


def gray_curve(dims: Coord) -> list[Coord]:
    """Reflected-binary walk; consecutive cells differ in exactly one bit.

    Cell i sits at the bit-deinterleaved reflected Gray code of i: the code's
    bits are dealt round-robin to x, y, z starting with the least significant
    bit on x, skipping axes that have exhausted their width.  All sides must
    be powers of two.
    """
    dx, dy, dz = _check_dims(dims)
    bits = []
    for side in (dx, dy, dz):
        b = side.bit_length() - 1
        if side != 1 << b:
            raise ValueError(f"gray curve needs power-of-two sides, got {dims}")
        bits.append(b)
    slots: list[tuple[int, int]] = []  # (axis, bit index) in LSB-first deal order
    counters = [0, 0, 0]
    while len(slots) < sum(bits):
        for axis in (0, 1, 2):
            if counters[axis] < bits[axis]:
                slots.append((axis, counters[axis]))
                counters[axis] += 1
    cells: list[Coord] = []
    for i in range(dx * dy * dz):
        g = i ^ (i >> 1)
        c = [0, 0, 0]
        for pos, (axis, bit) in enumerate(slots):
            if (g >> pos) & 1:
                c[axis] |= 1 << bit
        cells.append(tuple(c))
    return cells


def hilbert_curve(dims: Coord) -> list[Coord]:
    """Hilbert walk; consecutive cells are grid-adjacent.

    Native on cubes with power-of-two sides (transpose construction);
    otherwise clipped from the smallest enclosing such cube.
    """
    dx, dy, dz = _check_dims(dims)
    side = max(dx, dy, dz)
    b = max(side - 1, 1).bit_length()
    cube = 1 << b
    cells = (_hilbert_point(h, b) for h in range(cube ** 3))
    if (dx, dy, dz) == (cube, cube, cube):
        return list(cells)
    return [c for c in cells if c[0] < dx and c[1] < dy and c[2] < dz]


def _hilbert_point(h: int, bits: int) -> Coord:
    """Cell coordinates of curve index h on a (2^bits)^3 cube."""
    ndim = 3
    x = [0, 0, 0]
    # Deal index bits MSB-first round-robin into the transposed coordinate form.
    for i in range(bits * ndim):
        axis = i % ndim
        x[axis] = (x[axis] << 1) | ((h >> (bits * ndim - 1 - i)) & 1)
    # Gray decode.
    t = x[ndim - 1] >> 1
    for i in range(ndim - 1, 0, -1):
        x[i] ^= x[i - 1]
    x[0] ^= t
    # Undo the per-level rotations and reflections.
    q = 2
    while q != (1 << bits):
        p = q - 1
        for i in range(ndim - 1, -1, -1):
            if x[i] & q:
                x[0] ^= p
            else:
                t = (x[0] ^ x[i]) & p
                x[0] ^= t
                x[i] ^= t
        q <<= 1
    return (x[0], x[1], x[2])


def peano_curve(dims: Coord) -> list[Coord]:
    """Peano switchback walk; consecutive cells are grid-adjacent.

    Native on cubes with power-of-three sides; otherwise clipped from the
    smallest enclosing such cube.
    """
    dx, dy, dz = _check_dims(dims)
    side = max(dx, dy, dz)
    m = 0
    while 3 ** m < side:
        m += 1
    cube = 3 ** m
    cells = (_peano_point(h, m) for h in range(cube ** 3))
    if (dx, dy, dz) == (cube, cube, cube):
        return list(cells)
    return [c for c in cells if c[0] < dx and c[1] < dy and c[2] < dz]


def _peano_point(h: int, m: int) -> Coord:
    """Cell coordinates of curve index h on a (3^m)^3 cube.

    Index digits (base 3, most significant first) are dealt round-robin to
    the axes; a digit is complemented (d -> 2-d) exactly when the sum of the
    original digits dealt to the other two axes so far is odd.  This is the
    switchback rule that keeps consecutive cells adjacent.
    """
    ndim = 3
    nd = ndim * m
    digits = []
    v = h
    for _ in range(nd):
        digits.append(v % 3)
        v //= 3
    digits.reverse()
    coords = [0, 0, 0]
    axis_sum = [0, 0, 0]  # running sums of original digits per axis
    total = 0
    for pos, d in enumerate(digits):
        axis = pos % ndim
        if (total - axis_sum[axis]) % 2 == 1:
            out = 2 - d
        else:
            out = d
        coords[axis] = coords[axis] * 3 + out
        axis_sum[axis] += d
        total += d
    return (coords[0], coords[1], coords[2])


CURVES = {
    "sweep": sweep_curve,
    "scan": scan_curve,
    "hilbert": hilbert_curve,
    "gray": gray_curve,
    "peano": peano_curve,
}


def curve(kind: str, dims: Coord) -> list[Coord]:
    """Dispatch to one of the five curve families by name."""
    try:
        fn = CURVES[kind]
    except KeyError:
        raise ValueError(f"unknown curve {kind!r}; expected one of {CURVE_KINDS}") from None
    return fn(dims)


def _check_dims(dims: Coord) -> Coord:
    dx, dy, dz = (int(d) for d in dims)
    if dx <= 0 or dy <= 0 or dz <= 0:
        raise ValueError(f"dims must be positive, got {dims}")
    return (dx, dy, dz)
