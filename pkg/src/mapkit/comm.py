"""Communication matrices and the six structure metrics computed from them.

A communication matrix records, for an n-process run, how much each ordered
process pair exchanged: either message counts (``kind="count"``) or payload
bytes (``kind="volume"``).  The metrics quantify how much exploitable
structure the matrix has; higher values indicate more potential benefit from
a topology-aware mapping.  Report fields use the conventional short metric
names: ca (average intensity), cb (traffic imbalance), cc (rank-distance
dispersion), ch (per-row heterogeneity), nbc (nearest-neighbour share) and
sp(k) (block-local share).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

MATRIX_KINDS = ("count", "volume")


@dataclass
class CommMatrix:
    """Square non-negative matrix of pairwise communication."""

    kind: str
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in MATRIX_KINDS:
            raise ValueError(f"matrix kind must be one of {MATRIX_KINDS}, got {self.kind!r}")
        e = np.asarray(self.entries, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"communication matrix must be square, got shape {e.shape}")
        if e.shape[0] == 0:
            raise ValueError("communication matrix must be non-empty")
        if np.any(e < 0):
            raise ValueError("communication matrix entries must be non-negative")
        if np.any(np.diagonal(e) != 0):
            warnings.warn("nonzero diagonal entries (self-communication) were zeroed")
            e = e.copy()
            np.fill_diagonal(e, 0.0)
        self.entries = e

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def total(self) -> float:
        return float(self.entries.sum())


def load_matrix_csv(path, kind: str) -> CommMatrix:
    """Read a matrix from comma-separated rows; '#' lines and blanks skipped."""
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                row = [float(cell) for cell in text.split(",")]
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric cell") from None
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no matrix rows found")
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"{path}: row {i} has {len(row)} cells, expected {n} (square matrix)")
    return CommMatrix(kind, np.array(rows, dtype=np.float64))


def save_matrix_csv(matrix: CommMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in matrix.entries:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


# -- synthetic matrices ------------------------------------------------------

def ring_matrix(n: int, weight: float = 1.0, kind: str = "count") -> CommMatrix:
    """Each rank sends ``weight`` to its successor modulo n."""
    if n < 2:
        raise ValueError("ring needs at least 2 ranks")
    m = np.zeros((n, n))
    for i in range(n):
        m[i, (i + 1) % n] = weight
    return CommMatrix(kind, m)


def random_matrix(n: int, density: float = 0.2, max_weight: int = 1000,
                  seed: int = 42, kind: str = "count") -> CommMatrix:
    """Sparse random matrix with integer weights; deterministic in ``seed``."""
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    m = rng.integers(1, max_weight + 1, size=(n, n)).astype(np.float64)
    m *= rng.random((n, n)) < density
    np.fill_diagonal(m, 0.0)
    return CommMatrix(kind, m)


# -- metrics -----------------------------------------------------------------

@dataclass
class MetricsReport:
    """The six matrix statistics plus identifying info."""

    n: int
    kind: str
    sum: float
    ca: float
    cb: float
    cc: float
    ch: float
    nbc: float
    sp: dict[int, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "n": self.n,
            "kind": self.kind,
            "sum": self.sum,
            "ca": self.ca,
            "cb": self.cb,
            "cc": self.cc,
            "ch": self.ch,
            "nbc": self.nbc,
        }
        for k in sorted(self.sp):
            out[f"sp_{k}"] = self.sp[k]
        return out


def average_intensity(matrix: CommMatrix) -> float:
    """Mean over all n^2 cells, diagonal included; reported as ca."""
    return float(matrix.entries.sum() / matrix.n ** 2)


def traffic_imbalance(matrix: CommMatrix) -> float:
    """1 - mean(T)/max(T) over per-process totals T_i = row_i + column_i sums.

    Zero means every process moves the same traffic; values approach 1 when a
    single process dominates.  Reported as cb; an all-zero matrix gives 0.
    """
    m = matrix.entries
    t = m.sum(axis=1) + m.sum(axis=0)
    peak = t.max()
    if peak == 0:
        return 0.0
    return float(1.0 - t.mean() / peak)


def rank_dispersion(matrix: CommMatrix) -> float:
    """Traffic-weighted mean rank distance |i-j|, normalised by n-1.

    0 means all traffic sits next to the diagonal; 1 means all traffic is
    between ranks 0 and n-1.  Reported as cc; all-zero matrices give 0.
    """
    m = matrix.entries
    n = matrix.n
    total = m.sum()
    if total == 0 or n == 1:
        return 0.0
    idx = np.arange(n)
    dist = np.abs(idx[:, None] - idx[None, :])
    return float((m * dist).sum() / (total * (n - 1)))


def row_heterogeneity(matrix: CommMatrix) -> float:
    """Mean per-row population variance of the peak-normalised matrix.

    The matrix is scaled by its global maximum before the per-row variances
    are averaged.  Reported as ch; all-zero matrices give 0.
    """
    m = matrix.entries
    peak = m.max()
    if peak == 0:
        return 0.0
    scaled = m / peak
    return float(np.var(scaled, axis=1).mean())


def neighbour_share(matrix: CommMatrix) -> float:
    """Share of traffic between ranks exactly 1 apart; reported as nbc."""
    m = matrix.entries
    total = m.sum()
    if total == 0:
        return 0.0
    first = np.trace(m, offset=1) + np.trace(m, offset=-1)
    return float(first / total)


def split_fraction(matrix: CommMatrix, k: int) -> float:
    """Share of traffic staying inside k contiguous rank blocks of size n/k.

    The k^2 block grid has k diagonal blocks; traffic inside them counts as
    local.  ``k`` must divide ``n``.  Reported as sp(k).
    """
    n = matrix.n
    if k <= 0 or n % k != 0:
        raise ValueError(f"k must be a positive divisor of n={n}, got {k}")
    m = matrix.entries
    total = m.sum()
    if total == 0:
        return 0.0
    size = n // k
    blocks = m.reshape(k, size, k, size)
    intra = sum(blocks[b, :, b, :].sum() for b in range(k))
    return float(intra / total)


def compute_metrics(matrix: CommMatrix, ks: tuple[int, ...] = ()) -> MetricsReport:
    """All six statistics in one report; ``ks`` selects split-fraction sizes."""
    if matrix.total == 0:
        warnings.warn("all-zero matrix: normalised metrics reported as 0")
    return MetricsReport(
        n=matrix.n,
        kind=matrix.kind,
        sum=matrix.total,
        ca=average_intensity(matrix),
        cb=traffic_imbalance(matrix),
        cc=rank_dispersion(matrix),
        ch=row_heterogeneity(matrix),
        nbc=neighbour_share(matrix),
        sp={k: split_fraction(matrix, k) for k in ks},
    )
