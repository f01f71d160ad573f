"""Replayable event traces: types, synthetic generators, and file I/O.

A trace holds one totally ordered event sequence per rank.  Events cover
local computation, blocking and non-blocking point-to-point transfers, waits
on outstanding requests, and named collectives.  Trace files carry one JSON
object per line with durations in integer nanoseconds, which keeps them
diff-able and byte-stable across runs.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

import numpy as np

from .comm import CommMatrix

OPS = ("compute", "send", "recv", "isend", "irecv", "wait", "coll")
PATTERNS = ("ring", "stencil7", "random-sparse", "cg-like")


@dataclass(frozen=True)
class TraceEvent:
    rank: int
    op: str
    dur: float = 0.0       # seconds, compute only
    peer: int = -1         # send/recv family
    bytes: int = 0
    tag: int = 0
    req: int = -1          # isend/irecv/wait
    coll_id: str = ""


@dataclass
class Trace:
    n_ranks: int
    events: list[list[TraceEvent]] = field(default_factory=list)

    def validate(self) -> None:
        if self.n_ranks <= 0:
            raise ValueError("trace needs at least one rank")
        if len(self.events) != self.n_ranks:
            raise ValueError(f"{len(self.events)} event lists for {self.n_ranks} ranks")
        for rank, seq in enumerate(self.events):
            issued: set[int] = set()
            waited: set[int] = set()
            seen_colls: set[str] = set()
            for ev in seq:
                if ev.rank != rank:
                    raise ValueError(f"event rank {ev.rank} filed under rank {rank}")
                if ev.op not in OPS:
                    raise ValueError(f"unknown op {ev.op!r}")
                if ev.op == "compute" and ev.dur < 0:
                    raise ValueError("negative compute duration")
                if ev.op in ("send", "recv", "isend", "irecv"):
                    if not 0 <= ev.peer < self.n_ranks:
                        raise ValueError(f"rank {rank}: peer {ev.peer} out of range")
                    if ev.bytes < 0:
                        raise ValueError("negative byte count")
                if ev.op in ("isend", "irecv"):
                    if ev.req in issued:
                        raise ValueError(f"rank {rank}: request id {ev.req} reused")
                    issued.add(ev.req)
                if ev.op == "wait":
                    if ev.req not in issued or ev.req in waited:
                        raise ValueError(
                            f"rank {rank}: wait on request {ev.req} never issued")
                    waited.add(ev.req)
                if ev.op == "coll":
                    if ev.coll_id in seen_colls:
                        raise ValueError(
                            f"rank {rank}: collective {ev.coll_id!r} appears twice")
                    seen_colls.add(ev.coll_id)

    def message_totals(self) -> tuple[int, int]:
        """(message count, total bytes) over all send/isend events."""
        count = 0
        total = 0
        for seq in self.events:
            for ev in seq:
                if ev.op in ("send", "isend"):
                    count += 1
                    total += ev.bytes
        return count, total


def trace_matrices(trace: Trace) -> tuple[CommMatrix, CommMatrix]:
    """Extract (count, volume) matrices from the trace's send events."""
    n = trace.n_ranks
    count = np.zeros((n, n))
    volume = np.zeros((n, n))
    for seq in trace.events:
        for ev in seq:
            if ev.op in ("send", "isend"):
                count[ev.rank, ev.peer] += 1
                volume[ev.rank, ev.peer] += ev.bytes
    return CommMatrix("count", count), CommMatrix("volume", volume)


# -- file I/O ------------------------------------------------------------------

def write_trace(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for seq in trace.events:
            for ev in seq:
                fh.write(json.dumps(_event_obj(ev), sort_keys=True,
                                    separators=(",", ":")) + "\n")


def _event_obj(ev: TraceEvent) -> dict:
    obj: dict = {"rank": ev.rank, "op": ev.op}
    if ev.op == "compute":
        obj["dur_ns"] = round(ev.dur * 1e9)
    elif ev.op in ("send", "isend"):
        obj.update(peer=ev.peer, bytes=ev.bytes, tag=ev.tag)
        if ev.op == "isend":
            obj["req"] = ev.req
    elif ev.op in ("recv", "irecv"):
        obj.update(peer=ev.peer, tag=ev.tag)
        if ev.op == "irecv":
            obj["req"] = ev.req
    elif ev.op == "wait":
        obj["req"] = ev.req
    else:
        obj["coll_id"] = ev.coll_id
    return obj


def load_trace(path, n_ranks: int | None = None) -> Trace:
    per_rank: dict[int, list[TraceEvent]] = {}
    top = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: bad JSON ({exc.msg})") from None
            try:
                ev = _event_from_obj(obj)
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            per_rank.setdefault(ev.rank, []).append(ev)
            top = max(top, ev.rank)
    if top < 0:
        raise ValueError(f"{path}: empty trace")
    n = n_ranks if n_ranks is not None else top + 1
    if top >= n:
        raise ValueError(f"{path}: rank {top} out of range for {n} ranks")
    trace = Trace(n, [per_rank.get(r, []) for r in range(n)])
    trace.validate()
    return trace


def _event_from_obj(obj: dict) -> TraceEvent:
    rank = int(obj["rank"])
    if rank < 0:
        raise ValueError(f"negative rank {rank}")
    op = obj["op"]
    if op not in OPS:
        raise ValueError(f"unknown op {op!r}")
    if op == "compute":
        return TraceEvent(rank, op, dur=int(obj["dur_ns"]) * 1e-9)
    if op in ("send", "isend"):
        return TraceEvent(rank, op, peer=int(obj["peer"]), bytes=int(obj["bytes"]),
                          tag=int(obj.get("tag", 0)),
                          req=int(obj["req"]) if op == "isend" else -1)
    if op in ("recv", "irecv"):
        return TraceEvent(rank, op, peer=int(obj["peer"]), tag=int(obj.get("tag", 0)),
                          req=int(obj["req"]) if op == "irecv" else -1)
    if op == "wait":
        return TraceEvent(rank, op, req=int(obj["req"]))
    return TraceEvent(rank, op, coll_id=str(obj["coll_id"]))


# -- generators ----------------------------------------------------------------

def gen_trace(pattern: str, n: int, *, bytes: int = 1024, iters: int = 1,
              seed: int = 42, dims: tuple[int, int, int] | None = None,
              compute_ns: int = 1000, degree: int = 3) -> Trace:
    """Build a synthetic trace; deterministic in all parameters.

    Patterns: ``ring`` (isend/irecv to the next rank), ``stencil7``
    (non-blocking 6-neighbour halo exchange on a grid), ``random-sparse``
    (each rank sends to ``degree`` random peers), ``cg-like`` (blocking
    butterfly exchange plus one collective per iteration).
    """
    if n <= 0:
        raise ValueError("need at least one rank")
    if iters <= 0:
        raise ValueError("iters must be positive")
    if bytes < 0:
        raise ValueError("bytes must be non-negative")
    if pattern == "ring":
        trace = _gen_ring(n, bytes, iters, compute_ns)
    elif pattern == "stencil7":
        trace = _gen_stencil7(n, bytes, iters, compute_ns, dims)
    elif pattern == "random-sparse":
        trace = _gen_random_sparse(n, bytes, iters, seed, degree)
    elif pattern == "cg-like":
        trace = _gen_cg_like(n, bytes, iters, compute_ns)
    else:
        raise ValueError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    trace.validate()
    return trace


def _gen_ring(n: int, nbytes: int, iters: int, compute_ns: int) -> Trace:
    if n < 2:
        raise ValueError("ring needs at least 2 ranks")
    events: list[list[TraceEvent]] = [[] for _ in range(n)]
    for it in range(iters):
        for r in range(n):
            rr, rs = 2 * it, 2 * it + 1
            events[r].append(TraceEvent(r, "irecv", peer=(r - 1) % n, tag=it, req=rr))
            events[r].append(TraceEvent(r, "isend", peer=(r + 1) % n, bytes=nbytes,
                                        tag=it, req=rs))
            events[r].append(TraceEvent(r, "wait", req=rr))
            events[r].append(TraceEvent(r, "wait", req=rs))
            events[r].append(TraceEvent(r, "compute", dur=compute_ns * 1e-9))
    return Trace(n, events)


def _stencil_dims(n: int, dims: tuple[int, int, int] | None) -> tuple[int, int, int]:
    if dims is not None:
        dx, dy, dz = dims
        if dx * dy * dz != n:
            raise ValueError(f"dims {dims} do not cover {n} ranks")
        return (dx, dy, dz)
    side = round(n ** (1 / 3))
    if side ** 3 == n:
        return (side, side, side)
    return (n, 1, 1)


def _gen_stencil7(n: int, nbytes: int, iters: int, compute_ns: int,
                  dims: tuple[int, int, int] | None) -> Trace:
    dx, dy, dz = _stencil_dims(n, dims)
    events: list[list[TraceEvent]] = [[] for _ in range(n)]

    def neighbours(r: int) -> list[int]:
        x = r % dx
        y = (r // dx) % dy
        z = r // (dx * dy)
        out = []
        for axis, (c, lim) in enumerate(((x, dx), (y, dy), (z, dz))):
            for step in (-1, 1):
                if 0 <= c + step < lim:
                    coords = [x, y, z]
                    coords[axis] = c + step
                    out.append(coords[0] + dx * coords[1] + dx * dy * coords[2])
        return out

    for it in range(iters):
        for r in range(n):
            nbrs = neighbours(r)
            base = 2 * len(nbrs) * it
            reqs = []
            for k, peer in enumerate(nbrs):
                req = base + k
                events[r].append(TraceEvent(r, "irecv", peer=peer, tag=it, req=req))
                reqs.append(req)
            for k, peer in enumerate(nbrs):
                req = base + len(nbrs) + k
                events[r].append(TraceEvent(r, "isend", peer=peer, bytes=nbytes,
                                            tag=it, req=req))
                reqs.append(req)
            for req in reqs:
                events[r].append(TraceEvent(r, "wait", req=req))
            events[r].append(TraceEvent(r, "compute", dur=compute_ns * 1e-9))
    return Trace(n, events)


def _gen_random_sparse(n: int, max_bytes: int, iters: int, seed: int, degree: int) -> Trace:
    if n < 2:
        raise ValueError("random-sparse needs at least 2 ranks")
    degree = min(degree, n - 1)
    rng = random.Random(seed)
    events: list[list[TraceEvent]] = [[] for _ in range(n)]
    req_counter = [0] * n

    def next_req(r: int) -> int:
        req_counter[r] += 1
        return req_counter[r] - 1

    lo = min(256, max(max_bytes, 1))
    for it in range(iters):
        msgs: list[tuple[int, int, int]] = []
        for src in range(n):
            peers = rng.sample([p for p in range(n) if p != src], degree)
            for dst in peers:
                msgs.append((src, dst, rng.randint(lo, max(max_bytes, lo))))
        for r in range(n):
            reqs = []
            for src, dst, size in msgs:
                if dst == r:
                    req = next_req(r)
                    events[r].append(TraceEvent(r, "irecv", peer=src, tag=it, req=req))
                    reqs.append(req)
            for src, dst, size in msgs:
                if src == r:
                    req = next_req(r)
                    events[r].append(TraceEvent(r, "isend", peer=dst, bytes=size,
                                                tag=it, req=req))
                    reqs.append(req)
            for req in reqs:
                events[r].append(TraceEvent(r, "wait", req=req))
            events[r].append(TraceEvent(r, "compute",
                                        dur=rng.randint(500, 2000) * 1e-9))
    return Trace(n, events)


def _gen_cg_like(n: int, nbytes: int, iters: int, compute_ns: int) -> Trace:
    """Blocking butterfly exchange; the lower rank of a pair sends first.

    Messages in a matched pair use tags distinguishing the two directions so
    the recv of the first sender cannot match its own outgoing traffic.
    """
    events: list[list[TraceEvent]] = [[] for _ in range(n)]
    for it in range(iters):
        phase = 0
        d = 1
        while d < n:
            for r in range(n):
                partner = r ^ d
                if partner >= n:
                    continue
                tag = 1000 * it + 2 * phase
                if r < partner:
                    events[r].append(TraceEvent(r, "send", peer=partner, bytes=nbytes,
                                                tag=tag))
                    events[r].append(TraceEvent(r, "recv", peer=partner, tag=tag + 1))
                else:
                    events[r].append(TraceEvent(r, "recv", peer=partner, tag=tag))
                    events[r].append(TraceEvent(r, "send", peer=partner, bytes=nbytes,
                                                tag=tag + 1))
            for r in range(n):
                events[r].append(TraceEvent(r, "compute", dur=compute_ns * 1e-9))
            phase += 1
            d <<= 1
        for r in range(n):
            events[r].append(TraceEvent(r, "coll", coll_id=f"iter{it}"))
    return Trace(n, events)
