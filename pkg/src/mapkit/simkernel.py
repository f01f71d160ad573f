"""Deterministic trace replay under a contention-oblivious link model.

Each message travels its static route independently of all other traffic.
A message of b bytes split into m packets of ``packet_bytes`` costs

    sum over hops (latency_i + s_i) + (m - 1) * max_i s_i

where s_i is the per-packet serialization time of hop i, optionally inflated
by the expected retransmissions 1 / (1 - BER_i)^bits_per_packet (pipelined
store-and-forward: the slowest hop paces the packet train).  Replay rules:
compute advances a rank's clock; a blocking send completes at message
arrival; a blocking recv (or wait on irecv) completes at max(clock, arrival)
of the matching message; wait on an isend is free; matching is FIFO per
(source, destination, tag); a collective releases all participants at the
maximum participant clock plus a configurable delay.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .comm import CommMatrix
from .mapping import Mapping
from .quality import dilation
from .topology import Route, Topology
from .trace import Trace


@dataclass(frozen=True)
class ModelConfig:
    packet_bytes: int = 4096
    reliability_inflation: bool = True
    collective_min_delay: float = 0.0

    def __post_init__(self) -> None:
        if self.packet_bytes <= 0:
            raise ValueError(f"packet_bytes must be positive, got {self.packet_bytes}")
        if self.collective_min_delay < 0:
            raise ValueError("collective_min_delay must be non-negative")


class SimulationError(Exception):
    """Replay violated the trace/message contract."""


class DeadlockError(SimulationError):
    """No rank can make progress; carries the stuck ranks and their ops."""

    def __init__(self, stuck: dict[int, str]):
        self.stuck = stuck
        detail = "; ".join(f"rank {r}: {what}" for r, what in sorted(stuck.items()))
        super().__init__(f"deadlock, no deliverable message ({detail})")


def transfer_time(nbytes: int, route: Route, config: ModelConfig | None = None) -> float:
    """Seconds one message needs on ``route``; an empty route is free."""
    if nbytes < 0:
        raise ValueError("byte count must be non-negative")
    config = config or ModelConfig()
    hops = tuple(route)
    if not hops:
        return 0.0
    latency = sum(spec.latency for _, _, spec in hops)
    if nbytes == 0:
        return latency
    serial = [_hop_serialization(spec, config) for _, _, spec in hops]
    packets = math.ceil(nbytes / config.packet_bytes)
    return latency + sum(serial) + (packets - 1) * max(serial)


def _hop_serialization(spec, config: ModelConfig) -> float:
    bits = 8 * config.packet_bytes
    s = bits / spec.bandwidth
    if config.reliability_inflation and spec.bit_error_rate > 0:
        # expected retransmissions: 1/(1-BER)^bits, computed in log space to
        # keep ~1e-15 relative accuracy for BER as small as 1e-12
        s *= math.exp(-bits * math.log1p(-spec.bit_error_rate))
    return s


@dataclass
class SimReport:
    """Outcome of one replay."""

    n_ranks: int
    per_rank_finish: list[float]
    parallel_cost: float
    p2p_cost: float
    comm_model_time: float
    msg_count: int
    total_bytes: int
    post_dilation: float
    per_link_bytes: dict[tuple[int, int], int]
    post_count: np.ndarray = field(repr=False, default=None)
    post_volume: np.ndarray = field(repr=False, default=None)

    def as_dict(self) -> dict:
        return {
            "n_ranks": self.n_ranks,
            "per_rank_finish": self.per_rank_finish,
            "parallel_cost": self.parallel_cost,
            "p2p_cost": self.p2p_cost,
            "comm_model_time": self.comm_model_time,
            "msg_count": self.msg_count,
            "total_bytes": self.total_bytes,
            "post_dilation": self.post_dilation,
            "per_link_bytes": {f"{u}-{v}": b for (u, v), b in sorted(self.per_link_bytes.items())},
        }

    def canonical_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    def csv_row(self) -> list[str]:
        return [str(self.n_ranks), repr(max(self.per_rank_finish)),
                repr(self.parallel_cost), repr(self.p2p_cost),
                repr(self.comm_model_time), str(self.msg_count),
                str(self.total_bytes), repr(self.post_dilation)]


CSV_HEADER = ["n_ranks", "max_finish", "parallel_cost", "p2p_cost",
              "comm_model_time", "msg_count", "total_bytes", "post_dilation"]


def post_matrix(report: SimReport) -> tuple[CommMatrix, CommMatrix]:
    """(count, volume) matrices rebuilt from the simulated messages."""
    return (CommMatrix("count", report.post_count.copy()),
            CommMatrix("volume", report.post_volume.copy()))


def simulate(trace: Trace, mapping: Mapping, topology: Topology,
             config: ModelConfig | None = None) -> SimReport:
    """Replay ``trace`` on the mapped topology; deterministic in all inputs."""
    config = config or ModelConfig()
    trace.validate()
    n_nodes = topology.n_nodes
    if trace.n_ranks > n_nodes:
        raise ValueError(f"trace has {trace.n_ranks} ranks, topology only {n_nodes} nodes")
    if len(mapping.assignment) != n_nodes:
        raise ValueError(f"mapping covers {len(mapping.assignment)} ranks, need {n_nodes}")

    nr = trace.n_ranks
    assign = mapping.assignment

    # Per node pair: (latency sum, serialization sum, slowest hop, hop list).
    pair_cache: dict[tuple[int, int], tuple[float, float, float, tuple]] = {}

    def pair_params(src: int, dst: int):
        key = (assign[src], assign[dst])
        params = pair_cache.get(key)
        if params is None:
            route = topology.route_ids(key[0], key[1])
            hops = tuple((u, v) for u, v, _ in route)
            if hops:
                latency = sum(spec.latency for _, _, spec in route)
                serial = [_hop_serialization(spec, config) for _, _, spec in route]
                params = (latency, sum(serial), max(serial), hops)
            else:
                params = (0.0, 0.0, 0.0, hops)
            pair_cache[key] = params
        return params

    def message_time(nbytes: int, params) -> float:
        latency, s_sum, s_max, hops = params
        if not hops or nbytes == 0:
            return latency
        packets = -(-nbytes // config.packet_bytes)
        return latency + s_sum + (packets - 1) * s_max

    # collective participation
    participants: dict[str, set[int]] = {}
    for seq in trace.events:
        for ev in seq:
            if ev.op == "coll":
                participants.setdefault(ev.coll_id, set()).add(ev.rank)

    clocks = [0.0] * nr
    idx = [0] * nr
    posted_recv: list[dict | None] = [None] * nr
    requests: list[dict[int, dict]] = [dict() for _ in range(nr)]
    channels: dict[tuple[int, int, int], dict] = {}
    coll_arrivals: dict[str, dict[int, float]] = {}
    coll_release: dict[str, float] = {}

    msg_count = 0
    total_bytes = 0
    comm_model_time = 0.0
    p2p_cost = 0.0
    per_link_bytes: dict[tuple[int, int], int] = {}
    post_count = np.zeros((n_nodes, n_nodes))
    post_volume = np.zeros((n_nodes, n_nodes))

    def channel(src: int, dst: int, tag: int) -> dict:
        return channels.setdefault((src, dst, tag), {"sends": [], "recvs": []})

    def issue_send(ev) -> float:
        """Put the message on the wire; returns its arrival time."""
        nonlocal msg_count, total_bytes, comm_model_time
        params = pair_params(ev.rank, ev.peer)
        duration = message_time(ev.bytes, params)
        arrival = clocks[ev.rank] + duration
        msg_count += 1
        total_bytes += ev.bytes
        comm_model_time += duration
        post_count[ev.rank, ev.peer] += 1
        post_volume[ev.rank, ev.peer] += ev.bytes
        for hop in params[3]:
            per_link_bytes[hop] = per_link_bytes.get(hop, 0) + ev.bytes
        ch = channel(ev.rank, ev.peer, ev.tag)
        if ch["recvs"]:
            box = ch["recvs"].pop(0)
            box["arrival"] = arrival
        else:
            ch["sends"].append(arrival)
        return arrival

    def post_recv(ev) -> dict:
        ch = channel(ev.peer, ev.rank, ev.tag)
        box: dict = {"arrival": None}
        if ch["sends"]:
            box["arrival"] = ch["sends"].pop(0)
        else:
            ch["recvs"].append(box)
        return box

    def advance(rank: int) -> bool:
        """Run the rank until it blocks or finishes; True if anything ran."""
        nonlocal p2p_cost
        seq = trace.events[rank]
        moved = False
        while idx[rank] < len(seq):
            ev = seq[idx[rank]]
            if ev.op == "compute":
                clocks[rank] += ev.dur
            elif ev.op == "isend":
                issue_send(ev)
                requests[rank][ev.req] = {"kind": "send"}
            elif ev.op == "send":
                arrival = issue_send(ev)
                p2p_cost += arrival - clocks[rank]
                clocks[rank] = arrival
            elif ev.op == "irecv":
                box = post_recv(ev)
                box["kind"] = "recv"
                requests[rank][ev.req] = box
            elif ev.op == "recv":
                if posted_recv[rank] is None:
                    posted_recv[rank] = post_recv(ev)
                box = posted_recv[rank]
                if box["arrival"] is None:
                    return moved
                done = max(clocks[rank], box["arrival"])
                p2p_cost += done - clocks[rank]
                clocks[rank] = done
                posted_recv[rank] = None
            elif ev.op == "wait":
                box = requests[rank].get(ev.req)
                if box is None:
                    raise SimulationError(f"rank {rank}: wait on unknown request {ev.req}")
                if box["kind"] == "recv":
                    if box["arrival"] is None:
                        return moved
                    done = max(clocks[rank], box["arrival"])
                    p2p_cost += done - clocks[rank]
                    clocks[rank] = done
                del requests[rank][ev.req]
            else:  # coll
                arrivals = coll_arrivals.setdefault(ev.coll_id, {})
                if rank not in arrivals:
                    arrivals[rank] = clocks[rank]
                if ev.coll_id not in coll_release:
                    if len(arrivals) == len(participants[ev.coll_id]):
                        coll_release[ev.coll_id] = (max(arrivals.values())
                                                    + config.collective_min_delay)
                    else:
                        return moved
                clocks[rank] = coll_release[ev.coll_id]
            idx[rank] += 1
            moved = True
        return moved

    while True:
        any_progress = False
        all_done = True
        for rank in range(nr):
            if idx[rank] < len(trace.events[rank]):
                if advance(rank):
                    any_progress = True
                if idx[rank] < len(trace.events[rank]):
                    all_done = False
        if all_done:
            break
        if not any_progress:
            stuck = {}
            for rank in range(nr):
                if idx[rank] < len(trace.events[rank]):
                    ev = trace.events[rank][idx[rank]]
                    what = ev.op if ev.op == "coll" else f"{ev.op} peer {ev.peer}"
                    if ev.op == "wait":
                        what = f"wait on request {ev.req}"
                    stuck[rank] = what
            raise DeadlockError(stuck)

    for key, ch in channels.items():
        src, dst, tag = key
        if ch["sends"]:
            raise SimulationError(
                f"{len(ch['sends'])} unreceived message(s) from rank {src} "
                f"to rank {dst} with tag {tag} at end of trace")
        if ch["recvs"]:
            raise SimulationError(
                f"{len(ch['recvs'])} unmatched receive(s) on rank {dst} "
                f"from rank {src} with tag {tag} at end of trace")

    post_vol = CommMatrix("volume", post_volume.copy())
    report = SimReport(
        n_ranks=nr,
        per_rank_finish=list(clocks),
        parallel_cost=max(clocks) * n_nodes if clocks else 0.0,
        p2p_cost=p2p_cost,
        comm_model_time=comm_model_time,
        msg_count=msg_count,
        total_bytes=total_bytes,
        post_dilation=dilation(post_vol, mapping, topology),
        per_link_bytes=per_link_bytes,
        post_count=post_count,
        post_volume=post_volume,
    )
    return report
