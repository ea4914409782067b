"""Discrete-event simulation of the edge -> link -> cloud pipeline.

Each stage is a FIFO server handling one frame at a time with deterministic
service times, so the simulation reduces to a direct recurrence over frames:

    edge_end[j]  = max(arrival[j],  edge_end[j-1])  + edge_ms
    tx_end[j]    = max(edge_end[j], tx_end[j-1])    + transmit_ms
    cloud_end[j] = max(tx_end[j],   cloud_end[j-1]) + cloud_ms

This is the independent oracle for the closed-form chunk completion time:
with all frames arriving at once the makespan must match it exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ValidationError
from .nnmodel import StageTimes


@dataclass(frozen=True)
class PipelineSpec:
    edge_ms: float
    transmit_ms: float
    cloud_ms: float

    def __post_init__(self) -> None:
        if min(self.edge_ms, self.transmit_ms, self.cloud_ms) < 0:
            raise ValidationError("stage times must be >= 0")

    @classmethod
    def from_stages(cls, stages: StageTimes) -> "PipelineSpec":
        return cls(
            edge_ms=stages.edge_ms,
            transmit_ms=stages.transmit_ms,
            cloud_ms=stages.cloud_ms,
        )


@dataclass(frozen=True, slots=True)
class FrameTiming:
    arrival_ms: float
    edge_start: float
    edge_end: float
    tx_start: float
    tx_end: float
    cloud_start: float
    cloud_end: float


@dataclass(frozen=True)
class FrameTrace:
    frames: tuple[FrameTiming, ...]

    def __len__(self) -> int:
        return len(self.frames)


def simulate(spec: PipelineSpec, arrivals: Sequence[float]) -> tuple[float, FrameTrace]:
    """Run the pipeline over the given arrival times.

    Returns the makespan (last cloud completion minus first arrival) and the
    full per-frame trace.
    """
    if not arrivals:
        raise ValidationError("need at least one arrival")
    edge_ms, tx_ms, cloud_ms = spec.edge_ms, spec.transmit_ms, spec.cloud_ms
    rows: list[FrameTiming] = []
    edge_free = tx_free = cloud_free = 0.0
    prev_arrival = arrivals[0]
    for arrival in arrivals:
        if arrival < prev_arrival:
            raise ValidationError("arrivals must be sorted non-decreasing")
        prev_arrival = arrival
        edge_start = max(arrival, edge_free)
        edge_free = edge_start + edge_ms
        tx_start = max(edge_free, tx_free)
        tx_free = tx_start + tx_ms
        cloud_start = max(tx_free, cloud_free)
        cloud_free = cloud_start + cloud_ms
        rows.append(
            FrameTiming(
                arrival_ms=arrival,
                edge_start=edge_start,
                edge_end=edge_free,
                tx_start=tx_start,
                tx_end=tx_free,
                cloud_start=cloud_start,
                cloud_end=cloud_free,
            )
        )
    makespan = rows[-1].cloud_end - arrivals[0]
    return makespan, FrameTrace(frames=tuple(rows))


def simulate_stream(
    spec: PipelineSpec, interarrival_ms: float, n: int
) -> tuple[float, list[float]]:
    """Simulate n frames arriving every interarrival_ms.

    Returns the makespan and each frame's latency (cloud completion minus
    arrival). With interarrival at or above the slowest stage no frame ever
    waits, so every latency equals the plain stage sum.
    """
    if interarrival_ms < 0:
        raise ValidationError("interarrival_ms must be >= 0")
    if n < 1:
        raise ValidationError("n must be >= 1")
    arrivals = [j * interarrival_ms for j in range(n)]
    makespan, trace = simulate(spec, arrivals)
    latencies = [f.cloud_end - f.arrival_ms for f in trace.frames]
    return makespan, latencies


def write_trace_csv(trace: FrameTrace, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["frame", "arrival", "edge_start", "edge_end", "tx_start", "tx_end", "cloud_start", "cloud_end"]
        )
        for j, f in enumerate(trace.frames):
            writer.writerow(
                [j, f.arrival_ms, f.edge_start, f.edge_end, f.tx_start, f.tx_end, f.cloud_start, f.cloud_end]
            )
