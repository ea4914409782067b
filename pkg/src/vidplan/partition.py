"""Choosing where to split the network between edge and cloud.

With a chunk of n frames flowing through the three-stage pipeline
(edge compute, link, cloud compute), the chunk completion time for a cut
after layer x is

    t(x, n) = (n - 1) * max(stages) + edge + transmit + cloud

since after warm-up every stage overlaps and the slowest one paces the
pipeline. The planner evaluates all m + 1 cuts and picks the argmin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Sequence

from .errors import ValidationError
from .nnmodel import NetworkProfile, StageTimes, output_bytes_at, stage_times

EPSILON_MS = 1e-9  # absolute tolerance for comparing times


@dataclass(frozen=True)
class PartitionPlan:
    cut: int
    chunk_size: int
    predicted_ms: float
    stages: StageTimes
    bottleneck: str  # "edge" | "link" | "cloud"

    def to_dict(self) -> dict:
        return {
            "cut": self.cut,
            "chunk_size": self.chunk_size,
            "predicted_ms": self.predicted_ms,
            "stages": {
                "edge_ms": self.stages.edge_ms,
                "transmit_ms": self.stages.transmit_ms,
                "cloud_ms": self.stages.cloud_ms,
            },
            "bottleneck": self.bottleneck,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class RepartitionPolicy:
    relative_tolerance: float = 0.2
    min_samples: int = 30

    def __post_init__(self) -> None:
        if self.relative_tolerance <= 0:
            raise ValidationError("relative_tolerance must be positive")


def bottleneck_stage(stages: StageTimes) -> str:
    """Name of the slowest stage; ties resolve in edge, link, cloud order."""
    if stages.edge_ms >= stages.transmit_ms and stages.edge_ms >= stages.cloud_ms:
        return "edge"
    if stages.transmit_ms >= stages.cloud_ms:
        return "link"
    return "cloud"


def completion_time(stages: StageTimes, n: int) -> float:
    if n < 1:
        raise ValidationError(f"chunk size must be >= 1, got {n}")
    return (n - 1) * stages.max_ms + stages.total_ms


def chunk_completion_time(profile: NetworkProfile, x: int, n: int) -> float:
    """Completion time (ms) for n back-to-back frames when cutting after layer x."""
    return completion_time(stage_times(profile, x), n)


def evaluate_all_cuts(profile: NetworkProfile, n: int) -> list[tuple[int, float]]:
    """Completion time at every possible cut, x = 0 (all cloud) .. m (all edge)."""
    return [(x, chunk_completion_time(profile, x, n)) for x in range(profile.m + 1)]


def choose_partition(profile: NetworkProfile, n: int) -> PartitionPlan:
    """Pick the cut minimizing chunk completion time.

    Ties (within EPSILON_MS) break toward fewer transmitted bytes, then the
    smaller cut index, so plans are deterministic.
    """
    best_x = 0
    best_t = chunk_completion_time(profile, 0, n)
    best_bytes = output_bytes_at(profile, 0)
    for x in range(1, profile.m + 1):
        t = chunk_completion_time(profile, x, n)
        if t < best_t - EPSILON_MS:
            better = True
        elif abs(t - best_t) <= EPSILON_MS:
            better = output_bytes_at(profile, x) < best_bytes
        else:
            better = False
        if better:
            best_x, best_t, best_bytes = x, t, output_bytes_at(profile, x)
    stages = stage_times(profile, best_x)
    return PartitionPlan(
        cut=best_x,
        chunk_size=n,
        predicted_ms=best_t,
        stages=stages,
        bottleneck=bottleneck_stage(stages),
    )


def effective_chunk_size(
    interarrival_ms: float, profile: NetworkProfile, nominal_n: int
) -> int:
    """Disable pipelining (n = 1) when frames arrive slower than one is processed.

    The threshold is the single-frame latency of the best cut at n = 1: if
    frames are that sparse every stage idles between frames and batching
    buys nothing.
    """
    if interarrival_ms < 0:
        raise ValidationError("interarrival_ms must be >= 0")
    if nominal_n < 1:
        raise ValidationError("nominal_n must be >= 1")
    single_frame = choose_partition(profile, 1).predicted_ms
    if interarrival_ms >= single_frame and single_frame > 0:
        return 1
    return nominal_n


def should_repartition(
    plan: PartitionPlan,
    observed: Sequence[StageTimes] | Iterable[StageTimes],
    policy: RepartitionPolicy = RepartitionPolicy(),
) -> bool:
    """True when any observed stage mean drifts past the policy's relative tolerance.

    A predicted stage of 0 ms counts as drifted by any positive observation.
    """
    samples = list(observed)
    if len(samples) < policy.min_samples:
        raise ValidationError(
            f"need at least {policy.min_samples} samples, got {len(samples)}"
        )
    pairs = [
        (plan.stages.edge_ms, fmean(s.edge_ms for s in samples)),
        (plan.stages.transmit_ms, fmean(s.transmit_ms for s in samples)),
        (plan.stages.cloud_ms, fmean(s.cloud_ms for s in samples)),
    ]
    for predicted, mean in pairs:
        if predicted == 0.0:
            if mean > EPSILON_MS:
                return True
        elif abs(mean - predicted) / predicted > policy.relative_tolerance:
            return True
    return False
