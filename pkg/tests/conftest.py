"""Shared builders for streams and layer profiles."""

from __future__ import annotations

import random

from vidplan.dataset import FrameRecord, FrameStream
from vidplan.nnmodel import LayerProfile, NetworkProfile


def stream_from_motion(
    motions, fps: float = 30.0, payload: int = 1000, width: int | None = 1280,
    height: int | None = 720, similarity=None,
) -> FrameStream:
    """Build a minimal stream from a motion trace; frame 0 is I, the rest P."""
    step = 1000.0 / fps
    frames = []
    for j, m in enumerate(motions):
        sim = similarity[j] if similarity is not None else None
        frames.append(
            FrameRecord(
                index=j,
                frame_type="I" if j == 0 else "P",
                pts_ms=j * step,
                payload_bytes=payload,
                motion_score=m,
                similarity_error=sim,
            )
        )
    return FrameStream(source_id="test", fps=fps, frames=frames, width=width, height=height)


def make_profile(
    edge, cloud, sizes, input_bytes: int = 60_000, bandwidth: float = 1_000_000.0
) -> NetworkProfile:
    layers = tuple(
        LayerProfile(layer_id=i + 1, exec_edge_ms=e, exec_cloud_ms=c, output_bytes=s)
        for i, (e, c, s) in enumerate(zip(edge, cloud, sizes))
    )
    return NetworkProfile(layers=layers, input_bytes=input_bytes, bandwidth_bytes_per_s=bandwidth)


def figure2_profile() -> NetworkProfile:
    """3-layer instance: cloud-only single-frame latency 300 ms, cut-1 edge stage 160 ms.

    With bandwidth 1 MB/s a payload of 1000 bytes costs 1 ms, so the cut
    transmit times are 60/40/40/10 ms for x = 0..3.
    """
    return make_profile(
        edge=[160.0, 200.0, 120.0],
        cloud=[80.0, 100.0, 60.0],
        sizes=[40_000, 40_000, 10_000],
        input_bytes=60_000,
        bandwidth=1_000_000.0,
    )


def random_profile(rng: random.Random, max_m: int = 20) -> NetworkProfile:
    m = rng.randint(1, max_m)
    return make_profile(
        edge=[rng.uniform(0, 1000) for _ in range(m)],
        cloud=[rng.uniform(0, 1000) for _ in range(m)],
        sizes=[rng.randint(0, 10_000_000) for _ in range(m)],
        input_bytes=rng.randint(0, 10_000_000),
        bandwidth=rng.uniform(1_000, 10_000_000),
    )


def brute_force_cut(profile: NetworkProfile, n: int) -> int:
    """Independent argmin over pipeline-simulator makespans with the tie rule
    (fewest transmitted bytes, then smallest cut index)."""
    from vidplan.nnmodel import output_bytes_at, stage_times
    from vidplan.partition import EPSILON_MS
    from vidplan.pipesim import PipelineSpec, simulate

    makespans = []
    for x in range(profile.m + 1):
        spec = PipelineSpec.from_stages(stage_times(profile, x))
        makespan, _ = simulate(spec, [0.0] * n)
        makespans.append((x, makespan))
    best = min(t for _, t in makespans)
    candidates = [x for x, t in makespans if abs(t - best) <= EPSILON_MS]
    return min(candidates, key=lambda x: (output_bytes_at(profile, x), x))
