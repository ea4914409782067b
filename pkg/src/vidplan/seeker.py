"""I-frame seeking, chunking, sampling baselines, and transfer accounting.

Everything here works off frame metadata alone. The payload meter on the
stream stays untouched, which the tests pin down as an invariant: selecting
frames never requires decoding P-frame payloads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .dataset import FrameStream
from .errors import ValidationError


@dataclass(frozen=True)
class Chunk:
    chunk_id: int
    frames: tuple[int, ...]
    duration_ms: float

    @property
    def size(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class SeekStats:
    iframes_selected: int
    p_frame_payload_bytes_read: int
    frames_scanned: int


def seek_iframes(stream: FrameStream) -> tuple[list[int], SeekStats]:
    """Return all I-frame indices in order, reading metadata only."""
    before = stream.meter.p_frame_bytes_read
    indices = [rec.index for rec in stream.frames if rec.frame_type == "I"]
    stats = SeekStats(
        iframes_selected=len(indices),
        p_frame_payload_bytes_read=stream.meter.p_frame_bytes_read - before,
        frames_scanned=len(stream.frames),
    )
    return indices, stats


def chunkify(iframes: list[int], stream: FrameStream, duration_ms: float) -> list[Chunk]:
    """Group selected I-frames into consecutive fixed-duration windows by pts.

    Windows with no frame produce no chunk; chunk ids are window indices, so
    they can be non-consecutive over quiet stretches.
    """
    if duration_ms <= 0:
        raise ValidationError(f"chunk duration must be positive, got {duration_ms}")
    chunks: list[Chunk] = []
    current_id: int | None = None
    current: list[int] = []
    for idx in iframes:
        rec = stream.frames[idx]
        if rec.frame_type != "I":
            raise ValidationError(f"frame {idx} is not an I-frame")
        window = int(rec.pts_ms // duration_ms)
        if window != current_id:
            if current:
                chunks.append(Chunk(chunk_id=current_id, frames=tuple(current), duration_ms=duration_ms))
            current_id = window
            current = []
        current.append(idx)
    if current:
        chunks.append(Chunk(chunk_id=current_id, frames=tuple(current), duration_ms=duration_ms))
    return chunks


def uniform_sample(stream: FrameStream, target_count: int) -> list[int]:
    """Pick the first frame of target_count equal intervals (trailing partial dropped)."""
    total = len(stream.frames)
    if not 1 <= target_count <= total:
        raise ValidationError(
            f"target_count must be in [1, {total}], got {target_count}"
        )
    interval = total // target_count
    return [k * interval for k in range(target_count)]


def threshold_sample(stream: FrameStream, threshold: float) -> list[int]:
    """Frame 0 plus every frame whose precomputed similarity error exceeds the threshold."""
    selected = [0]
    for rec in stream.frames:
        if rec.similarity_error is None:
            raise ValidationError(f"frame {rec.index} has no similarity_error")
        if rec.index > 0 and rec.similarity_error > threshold:
            selected.append(rec.index)
    return selected


def transfer_report(
    stream: FrameStream, selected: list[int], model_input_pixels: int
) -> tuple[int, int]:
    """Bytes moved camera-to-edge (whole stream) and edge-to-cloud (selected, resized).

    Selected frames are modeled as resized to the inference model's input
    resolution before upload, shrinking the compressed size by the pixel-area
    ratio (never enlarging).
    """
    source_pixels = stream.source_pixels
    if source_pixels is None:
        raise ValidationError("stream has unknown source resolution")
    if model_input_pixels <= 0:
        raise ValidationError("model_input_pixels must be positive")
    total = len(stream.frames)
    camera_to_edge = stream.total_payload_bytes
    scale = min(1.0, model_input_pixels / source_pixels)
    edge_to_cloud = 0.0
    for idx in selected:
        if not 0 <= idx < total:
            raise ValidationError(f"selected index {idx} is not in the stream")
        edge_to_cloud += stream.frames[idx].payload_bytes * scale
    return camera_to_edge, int(round(edge_to_cloud))


def write_index_file(indices: list[int], path: str | Path) -> None:
    Path(path).write_text("".join(f"{i}\n" for i in indices), encoding="utf-8")


def transfer_report_json(camera_to_edge: int, edge_to_cloud: int) -> str:
    factor = math.inf if edge_to_cloud == 0 else camera_to_edge / edge_to_cloud
    return json.dumps(
        {
            "camera_to_edge_bytes": camera_to_edge,
            "edge_to_cloud_bytes": edge_to_cloud,
            "reduction_factor": factor if math.isfinite(factor) else None,
        },
        indent=2,
        sort_keys=True,
    )
