"""Keyframe-placement simulation and offline parameter tuning.

Models how a scenecut/GOP-parameterized encoder would place I-frames over a
motion trace, scores placements against a ground-truth event timeline, and
grid-searches the configuration with the best accuracy/filtering tradeoff.
"""

from __future__ import annotations

import csv
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path

from .dataset import EventTimeline, FrameStream, retype_frames
from .errors import ValidationError

SCENECUT_MAX = 400.0


@dataclass(frozen=True)
class EncoderConfig:
    gop_size: int
    scenecut: float

    def __post_init__(self) -> None:
        if self.gop_size < 1:
            raise ValidationError(f"gop_size must be >= 1, got {self.gop_size}")
        if not 0.0 <= self.scenecut <= SCENECUT_MAX:
            raise ValidationError(f"scenecut must be in [0, {SCENECUT_MAX:g}], got {self.scenecut}")

    @property
    def motion_threshold(self) -> float:
        """Motion score at or above which a scenecut fires (higher scenecut = lower bar)."""
        return 1.0 - self.scenecut / SCENECUT_MAX


@dataclass(frozen=True)
class Placement:
    iframe_indices: tuple[int, ...]
    total_frames: int


@dataclass(frozen=True)
class TuneResult:
    config: EncoderConfig
    accuracy: float
    filter_rate: float
    f1: float


def simulate_placement(stream: FrameStream, config: EncoderConfig) -> Placement:
    """Simulate where the encoder would emit I-frames for this stream.

    Frame 0 is always an I-frame. A later frame j becomes one when its
    motion score reaches the scenecut threshold or when gop_size frames
    have passed since the last I-frame. This is an explicit simulation
    model, not a re-implementation of any real encoder's scenecut logic.
    """
    if not stream.frames:
        raise ValidationError("cannot place I-frames on an empty stream")
    threshold = config.motion_threshold
    gop = config.gop_size
    iframes = [0]
    last = 0
    for rec in stream.frames[1:]:
        j = rec.index
        if rec.motion_score >= threshold or (j - last) >= gop:
            iframes.append(j)
            last = j
    return Placement(iframe_indices=tuple(iframes), total_frames=len(stream.frames))


def apply_placement(stream: FrameStream, placement: Placement) -> FrameStream:
    """Re-type the stream's frames to match a placement (the simulated re-encode)."""
    return retype_frames(stream, set(placement.iframe_indices))


def event_accuracy(placement: Placement, events: EventTimeline) -> float:
    """Fraction of frames that would carry correct labels under forward propagation.

    Labels propagate from each I-frame to the frames after it, so within an
    event every frame before the event's first I-frame inherits stale labels
    and counts as mislabeled. An event with no I-frame at all is mislabeled
    in full.
    """
    total = placement.total_frames
    starts = events.starts()
    if starts and starts[-1] >= total:
        raise ValidationError(
            f"event start {starts[-1]} is outside the placement's {total} frames"
        )
    iframes = placement.iframe_indices
    mislabeled = 0
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else total
        pos = bisect_left(iframes, start)
        if pos < len(iframes) and iframes[pos] < end:
            mislabeled += iframes[pos] - start
        else:
            mislabeled += end - start
    return 1.0 - mislabeled / total


def filter_rate(placement: Placement) -> float:
    """Fraction of frames filtered out (not selected for inference)."""
    if placement.total_frames < 1:
        raise ValidationError("placement must cover at least one frame")
    return (placement.total_frames - len(placement.iframe_indices)) / placement.total_frames


def f1_score(accuracy: float, filtering: float) -> float:
    """Harmonic mean of accuracy and filtering rate; 0 if either is 0."""
    if not 0.0 <= accuracy <= 1.0 or not 0.0 <= filtering <= 1.0:
        raise ValidationError("f1_score inputs must be in [0, 1]")
    if accuracy == 0.0 or filtering == 0.0:
        return 0.0
    return 2.0 * accuracy * filtering / (accuracy + filtering)


def evaluate_config(
    stream: FrameStream, events: EventTimeline, config: EncoderConfig
) -> TuneResult:
    placement = simulate_placement(stream, config)
    acc = event_accuracy(placement, events)
    fr = filter_rate(placement)
    return TuneResult(config=config, accuracy=acc, filter_rate=fr, f1=f1_score(acc, fr))


def tune(
    stream: FrameStream,
    events: EventTimeline,
    gop_grid: list[int],
    scenecut_grid: list[float],
) -> tuple[TuneResult, list[TuneResult]]:
    """Evaluate every (gop, scenecut) grid point and pick the best by F1.

    Ties break toward higher filter_rate, then smaller scenecut, then larger
    gop_size, so the result is deterministic for any grid order.
    """
    if not gop_grid or not scenecut_grid:
        raise ValidationError("tuning grids must be non-empty")
    results = [
        evaluate_config(stream, events, EncoderConfig(gop_size=g, scenecut=s))
        for g in gop_grid
        for s in scenecut_grid
    ]
    best = max(
        results,
        key=lambda r: (r.f1, r.filter_rate, -r.config.scenecut, r.config.gop_size),
    )
    return best, results


def write_results_csv(results: list[TuneResult], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gop", "scenecut", "accuracy", "filter_rate", "f1"])
        for r in results:
            writer.writerow(
                [r.config.gop_size, r.config.scenecut, r.accuracy, r.filter_rate, r.f1]
            )


def lookup_entry(source_id: str, best: TuneResult) -> dict:
    """Lookup-table entry mapping a camera to its tuned encoder parameters."""
    return {
        source_id: {
            "gop_size": best.config.gop_size,
            "scenecut": best.config.scenecut,
            "accuracy": best.accuracy,
            "filter_rate": best.filter_rate,
            "f1": best.f1,
        }
    }
