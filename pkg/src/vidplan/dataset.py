"""Frame-index and event-label data model.

A stream is described purely by per-frame metadata (type, timestamps, sizes,
motion scores); no pixel data is ever touched. Compressed-payload access is
funneled through a single metered accessor so that "never decodes P-frames"
is a checkable invariant rather than a benchmark claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError

FRAME_INDEX_HEADER = "index,frame_type,pts_ms,payload_bytes,motion_score,similarity_error"


@dataclass
class PayloadMeter:
    """Counter for simulated payload reads. Metadata access is never counted."""

    reads: int = 0
    bytes_read: int = 0
    p_frame_bytes_read: int = 0


@dataclass(frozen=True, slots=True)
class FrameRecord:
    index: int
    frame_type: str  # "I" or "P"
    pts_ms: float
    payload_bytes: int
    motion_score: float
    similarity_error: float | None = None


@dataclass
class FrameStream:
    """One camera's frame metadata, immutable after load (the meter aside)."""

    source_id: str
    fps: float
    frames: list[FrameRecord]
    width: int | None = None
    height: int | None = None
    meter: PayloadMeter = field(default_factory=PayloadMeter, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def source_pixels(self) -> int | None:
        if self.width is None or self.height is None:
            return None
        return self.width * self.height

    @property
    def total_payload_bytes(self) -> int:
        return sum(f.payload_bytes for f in self.frames)

    def read_payload(self, index: int) -> int:
        """Simulate decompressing one frame's payload.

        This is the single access point for payload data; every call is
        metered (P-frame bytes separately). Returns the bytes "read".
        """
        rec = self.frames[index]
        self.meter.reads += 1
        self.meter.bytes_read += rec.payload_bytes
        if rec.frame_type == "P":
            self.meter.p_frame_bytes_read += rec.payload_bytes
        return rec.payload_bytes


@dataclass(frozen=True)
class Event:
    start_frame: int
    labels: frozenset[str]


@dataclass(frozen=True)
class EventTimeline:
    """Ground-truth object-change events, each labeled with the classes visible."""

    events: tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.events)

    def starts(self) -> list[int]:
        return [e.start_frame for e in self.events]


def validate_stream(stream: FrameStream) -> None:
    """Check all stream invariants; raise ValidationError naming the first offender."""
    if stream.fps <= 0:
        raise ValidationError(f"fps must be positive, got {stream.fps}")
    if not stream.frames:
        raise ValidationError("stream has no frames")
    prev_pts = -1.0
    for pos, rec in enumerate(stream.frames):
        if rec.index != pos:
            raise ValidationError(
                f"frame {pos}: indices must be contiguous from 0, got index {rec.index}"
            )
        if rec.frame_type == "B":
            raise ValidationError(f"frame {pos}: B-frames are not supported")
        if rec.frame_type not in ("I", "P"):
            raise ValidationError(f"frame {pos}: unknown frame_type {rec.frame_type!r}")
        if rec.pts_ms < 0:
            raise ValidationError(f"frame {pos}: pts_ms must be non-negative")
        if rec.pts_ms < prev_pts:
            raise ValidationError(f"frame {pos}: pts_ms must be non-decreasing")
        if rec.payload_bytes < 0:
            raise ValidationError(f"frame {pos}: payload_bytes must be non-negative")
        if not 0.0 <= rec.motion_score <= 1.0:
            raise ValidationError(f"frame {pos}: motion_score must be in [0, 1]")
        if rec.similarity_error is not None and rec.similarity_error < 0:
            raise ValidationError(f"frame {pos}: similarity_error must be non-negative")
        prev_pts = rec.pts_ms
    if stream.frames[0].frame_type != "I":
        raise ValidationError("frame 0 must be I")


def validate_timeline(timeline: EventTimeline) -> None:
    if not timeline.events:
        raise ValidationError("timeline has no events")
    if timeline.events[0].start_frame != 0:
        raise ValidationError("first event must start at frame 0")
    prev = timeline.events[0]
    for ev in timeline.events[1:]:
        if ev.start_frame <= prev.start_frame:
            raise ValidationError(
                f"event at frame {ev.start_frame}: start frames must be strictly increasing"
            )
        if ev.labels == prev.labels:
            raise ValidationError(
                f"event at frame {ev.start_frame}: adjacent events must have different labels"
            )
        prev = ev


def _parse_metadata_line(line: str, meta: dict[str, str]) -> None:
    for token in line.lstrip("#").split():
        if "=" in token:
            key, _, value = token.partition("=")
            meta[key.strip()] = value.strip()


def load_frame_index(path: str | Path) -> FrameStream:
    """Load and validate a frame-index file.

    Format: optional leading ``# key=value ...`` metadata lines, a required
    column-header line, then one comma-separated record per line:
    ``index,frame_type,pts_ms,payload_bytes,motion_score[,similarity_error]``.
    """
    path = Path(path)
    meta: dict[str, str] = {}
    frames: list[FrameRecord] = []
    header_seen = False
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if not header_seen:
                    _parse_metadata_line(line, meta)
                continue
            if not header_seen:
                if line.replace(" ", "") != FRAME_INDEX_HEADER:
                    raise ParseError(
                        f"{path}:{lineno}: expected header line {FRAME_INDEX_HEADER!r}"
                    )
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) not in (5, 6):
                raise ParseError(f"{path}:{lineno}: expected 5 or 6 fields, got {len(parts)}")
            try:
                sim = None
                if len(parts) == 6 and parts[5] != "":
                    sim = float(parts[5])
                frames.append(
                    FrameRecord(
                        index=int(parts[0]),
                        frame_type=parts[1],
                        pts_ms=float(parts[2]),
                        payload_bytes=int(parts[3]),
                        motion_score=float(parts[4]),
                        similarity_error=sim,
                    )
                )
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    if not header_seen:
        raise ParseError(f"{path}: missing header line")
    try:
        fps = float(meta.get("fps", "30"))
        width = int(meta["width"]) if "width" in meta else None
        height = int(meta["height"]) if "height" in meta else None
    except ValueError as exc:
        raise ParseError(f"{path}: bad metadata value: {exc}") from exc
    stream = FrameStream(
        source_id=meta.get("source_id", path.stem),
        fps=fps,
        frames=frames,
        width=width,
        height=height,
    )
    validate_stream(stream)
    return stream


def write_frame_index(stream: FrameStream, path: str | Path) -> None:
    """Write a stream in the canonical frame-index format (round-trips with load)."""
    path = Path(path)
    meta = [f"source_id={stream.source_id}", f"fps={stream.fps!r}"]
    if stream.width is not None:
        meta.append(f"width={stream.width}")
    if stream.height is not None:
        meta.append(f"height={stream.height}")
    with path.open("w", encoding="utf-8") as fh:
        fh.write("# " + " ".join(meta) + "\n")
        fh.write(FRAME_INDEX_HEADER + "\n")
        for rec in stream.frames:
            sim = "" if rec.similarity_error is None else repr(rec.similarity_error)
            fh.write(
                f"{rec.index},{rec.frame_type},{rec.pts_ms!r},"
                f"{rec.payload_bytes},{rec.motion_score!r},{sim}\n"
            )


def load_events(path: str | Path) -> EventTimeline:
    """Load an event-label file: one ``start_frame,label1|label2|...`` row per line."""
    path = Path(path)
    events: list[Event] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("start_frame"):
                continue
            start_s, _, label_s = line.partition(",")
            try:
                start = int(start_s)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad start frame {start_s!r}") from exc
            labels = frozenset(p for p in label_s.split("|") if p)
            events.append(Event(start_frame=start, labels=labels))
    timeline = EventTimeline(events=tuple(events))
    validate_timeline(timeline)
    return timeline


def write_events(timeline: EventTimeline, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("start_frame,labels\n")
        for ev in timeline.events:
            fh.write(f"{ev.start_frame},{'|'.join(sorted(ev.labels))}\n")


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for the deterministic synthetic dataset generator.

    Motion scores sit in [0, noise_level) everywhere except event starts,
    which spike to spike_level, so a placement threshold anywhere between
    the two separates events perfectly.
    """

    frame_count: int
    event_count: int
    fps: float = 30.0
    noise_level: float = 0.1
    spike_level: float = 0.9
    iframe_period: int | None = None
    i_frame_bytes: int = 90_000
    p_frame_bytes: int = 10_000
    width: int = 1280
    height: int = 720
    object_label: str = "car"
    sim_error_scale: float = 100.0


def synth_dataset(spec: SynthSpec, seed: int) -> tuple[FrameStream, EventTimeline]:
    """Generate a matching (FrameStream, EventTimeline) pair, deterministic per seed.

    I-frames are placed at frame 0, at every event start, and (optionally)
    every ``iframe_period`` frames, mimicking a camera whose encoder was
    already tuned to the event timeline.
    """
    n = spec.frame_count
    if n < 1:
        raise ValidationError("frame_count must be >= 1")
    if spec.event_count < 1:
        raise ValidationError("event_count must be >= 1")
    spacing = n // spec.event_count
    if spacing < 1:
        raise ValidationError("more events than frames requested")
    if not 0 <= spec.noise_level < spec.spike_level <= 1.0:
        raise ValidationError("need 0 <= noise_level < spike_level <= 1")
    if spec.iframe_period is not None and spec.iframe_period < 1:
        raise ValidationError("iframe_period must be >= 1")

    rng = np.random.default_rng(seed)
    starts = [i * spacing for i in range(spec.event_count)]

    motion = rng.uniform(0.0, spec.noise_level, size=n)
    motion[0] = 0.0
    for s in starts[1:]:
        motion[s] = spec.spike_level

    is_iframe = np.zeros(n, dtype=bool)
    is_iframe[0] = True
    is_iframe[starts] = True
    if spec.iframe_period is not None:
        is_iframe[:: spec.iframe_period] = True

    jitter = rng.uniform(0.9, 1.1, size=n)
    pts_step = 1000.0 / spec.fps

    # Materialize plain-python columns up front; row-by-row numpy scalar
    # conversion dominates runtime at millions of frames.
    base = np.where(is_iframe, spec.i_frame_bytes, spec.p_frame_bytes)
    payload_col = np.rint(base * jitter).astype(np.int64).tolist()
    pts_col = (np.arange(n) * pts_step).tolist()
    motion_col = motion.tolist()
    sim_col = (motion * spec.sim_error_scale).tolist()
    type_col = np.where(is_iframe, "I", "P").tolist()

    frames = [
        FrameRecord(
            index=j,
            frame_type=type_col[j],
            pts_ms=pts_col[j],
            payload_bytes=payload_col[j],
            motion_score=motion_col[j],
            similarity_error=sim_col[j],
        )
        for j in range(n)
    ]
    stream = FrameStream(
        source_id=f"synth-{seed}",
        fps=spec.fps,
        frames=frames,
        width=spec.width,
        height=spec.height,
    )

    events = []
    for i, s in enumerate(starts):
        labels = frozenset() if i % 2 == 0 else frozenset({spec.object_label})
        events.append(Event(start_frame=s, labels=labels))
    timeline = EventTimeline(events=tuple(events))

    validate_stream(stream)
    validate_timeline(timeline)
    return stream, timeline


def retype_frames(stream: FrameStream, iframe_indices: set[int]) -> FrameStream:
    """Return a copy of the stream with frame types set from an I-frame index set."""
    frames = [
        replace(rec, frame_type="I" if rec.index in iframe_indices else "P")
        for rec in stream.frames
    ]
    out = FrameStream(
        source_id=stream.source_id,
        fps=stream.fps,
        frames=frames,
        width=stream.width,
        height=stream.height,
    )
    validate_stream(out)
    return out
