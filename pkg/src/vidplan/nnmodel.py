"""Layer-wise execution profiles for a linear-chain neural network.

A profile records, per layer, how long it runs on the edge and on the cloud
and how many bytes it outputs, plus the raw input-frame size and the
edge-to-cloud bandwidth. Cutting after layer x yields three stage times:
edge prefix, link transmission of layer x's output, cloud suffix. Cut 0
ships the raw frame (everything on the cloud); cut m still ships the final
result tensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ParseError, ValidationError

PROFILE_HEADER = "layer_id,exec_edge_ms,exec_cloud_ms,output_bytes"


@dataclass(frozen=True)
class LayerProfile:
    layer_id: int
    exec_edge_ms: float
    exec_cloud_ms: float
    output_bytes: int

    def __post_init__(self) -> None:
        for name in ("exec_edge_ms", "exec_cloud_ms", "output_bytes"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"layer {self.layer_id}: {name} must be finite and >= 0")


@dataclass(frozen=True)
class NetworkProfile:
    layers: tuple[LayerProfile, ...]
    input_bytes: int
    bandwidth_bytes_per_s: float

    def __post_init__(self) -> None:
        if not self.layers:
            raise ValidationError("profile needs at least one layer")
        if self.bandwidth_bytes_per_s <= 0:
            raise ValidationError("bandwidth must be positive")
        if self.input_bytes < 0:
            raise ValidationError("input_bytes must be non-negative")
        for pos, layer in enumerate(self.layers, start=1):
            if layer.layer_id != pos:
                raise ValidationError(
                    f"layer ids must run 1..m in order, got {layer.layer_id} at position {pos}"
                )

    @property
    def m(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class StageTimes:
    """Per-frame stage times (ms) of a partitioned pipeline: edge, link, cloud."""

    edge_ms: float
    transmit_ms: float
    cloud_ms: float

    @property
    def total_ms(self) -> float:
        return self.edge_ms + self.transmit_ms + self.cloud_ms

    @property
    def max_ms(self) -> float:
        return max(self.edge_ms, self.transmit_ms, self.cloud_ms)


def _check_cut(profile: NetworkProfile, x: int) -> None:
    if not 0 <= x <= profile.m:
        raise ValidationError(f"cut must be in [0, {profile.m}], got {x}")


def edge_prefix_time(profile: NetworkProfile, x: int) -> float:
    """Time to run layers 1..x on the edge (0 for x = 0)."""
    _check_cut(profile, x)
    return sum(layer.exec_edge_ms for layer in profile.layers[:x])


def cloud_suffix_time(profile: NetworkProfile, x: int) -> float:
    """Time to run layers x+1..m on the cloud (0 for x = m)."""
    _check_cut(profile, x)
    return sum(layer.exec_cloud_ms for layer in profile.layers[x:])


def output_bytes_at(profile: NetworkProfile, x: int) -> int:
    """Bytes crossing the link when cutting after layer x (raw frame at x = 0)."""
    _check_cut(profile, x)
    return profile.input_bytes if x == 0 else profile.layers[x - 1].output_bytes


def transmit_time(profile: NetworkProfile, x: int) -> float:
    """Milliseconds to ship layer x's output over the edge-to-cloud link."""
    return output_bytes_at(profile, x) / profile.bandwidth_bytes_per_s * 1000.0


def stage_times(profile: NetworkProfile, x: int) -> StageTimes:
    return StageTimes(
        edge_ms=edge_prefix_time(profile, x),
        transmit_ms=transmit_time(profile, x),
        cloud_ms=cloud_suffix_time(profile, x),
    )


def load_profile(path: str | Path) -> NetworkProfile:
    """Load a profile file.

    Format: ``input_bytes=...`` and ``bandwidth_bytes_per_s=...`` header
    lines, then one ``layer_id,exec_edge_ms,exec_cloud_ms,output_bytes``
    row per layer (an optional column-header line is skipped).
    """
    path = Path(path)
    meta: dict[str, str] = {}
    layers: list[LayerProfile] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line and "," not in line:
                key, _, value = line.partition("=")
                meta[key.strip()] = value.strip()
                continue
            if line.replace(" ", "") == PROFILE_HEADER:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 fields, got {len(parts)}")
            try:
                layers.append(
                    LayerProfile(
                        layer_id=int(parts[0]),
                        exec_edge_ms=float(parts[1]),
                        exec_cloud_ms=float(parts[2]),
                        output_bytes=int(parts[3]),
                    )
                )
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    for key in ("input_bytes", "bandwidth_bytes_per_s"):
        if key not in meta:
            raise ParseError(f"{path}: missing {key}= header line")
    try:
        input_bytes = int(meta["input_bytes"])
        bandwidth = float(meta["bandwidth_bytes_per_s"])
    except ValueError as exc:
        raise ParseError(f"{path}: bad header value: {exc}") from exc
    return NetworkProfile(
        layers=tuple(layers), input_bytes=input_bytes, bandwidth_bytes_per_s=bandwidth
    )


def write_profile(profile: NetworkProfile, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"input_bytes={profile.input_bytes}\n")
        fh.write(f"bandwidth_bytes_per_s={profile.bandwidth_bytes_per_s!r}\n")
        fh.write(PROFILE_HEADER + "\n")
        for layer in profile.layers:
            fh.write(
                f"{layer.layer_id},{layer.exec_edge_ms!r},"
                f"{layer.exec_cloud_ms!r},{layer.output_bytes}\n"
            )


def update_profile(
    profile: NetworkProfile,
    layer_id: int,
    *,
    observed_edge_ms: float | None = None,
    observed_cloud_ms: float | None = None,
    alpha: float = 0.3,
) -> NetworkProfile:
    """Fold an online timing observation into the profile via EWMA.

    new = (1 - alpha) * stored + alpha * observed. Returns a new profile;
    the input is never mutated.
    """
    if observed_edge_ms is None and observed_cloud_ms is None:
        raise ValidationError("provide observed_edge_ms and/or observed_cloud_ms")
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"alpha must be in (0, 1], got {alpha}")
    if not 1 <= layer_id <= profile.m:
        raise ValidationError(f"unknown layer {layer_id}")
    layer = profile.layers[layer_id - 1]
    changes: dict[str, float] = {}
    if observed_edge_ms is not None:
        changes["exec_edge_ms"] = (1 - alpha) * layer.exec_edge_ms + alpha * observed_edge_ms
    if observed_cloud_ms is not None:
        changes["exec_cloud_ms"] = (1 - alpha) * layer.exec_cloud_ms + alpha * observed_cloud_ms
    new_layers = list(profile.layers)
    new_layers[layer_id - 1] = replace(layer, **changes)
    return replace(profile, layers=tuple(new_layers))
