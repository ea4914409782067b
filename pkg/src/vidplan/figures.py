"""Matplotlib rendering for report outputs (file-based, no interactive backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fps_figure(rows: list[dict], path: Path) -> None:
    """Bar chart of predicted throughput per strategy."""
    names = [r["strategy"] for r in rows]
    fps = [r["predicted_fps"] or 0.0 for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(range(len(names)), fps, color="#4878cf")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("predicted frames/s (model)")
    ax.set_title("Predicted throughput by strategy")
    positive = [f for f in fps if f > 0]
    if positive and max(positive) / min(positive) > 100:
        ax.set_yscale("log")
    _save(fig, path)


def render_transfer_figure(rows: list[dict], path: Path) -> None:
    """Grouped bars of camera-to-edge vs edge-to-cloud data volume per strategy."""
    names = [r["strategy"] for r in rows]
    cam = [r["camera_to_edge_bytes"] / 1e9 for r in rows]
    cloud = [r["edge_to_cloud_bytes"] / 1e9 for r in rows]
    xs = range(len(names))
    width = 0.38
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar([x - width / 2 for x in xs], cam, width, label="camera to edge", color="#6acc65")
    ax.bar([x + width / 2 for x in xs], cloud, width, label="edge to cloud", color="#d65f5f")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("data transferred (GB)")
    ax.set_title("Data transfer by strategy")
    ax.legend()
    _save(fig, path)
