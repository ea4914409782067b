"""Command-line front end.

Subcommands: synth, tune, seek, partition, simulate, report. Every flag can
also come from a flat key=value config file (--config); flags win. Outputs
land under --out as CSV/JSON named per command; the report additionally
renders comparison figures.

Exit codes: 0 success, 1 input error, 2 data-model invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import dataset, encodersim, nnmodel, partition, pipesim, seeker
from .errors import ParseError, ValidationError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2

DEFAULT_GOP_GRID = "100,250,500,1000,5000"
DEFAULT_SCENECUT_GRID = "20,40,100,200,250"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes", "on")


def _load_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    p = Path(path)
    if not p.exists():
        raise UsageError(f"config file not found: {path}")
    for raw in p.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"bad config line (expected key=value): {line!r}")
        key, _, value = line.partition("=")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _get(args, cfg: dict[str, str], name: str, conv=str, default=None, required=False):
    value = getattr(args, name, None)
    if value is not None and value is not False:
        return value
    if name in cfg:
        return conv(cfg[name])
    if required:
        raise UsageError(f"missing required option --{name.replace('_', '-')}")
    return default


def _out_dir(args, cfg) -> Path:
    out = Path(_get(args, cfg, "out", conv=str, default="out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(payload, path: Path) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# --- synth ---------------------------------------------------------------


def cmd_synth(args, cfg) -> int:
    out = _out_dir(args, cfg)
    spec = dataset.SynthSpec(
        frame_count=_get(args, cfg, "count", conv=int, required=True),
        event_count=_get(args, cfg, "num_events", conv=int, default=3),
        fps=_get(args, cfg, "fps", conv=float, default=30.0),
        noise_level=_get(args, cfg, "noise", conv=float, default=0.1),
        iframe_period=_get(args, cfg, "iframe_period", conv=int, default=None),
    )
    seed = _get(args, cfg, "seed", conv=int, default=0)
    stream, timeline = dataset.synth_dataset(spec, seed=seed)
    dataset.write_frame_index(stream, out / "frames.csv")
    dataset.write_events(timeline, out / "events.csv")
    iframes = sum(1 for f in stream.frames if f.frame_type == "I")
    print(
        f"wrote {len(stream)} frames ({iframes} I-frames) and "
        f"{len(timeline)} events to {out}"
    )
    return EXIT_OK


# --- tune ----------------------------------------------------------------


def cmd_tune(args, cfg) -> int:
    out = _out_dir(args, cfg)
    frames_path = _get(args, cfg, "frames", required=True)
    events_path = _get(args, cfg, "events")
    if events_path is None:
        raise UsageError("tune requires --events (labelled ground truth)")
    gop_grid = _get(args, cfg, "gop_grid", conv=_parse_int_list,
                    default=_parse_int_list(DEFAULT_GOP_GRID))
    scenecut_grid = _get(args, cfg, "scenecut_grid", conv=_parse_float_list,
                         default=_parse_float_list(DEFAULT_SCENECUT_GRID))
    stream = dataset.load_frame_index(frames_path)
    events = dataset.load_events(events_path)
    best, results = encodersim.tune(stream, events, gop_grid, scenecut_grid)
    encodersim.write_results_csv(results, out / "tune_results.csv")
    _write_json(encodersim.lookup_entry(stream.source_id, best), out / "best_config.json")
    print(
        f"best: gop={best.config.gop_size} scenecut={best.config.scenecut:g} "
        f"accuracy={best.accuracy:.4f} filter_rate={best.filter_rate:.4f} f1={best.f1:.4f}"
    )
    return EXIT_OK


# --- seek ----------------------------------------------------------------


def cmd_seek(args, cfg) -> int:
    out = _out_dir(args, cfg)
    frames_path = _get(args, cfg, "frames", required=True)
    chunk_ms = _get(args, cfg, "chunk_ms", conv=float, default=1000.0)
    stream = dataset.load_frame_index(frames_path)
    indices, stats = seeker.seek_iframes(stream)
    chunks = seeker.chunkify(indices, stream, chunk_ms)
    seeker.write_index_file(indices, out / "iframes.txt")
    with (out / "chunks.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["chunk_id", "size", "first_pts_ms", "frame_indices"])
        for c in chunks:
            writer.writerow(
                [c.chunk_id, c.size, stream.frames[c.frames[0]].pts_ms,
                 "|".join(map(str, c.frames))]
            )
    _write_json(
        {
            "iframes_selected": stats.iframes_selected,
            "frames_scanned": stats.frames_scanned,
            "p_frame_payload_bytes_read": stats.p_frame_payload_bytes_read,
            "selected_fraction": stats.iframes_selected / stats.frames_scanned,
            "chunks": len(chunks),
        },
        out / "seek_stats.json",
    )
    print(
        f"selected {stats.iframes_selected}/{stats.frames_scanned} frames "
        f"into {len(chunks)} chunks (P-frame payload bytes read: "
        f"{stats.p_frame_payload_bytes_read})"
    )
    return EXIT_OK


# --- partition -----------------------------------------------------------


def cmd_partition(args, cfg) -> int:
    out = _out_dir(args, cfg)
    profile_path = _get(args, cfg, "profile", required=True)
    chunk_n = _get(args, cfg, "chunk_n", conv=int, default=30)
    interarrival = _get(args, cfg, "interarrival_ms", conv=float, default=0.0)
    profile = nnmodel.load_profile(profile_path)
    n_eff = partition.effective_chunk_size(interarrival, profile, chunk_n)
    plan = partition.choose_partition(profile, n_eff)
    with (out / "cuts.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cut", "t_chunk_ms"])
        for x, t in partition.evaluate_all_cuts(profile, n_eff):
            writer.writerow([x, t])
    (out / "plan.json").write_text(plan.to_json() + "\n", encoding="utf-8")
    print(
        f"cut after layer {plan.cut} of {profile.m} (n={n_eff}): "
        f"predicted {plan.predicted_ms:.3f} ms, bottleneck {plan.bottleneck}"
    )
    return EXIT_OK


# --- simulate ------------------------------------------------------------


def cmd_simulate(args, cfg) -> int:
    out = _out_dir(args, cfg)
    profile_path = _get(args, cfg, "profile", required=True)
    chunk_n = _get(args, cfg, "chunk_n", conv=int, default=30)
    interarrival = _get(args, cfg, "interarrival_ms", conv=float, default=0.0)
    cut = _get(args, cfg, "cut", conv=int, default=None)
    profile = nnmodel.load_profile(profile_path)
    if cut is None:
        n_eff = partition.effective_chunk_size(interarrival, profile, chunk_n)
        cut = partition.choose_partition(profile, n_eff).cut
    stages = nnmodel.stage_times(profile, cut)
    spec = pipesim.PipelineSpec.from_stages(stages)
    makespan, latencies = pipesim.simulate_stream(spec, interarrival, chunk_n)
    _, trace = pipesim.simulate(spec, [j * interarrival for j in range(chunk_n)])
    pipesim.write_trace_csv(trace, out / "trace.csv")
    _write_json(
        {
            "cut": cut,
            "n": chunk_n,
            "interarrival_ms": interarrival,
            "makespan_ms": makespan,
            "latency_ms": {
                "min": min(latencies),
                "mean": sum(latencies) / len(latencies),
                "max": max(latencies),
            },
            "stages": {
                "edge_ms": stages.edge_ms,
                "transmit_ms": stages.transmit_ms,
                "cloud_ms": stages.cloud_ms,
            },
        },
        out / "sim_summary.json",
    )
    print(
        f"simulated {chunk_n} frames at cut {cut}: makespan {makespan:.3f} ms, "
        f"mean latency {sum(latencies) / len(latencies):.3f} ms"
    )
    return EXIT_OK


# --- report --------------------------------------------------------------


def _predicted_fps(n_total: int, makespan_ms: float) -> float | None:
    if makespan_ms <= 0:
        return None
    return n_total / (makespan_ms / 1000.0)


def _auto_threshold(stream: dataset.FrameStream, target: int) -> float:
    # Aim the similarity baseline at the same sample count as the seeker.
    errs = sorted((rec.similarity_error for rec in stream.frames), reverse=True)
    target = min(max(target, 1), len(errs))
    return errs[target - 1]


def build_report_rows(
    stream: dataset.FrameStream,
    profile: nnmodel.NetworkProfile,
    chunk_n: int | None,
    interarrival_ms: float,
    model_pixels: int,
    sim_threshold: float | None,
) -> list[dict]:
    """Per-strategy comparison rows: frames selected, predicted fps, transfer bytes."""
    n_total = len(stream)
    iframes, _ = seeker.seek_iframes(stream)
    total_bytes = stream.total_payload_bytes

    def makespan_for(stages: nnmodel.StageTimes, count: int) -> float:
        spec = pipesim.PipelineSpec.from_stages(stages)
        makespan, _ = pipesim.simulate_stream(spec, interarrival_ms, count)
        return makespan

    def row(strategy, selected, stages, cut, edge_to_cloud=None, extra_ms=0.0):
        if edge_to_cloud is None:
            _, edge_to_cloud = seeker.transfer_report(stream, selected, model_pixels)
        makespan = makespan_for(stages, len(selected)) + extra_ms
        return {
            "strategy": strategy,
            "frames_selected": len(selected),
            "predicted_fps": _predicted_fps(n_total, makespan),
            "camera_to_edge_bytes": total_bytes,
            "edge_to_cloud_bytes": edge_to_cloud,
            "partition_cut": cut,
            "makespan_ms": makespan,
        }

    rows = []
    nominal_n = chunk_n if chunk_n is not None else max(len(iframes), 1)
    n_eff = partition.effective_chunk_size(interarrival_ms, profile, nominal_n)
    plan = partition.choose_partition(profile, n_eff)
    rows.append(row("iframe-edge+split-NN", iframes, plan.stages, plan.cut))
    rows.append(row("iframe-edge+cloud-NN", iframes, nnmodel.stage_times(profile, 0), 0))
    rows.append(
        row("iframe-edge+edge-NN", iframes,
            nnmodel.stage_times(profile, profile.m), profile.m)
    )
    # Full stream shipped to the cloud first; seeking and inference happen there.
    full_tx_ms = total_bytes / profile.bandwidth_bytes_per_s * 1000.0
    cloud_only = nnmodel.StageTimes(
        edge_ms=0.0, transmit_ms=0.0, cloud_ms=nnmodel.cloud_suffix_time(profile, 0)
    )
    rows.append(
        row("iframe-cloud+cloud-NN", iframes, cloud_only, 0,
            edge_to_cloud=total_bytes, extra_ms=full_tx_ms)
    )
    uniform = seeker.uniform_sample(stream, len(iframes))
    rows.append(row("uniform", uniform, nnmodel.stage_times(profile, 0), 0))
    if all(rec.similarity_error is not None for rec in stream.frames):
        thr = sim_threshold if sim_threshold is not None else _auto_threshold(stream, len(iframes))
        selected = seeker.threshold_sample(stream, thr)
        rows.append(row("threshold", selected, nnmodel.stage_times(profile, 0), 0))
    else:
        print(
            "warning: stream has no similarity_error data, omitting threshold row",
            file=sys.stderr,
        )
    return rows


def cmd_report(args, cfg) -> int:
    out = _out_dir(args, cfg)
    frames_path = _get(args, cfg, "frames", required=True)
    profile_path = _get(args, cfg, "profile", required=True)
    chunk_n = _get(args, cfg, "chunk_n", conv=int, default=None)
    interarrival = _get(args, cfg, "interarrival_ms", conv=float, default=0.0)
    model_pixels = _get(args, cfg, "model_pixels", conv=int, default=300 * 300)
    sim_threshold = _get(args, cfg, "sim_threshold", conv=float, default=None)
    no_figures = _get(args, cfg, "no_figures", conv=_parse_bool, default=False)

    stream = dataset.load_frame_index(frames_path)
    profile = nnmodel.load_profile(profile_path)
    rows = build_report_rows(stream, profile, chunk_n, interarrival, model_pixels, sim_threshold)

    with (out / "report.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["strategy", "frames_selected", "predicted_fps",
             "camera_to_edge_bytes", "edge_to_cloud_bytes", "partition_cut"]
        )
        for r in rows:
            writer.writerow(
                [r["strategy"], r["frames_selected"], r["predicted_fps"],
                 r["camera_to_edge_bytes"], r["edge_to_cloud_bytes"], r["partition_cut"]]
            )
    _write_json(
        {
            "rows": rows,
            "n_total_frames": len(stream),
            "interarrival_ms": interarrival,
            "model_pixels": model_pixels,
            "note": "throughput values are pipeline-model predictions, not wall-clock measurements",
        },
        out / "report.json",
    )
    if not no_figures:
        from . import figures  # deferred: pulls in matplotlib

        figures.render_fps_figure(rows, out / "fps_by_strategy.png")
        figures.render_transfer_figure(rows, out / "data_transfer_by_strategy.png")

    for r in rows:
        fps = r["predicted_fps"]
        fps_s = f"{fps:12.1f}" if fps is not None else "         n/a"
        print(
            f"{r['strategy']:<24} selected={r['frames_selected']:>8} "
            f"fps={fps_s} edge_to_cloud={r['edge_to_cloud_bytes'] / 1e6:10.2f} MB "
            f"cut={r['partition_cut']}"
        )
    return EXIT_OK


# --- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value config file; flags win")
    common.add_argument("--out", help="output directory (default: out)")

    parser = _Parser(prog="vidplan", description="keyframe-aware edge/cloud analytics planner")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    p.add_argument("--count", type=int, help="number of frames")
    p.add_argument("--num-events", dest="num_events", type=int, help="number of events")
    p.add_argument("--fps", type=float, help="capture rate (default 30)")
    p.add_argument("--noise", type=float, help="motion noise level (default 0.1)")
    p.add_argument("--iframe-period", dest="iframe_period", type=int,
                   help="also mark every k-th frame as I")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("tune", parents=[common], help="grid-search encoder parameters")
    p.add_argument("--frames", help="frame-index file")
    p.add_argument("--events", help="event-label file")
    p.add_argument("--gop-grid", dest="gop_grid", type=_parse_int_list,
                   help=f"comma-separated GOP sizes (default {DEFAULT_GOP_GRID})")
    p.add_argument("--scenecut-grid", dest="scenecut_grid", type=_parse_float_list,
                   help=f"comma-separated scenecut values (default {DEFAULT_SCENECUT_GRID})")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("seek", parents=[common], help="extract and chunk I-frames")
    p.add_argument("--frames", help="frame-index file")
    p.add_argument("--chunk-ms", dest="chunk_ms", type=float,
                   help="chunk duration in ms (default 1000)")
    p.set_defaults(func=cmd_seek)

    p = sub.add_parser("partition", parents=[common], help="choose the edge/cloud cut")
    p.add_argument("--profile", help="layer profile file")
    p.add_argument("--chunk-n", dest="chunk_n", type=int, help="chunk size n (default 30)")
    p.add_argument("--interarrival-ms", dest="interarrival_ms", type=float,
                   help="frame interarrival time (default 0 = back-to-back)")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("simulate", parents=[common], help="simulate the pipeline")
    p.add_argument("--profile", help="layer profile file")
    p.add_argument("--cut", type=int, help="cut to simulate (default: planner's choice)")
    p.add_argument("--chunk-n", dest="chunk_n", type=int, help="frames to simulate (default 30)")
    p.add_argument("--interarrival-ms", dest="interarrival_ms", type=float,
                   help="frame interarrival time (default 0)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", parents=[common], help="compare selection strategies")
    p.add_argument("--frames", help="frame-index file")
    p.add_argument("--profile", help="layer profile file")
    p.add_argument("--chunk-n", dest="chunk_n", type=int,
                   help="nominal chunk size (default: I-frame count)")
    p.add_argument("--interarrival-ms", dest="interarrival_ms", type=float,
                   help="frame interarrival time (default 0)")
    p.add_argument("--model-pixels", dest="model_pixels", type=int,
                   help="inference input pixels (default 90000 = 300x300)")
    p.add_argument("--sim-threshold", dest="sim_threshold", type=float,
                   help="similarity threshold for the threshold baseline (default: auto)")
    p.add_argument("--no-figures", dest="no_figures", action="store_true",
                   help="skip figure rendering")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load_config(args.config) if getattr(args, "config", None) else {}
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ParseError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
