import json

import pytest

from conftest import figure2_profile
from vidplan import nnmodel, pipesim
from vidplan.cli import main

FRAMES_HEADER = "index,frame_type,pts_ms,payload_bytes,motion_score,similarity_error\n"


@pytest.fixture
def workspace(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    assert main([
        "synth", "--count", "900", "--num-events", "3", "--seed", "7",
        "--out", str(data),
    ]) == 0
    nnmodel.write_profile(figure2_profile(), data / "profile.csv")
    return data


class TestExitCodes:
    def test_unknown_command_is_input_error(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag(self, tmp_path):
        assert main(["tune", "--out", str(tmp_path)]) == 1

    def test_tune_without_events(self, workspace, tmp_path):
        code = main([
            "tune", "--frames", str(workspace / "frames.csv"), "--out", str(tmp_path),
        ])
        assert code == 1

    def test_missing_file_is_input_error(self, tmp_path):
        code = main([
            "seek", "--frames", str(tmp_path / "nope.csv"), "--out", str(tmp_path),
        ])
        assert code == 1

    def test_invariant_violation_is_exit_two(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text(FRAMES_HEADER + "0,P,0,10,0.0\n", encoding="utf-8")
        assert main(["seek", "--frames", str(bad), "--out", str(tmp_path)]) == 2

    def test_malformed_profile_is_input_error(self, workspace, tmp_path):
        bad = tmp_path / "p.csv"
        bad.write_text("not a profile\n", encoding="utf-8")
        code = main(["partition", "--profile", str(bad), "--out", str(tmp_path)])
        assert code == 1

    def test_missing_config_file(self, tmp_path):
        assert main([
            "synth", "--count", "10", "--config", str(tmp_path / "none.cfg"),
            "--out", str(tmp_path),
        ]) == 1


class TestTuneCommand:
    def test_writes_grid_and_lookup(self, workspace, tmp_path):
        out = tmp_path / "tuned"
        code = main([
            "tune", "--frames", str(workspace / "frames.csv"),
            "--events", str(workspace / "events.csv"),
            "--gop-grid", "4,1000", "--scenecut-grid", "0,250",
            "--out", str(out),
        ])
        assert code == 0
        rows = (out / "tune_results.csv").read_text().strip().splitlines()
        assert rows[0] == "gop,scenecut,accuracy,filter_rate,f1"
        assert len(rows) == 5
        lookup = json.loads((out / "best_config.json").read_text())
        entry = lookup["synth-7"]
        assert entry["gop_size"] == 1000
        assert entry["scenecut"] == 250.0
        assert entry["accuracy"] == 1.0

    def test_default_five_by_five_grid(self, workspace, tmp_path):
        out = tmp_path / "tuned"
        code = main([
            "tune", "--frames", str(workspace / "frames.csv"),
            "--events", str(workspace / "events.csv"), "--out", str(out),
        ])
        assert code == 0
        rows = (out / "tune_results.csv").read_text().strip().splitlines()
        assert len(rows) == 26

    def test_rerun_is_byte_identical(self, workspace, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main([
                "tune", "--frames", str(workspace / "frames.csv"),
                "--events", str(workspace / "events.csv"), "--out", str(out),
            ]) == 0
            outs.append(out)
        for artifact in ("tune_results.csv", "best_config.json"):
            assert (outs[0] / artifact).read_bytes() == (outs[1] / artifact).read_bytes()


class TestSeekCommand:
    def test_artifacts(self, workspace, tmp_path):
        out = tmp_path / "seek"
        code = main([
            "seek", "--frames", str(workspace / "frames.csv"),
            "--chunk-ms", "5000", "--out", str(out),
        ])
        assert code == 0
        indices = (out / "iframes.txt").read_text().split()
        assert indices == ["0", "300", "600"]
        stats = json.loads((out / "seek_stats.json").read_text())
        assert stats["p_frame_payload_bytes_read"] == 0
        assert stats["iframes_selected"] == 3


class TestPartitionCommand:
    def test_interior_cut_for_stream(self, workspace, tmp_path):
        out = tmp_path / "plan"
        code = main([
            "partition", "--profile", str(workspace / "profile.csv"),
            "--chunk-n", "1000", "--out", str(out),
        ])
        assert code == 0
        plan = json.loads((out / "plan.json").read_text())
        assert plan["cut"] == 1
        assert plan["chunk_size"] == 1000
        cuts = (out / "cuts.csv").read_text().strip().splitlines()
        assert len(cuts) == 5

    def test_sparse_arrivals_fall_back_to_all_cloud(self, workspace, tmp_path):
        out = tmp_path / "plan"
        code = main([
            "partition", "--profile", str(workspace / "profile.csv"),
            "--chunk-n", "1000", "--interarrival-ms", "5000", "--out", str(out),
        ])
        assert code == 0
        plan = json.loads((out / "plan.json").read_text())
        assert plan["chunk_size"] == 1
        assert plan["cut"] == 0

    def test_single_layer_profile(self, tmp_path):
        profile_path = tmp_path / "p.csv"
        profile_path.write_text(
            "input_bytes=1000\nbandwidth_bytes_per_s=1000000\n1,80.0,20.0,100\n",
            encoding="utf-8",
        )
        out = tmp_path / "plan"
        assert main([
            "partition", "--profile", str(profile_path), "--chunk-n", "1",
            "--out", str(out),
        ]) == 0
        plan = json.loads((out / "plan.json").read_text())
        assert plan["cut"] in (0, 1)


class TestSimulateCommand:
    def test_trace_and_summary(self, workspace, tmp_path):
        out = tmp_path / "sim"
        code = main([
            "simulate", "--profile", str(workspace / "profile.csv"),
            "--chunk-n", "5", "--out", str(out),
        ])
        assert code == 0
        summary = json.loads((out / "sim_summary.json").read_text())
        assert summary["n"] == 5
        trace_lines = (out / "trace.csv").read_text().strip().splitlines()
        assert len(trace_lines) == 6


class TestReportCommand:
    def run_report(self, workspace, out, extra=()):
        return main([
            "report", "--frames", str(workspace / "frames.csv"),
            "--profile", str(workspace / "profile.csv"), "--out", str(out),
            *extra,
        ])

    def test_rows_cover_strategies(self, workspace, tmp_path):
        out = tmp_path / "report"
        assert self.run_report(workspace, out) == 0
        report = json.loads((out / "report.json").read_text())
        names = {r["strategy"] for r in report["rows"]}
        assert {
            "iframe-edge+split-NN", "iframe-edge+cloud-NN", "iframe-edge+edge-NN",
            "iframe-cloud+cloud-NN", "uniform", "threshold",
        } <= names

    def test_three_tier_beats_two_tier(self, workspace, tmp_path):
        out = tmp_path / "report"
        assert self.run_report(workspace, out) == 0
        rows = {r["strategy"]: r for r in json.loads((out / "report.json").read_text())["rows"]}
        assert (
            rows["iframe-edge+cloud-NN"]["predicted_fps"]
            > rows["iframe-cloud+cloud-NN"]["predicted_fps"]
        )

    def test_uniform_fairness(self, workspace, tmp_path):
        out = tmp_path / "report"
        assert self.run_report(workspace, out) == 0
        rows = {r["strategy"]: r for r in json.loads((out / "report.json").read_text())["rows"]}
        assert rows["uniform"]["frames_selected"] == rows["iframe-edge+split-NN"]["frames_selected"]

    def test_partitioned_fps_cross_checks_with_simulator(self, workspace, tmp_path):
        out = tmp_path / "report"
        assert self.run_report(workspace, out, ("--chunk-n", "100")) == 0
        report = json.loads((out / "report.json").read_text())
        row = next(r for r in report["rows"] if r["strategy"] == "iframe-edge+split-NN")
        stages = nnmodel.stage_times(figure2_profile(), row["partition_cut"])
        makespan, _ = pipesim.simulate_stream(
            pipesim.PipelineSpec.from_stages(stages), 0.0, row["frames_selected"]
        )
        assert row["predicted_fps"] == pytest.approx(
            report["n_total_frames"] / (makespan / 1000.0)
        )

    def test_figures_rendered(self, workspace, tmp_path):
        out = tmp_path / "report"
        assert self.run_report(workspace, out) == 0
        for name in ("fps_by_strategy.png", "data_transfer_by_strategy.png"):
            png = out / name
            assert png.exists() and png.stat().st_size > 0

    def test_no_figures_flag(self, workspace, tmp_path):
        out = tmp_path / "report"
        assert self.run_report(workspace, out, ("--no-figures",)) == 0
        assert not (out / "fps_by_strategy.png").exists()

    def test_threshold_row_omitted_without_similarity(self, workspace, tmp_path, capsys):
        frames = tmp_path / "nosim.csv"
        rows = ["0,I,0,100,0.0\n"] + [f"{j},P,{j * 33.0},50,0.1\n" for j in range(1, 10)]
        frames.write_text(
            "# source_id=nosim fps=30 width=1280 height=720\n" + FRAMES_HEADER + "".join(rows),
            encoding="utf-8",
        )
        out = tmp_path / "report"
        code = main([
            "report", "--frames", str(frames),
            "--profile", str(workspace / "profile.csv"),
            "--no-figures", "--out", str(out),
        ])
        assert code == 0
        names = {r["strategy"] for r in json.loads((out / "report.json").read_text())["rows"]}
        assert "threshold" not in names
        assert "similarity" in capsys.readouterr().err

    def test_rerun_is_byte_identical(self, workspace, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert self.run_report(workspace, out, ("--no-figures",)) == 0
            outs.append(out)
        for artifact in ("report.csv", "report.json"):
            assert (outs[0] / artifact).read_bytes() == (outs[1] / artifact).read_bytes()


class TestConfigFile:
    def test_config_supplies_values_and_flags_win(self, workspace, tmp_path):
        cfg = tmp_path / "plan.cfg"
        out_cfg = tmp_path / "from_cfg"
        cfg.write_text(
            f"profile={workspace / 'profile.csv'}\n"
            f"chunk_n=1000\n"
            f"out={out_cfg}\n",
            encoding="utf-8",
        )
        assert main(["partition", "--config", str(cfg)]) == 0
        assert json.loads((out_cfg / "plan.json").read_text())["chunk_size"] == 1000

        out_flag = tmp_path / "from_flag"
        assert main([
            "partition", "--config", str(cfg), "--chunk-n", "1", "--out", str(out_flag),
        ]) == 0
        assert json.loads((out_flag / "plan.json").read_text())["chunk_size"] == 1
