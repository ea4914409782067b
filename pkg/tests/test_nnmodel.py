import random

import pytest

from conftest import make_profile, random_profile
from vidplan.errors import ParseError, ValidationError
from vidplan.nnmodel import (
    LayerProfile,
    NetworkProfile,
    cloud_suffix_time,
    edge_prefix_time,
    load_profile,
    output_bytes_at,
    stage_times,
    transmit_time,
    update_profile,
    write_profile,
)


@pytest.fixture
def profile():
    return make_profile(
        edge=[10.0, 10.0, 10.0],
        cloud=[5.0, 5.0, 5.0],
        sizes=[1000, 2000, 500],
        input_bytes=4000,
        bandwidth=1_000_000.0,
    )


class TestPrefixSuffix:
    def test_empty_prefix(self, profile):
        assert edge_prefix_time(profile, 0) == 0.0

    def test_two_layer_prefix(self, profile):
        assert edge_prefix_time(profile, 2) == 20.0

    def test_full_prefix_equals_independent_sum(self):
        rng = random.Random(42)
        p = random_profile(rng)
        assert edge_prefix_time(p, p.m) == pytest.approx(
            sum(layer.exec_edge_ms for layer in p.layers)
        )

    def test_suffix_at_m_is_zero(self, profile):
        assert cloud_suffix_time(profile, profile.m) == 0.0

    def test_suffix_at_zero_is_total(self, profile):
        assert cloud_suffix_time(profile, 0) == 15.0

    def test_conservation_across_cuts(self):
        rng = random.Random(7)
        p = random_profile(rng)
        total = edge_prefix_time(p, p.m)
        for x in range(p.m + 1):
            tail = sum(layer.exec_edge_ms for layer in p.layers[x:])
            assert edge_prefix_time(p, x) + tail == pytest.approx(total)

    def test_prefix_monotone_suffix_antitone(self):
        rng = random.Random(13)
        p = random_profile(rng)
        prefixes = [edge_prefix_time(p, x) for x in range(p.m + 1)]
        suffixes = [cloud_suffix_time(p, x) for x in range(p.m + 1)]
        assert prefixes == sorted(prefixes)
        assert suffixes == sorted(suffixes, reverse=True)

    def test_out_of_range(self, profile):
        with pytest.raises(ValidationError):
            edge_prefix_time(profile, -1)
        with pytest.raises(ValidationError):
            cloud_suffix_time(profile, profile.m + 1)


class TestTransmitTime:
    def test_thirty_mbps_frame(self):
        p = make_profile(
            edge=[1.0], cloud=[1.0], sizes=[3_750_000],
            input_bytes=0, bandwidth=3_750_000.0,
        )
        assert transmit_time(p, 1) == pytest.approx(1000.0)

    def test_zero_bytes(self):
        p = make_profile(edge=[1.0], cloud=[1.0], sizes=[0], input_bytes=0)
        assert transmit_time(p, 1) == 0.0

    def test_cut_zero_ships_raw_frame(self, profile):
        assert output_bytes_at(profile, 0) == 4000
        assert transmit_time(profile, 0) == pytest.approx(4.0)

    def test_doubling_bandwidth_halves_time(self, profile):
        doubled = NetworkProfile(
            layers=profile.layers,
            input_bytes=profile.input_bytes,
            bandwidth_bytes_per_s=profile.bandwidth_bytes_per_s * 2,
        )
        for x in range(profile.m + 1):
            assert transmit_time(doubled, x) == pytest.approx(transmit_time(profile, x) / 2)


class TestStageTimes:
    def test_all_cloud_boundary(self, profile):
        st = stage_times(profile, 0)
        assert st.edge_ms == 0.0
        assert st.transmit_ms == pytest.approx(4.0)
        assert st.cloud_ms == pytest.approx(15.0)

    def test_all_edge_boundary(self, profile):
        st = stage_times(profile, profile.m)
        assert st.cloud_ms == 0.0
        assert st.edge_ms == pytest.approx(30.0)
        assert st.transmit_ms == pytest.approx(0.5)


class TestProfileIO:
    def test_load_five_layers(self, tmp_path):
        path = tmp_path / "p.csv"
        lines = ["input_bytes=1000", "bandwidth_bytes_per_s=500000"]
        lines += [f"{i},{i * 1.5},{i * 0.5},{i * 100}" for i in range(1, 6)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        p = load_profile(path)
        assert p.m == 5
        assert p.layers[2].exec_edge_ms == 4.5

    def test_round_trip(self, tmp_path):
        rng = random.Random(3)
        p = random_profile(rng)
        path = tmp_path / "p.csv"
        write_profile(p, path)
        assert load_profile(path) == p

    def test_missing_header_key(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("input_bytes=1000\n1,1.0,1.0,10\n", encoding="utf-8")
        with pytest.raises(ParseError, match="bandwidth_bytes_per_s"):
            load_profile(path)

    def test_bad_row(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(
            "input_bytes=1\nbandwidth_bytes_per_s=1\n1,1.0,1.0\n", encoding="utf-8"
        )
        with pytest.raises(ParseError, match=":3:"):
            load_profile(path)

    def test_layer_order_enforced(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text(
            "input_bytes=1\nbandwidth_bytes_per_s=1\n2,1.0,1.0,10\n1,1.0,1.0,10\n",
            encoding="utf-8",
        )
        with pytest.raises(ValidationError, match="1..m"):
            load_profile(path)

    def test_empty_profile_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("input_bytes=1\nbandwidth_bytes_per_s=1\n", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_profile(path)

    def test_negative_time_rejected(self):
        with pytest.raises(ValidationError):
            LayerProfile(layer_id=1, exec_edge_ms=-1.0, exec_cloud_ms=0.0, output_bytes=0)


class TestUpdateProfile:
    def test_fixed_point(self, profile):
        updated = update_profile(profile, 2, observed_edge_ms=10.0)
        assert updated == profile

    def test_ewma_step(self, profile):
        base = make_profile(edge=[100.0], cloud=[50.0], sizes=[10])
        updated = update_profile(base, 1, observed_edge_ms=200.0, alpha=0.3)
        assert updated.layers[0].exec_edge_ms == pytest.approx(130.0)

    def test_cloud_side(self):
        base = make_profile(edge=[100.0], cloud=[50.0], sizes=[10])
        updated = update_profile(base, 1, observed_cloud_ms=150.0, alpha=0.3)
        assert updated.layers[0].exec_cloud_ms == pytest.approx(80.0)
        assert updated.layers[0].exec_edge_ms == 100.0

    def test_original_unchanged(self, profile):
        before = profile.layers[0].exec_edge_ms
        update_profile(profile, 1, observed_edge_ms=999.0)
        assert profile.layers[0].exec_edge_ms == before

    def test_unknown_layer(self, profile):
        with pytest.raises(ValidationError, match="unknown layer"):
            update_profile(profile, 9, observed_edge_ms=1.0)

    def test_requires_an_observation(self, profile):
        with pytest.raises(ValidationError):
            update_profile(profile, 1)
