import re

import pytest

from wavecoef import bench_batch_dwt, bench_recon_gain


class TestReconGain:
    def test_too_few_iterations_rejected(self):
        with pytest.raises(ValueError):
            bench_recon_gain(sizes=(8,), iterations=1)

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            bench_recon_gain(sizes=(9,), iterations=30)

    def test_report_schema_and_bounds(self):
        report = bench_recon_gain(sizes=(8, 16), iterations=30)
        assert report.kind == "recon_gain"
        assert [row["size"] for row in report.rows] == [8, 16]
        for row in report.rows:
            assert set(row) == {"size", "total_ms", "gain_ms", "gain_pct"}
            assert 0.0 <= row["gain_pct"] <= 100.0
            assert row["gain_ms"] <= row["total_ms"]

    def test_record_format(self):
        report = bench_recon_gain(sizes=(8,), iterations=30)
        record = report.records()[0]
        assert re.fullmatch(
            r"size=8 total_ms=\d+\.\d{4} gain_ms=\d+\.\d{4} gain_pct=\d+\.\d{4}",
            record)

    def test_csv_output(self, tmp_path):
        report = bench_recon_gain(sizes=(8,), iterations=30)
        out = tmp_path / "rows.csv"
        report.to_csv(out)
        lines = out.read_text().splitlines()
        assert lines[0] == "size,total_ms,gain_ms,gain_pct"
        assert len(lines) == 2


class TestBatchDwt:
    def test_zero_count_rejected(self):
        with pytest.raises(ValueError):
            bench_batch_dwt(0)

    def test_single_image_report_is_valid(self):
        report = bench_batch_dwt(1, side=8)
        row = report.rows[0]
        assert row["count"] == 1 and row["size"] == 8
        assert row["matrix_ms"] > 0 and row["lifting_est_ms"] > 0

    def test_matrix_path_beats_lifting_loops(self):
        row = bench_batch_dwt(64, side=16).rows[0]
        assert row["speedup"] > 1.0

    def test_environment_note_mentions_iterations(self):
        report = bench_batch_dwt(1, side=8)
        assert "iterations" in report.environment
        assert report.timestamp
