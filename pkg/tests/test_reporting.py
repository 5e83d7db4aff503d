"""Report serialization, CSV output, and the SVG plot writer."""

import csv
import json

import pytest

from besov_wave_lab.reporting import ExperimentReport, Table, config_hash, write_loglog_svg


class TestTable:
    def test_csv_round_trip_rfc4180(self, tmp_path):
        table = Table(columns=["t", "norm"], rows=[[1.0, 0.5], [10.0, 0.05]])
        path = tmp_path / "t.csv"
        table.write_csv(path)
        raw = path.read_bytes()
        assert b"\r\n" in raw
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "norm"]
        assert [float(x) for x in rows[1]] == [1.0, 0.5]

    def test_column_access(self):
        table = Table(columns=["a", "b"], rows=[[1.0, 2.0], [3.0, 4.0]])
        assert table.column("b") == [2.0, 4.0]


class TestReport:
    def test_save_writes_json_and_csv(self, tmp_path):
        report = ExperimentReport(
            kind="demo",
            scalars={"x": 1.5},
            verdicts={"check": "pass"},
            tables={"data": Table(columns=["t"], rows=[[0.0], [1.0]])},
        )
        path = report.save(tmp_path)
        body = json.loads(path.read_text())
        assert body["scalars"]["x"] == 1.5
        assert (tmp_path / "demo.data.csv").exists()
        assert "timestamp" in body["timing"]

    def test_passed_requires_all_verdicts(self):
        r = ExperimentReport(kind="d", verdicts={"a": "pass", "b": "fail"})
        assert not r.passed()
        r2 = ExperimentReport(kind="d", verdicts={"a": "pass"})
        assert r2.passed()


class TestSvg:
    def test_plot_contains_series_and_fit(self, tmp_path):
        path = tmp_path / "p.svg"
        xs = [1.0, 10.0, 100.0]
        write_loglog_svg(
            path,
            xs,
            {"measured": [1.0, 0.3, 0.1]},
            fit=(-0.5, 0.0),
            title="demo decay",
        )
        body = path.read_text()
        assert body.startswith("<svg")
        assert "demo decay" in body
        assert "slope -0.500" in body
        assert body.count("<circle") == 3

    def test_rejects_empty_positive_data(self, tmp_path):
        with pytest.raises(ValueError, match="positive"):
            write_loglog_svg(tmp_path / "e.svg", [1.0], {"s": [0.0]})


def test_config_hash_short_hex():
    h = config_hash({"a": {"k": "v"}})
    assert len(h) == 16
    int(h, 16)
