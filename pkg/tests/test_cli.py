"""Command-line interface: round-trips, commands, and error reporting."""

import json

import numpy as np
import pytest

from opcausal import MultivariateSeries
from opcausal.cli import (
    main,
    parse_delays,
    read_series_csv,
    read_truth_json,
    write_series_csv,
    write_truth_json,
)
from opcausal.errors import OpcausalError
from opcausal.simulate import GroundTruth


class TestSeriesCsvRoundTrip:
    def test_exact_round_trip(self, tmp_path, rng):
        series = MultivariateSeries(
            data=rng.standard_normal((50, 3)), channel_names=["a", "b", "c"]
        )
        path = tmp_path / "series.csv"
        write_series_csv(series, path)
        back = read_series_csv(path)
        np.testing.assert_array_equal(back.data, series.data)
        assert back.channel_names == ["a", "b", "c"]

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(OpcausalError, match="empty"):
            read_series_csv(path)

    def test_ragged_row_reports_location(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,2.0\n3.0\n")
        with pytest.raises(OpcausalError, match="row 3"):
            read_series_csv(path)

    def test_non_numeric_cell_reports_location(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,oops\n")
        with pytest.raises(OpcausalError, match="column 2"):
            read_series_csv(path)


class TestTruthJsonRoundTrip:
    def test_round_trip(self, tmp_path):
        truth = GroundTruth(edges=[(0, 1, 4), (2, 0, 2)], description="demo")
        path = tmp_path / "truth.json"
        write_truth_json(truth, path)
        back = read_truth_json(path)
        assert back.edges == truth.edges
        assert back.description == "demo"


class TestParseDelays:
    def test_range(self):
        assert list(parse_delays("1-5", None, False)) == [1, 2, 3, 4, 5]

    def test_range_with_step(self):
        assert list(parse_delays("2-10:2", None, False)) == [2, 4, 6, 8, 10]

    def test_comma_list(self):
        assert list(parse_delays("1,3,7", None, False)) == [1, 3, 7]

    def test_milliseconds_need_sample_rate(self):
        with pytest.raises(OpcausalError):
            parse_delays("10-100", None, True)

    def test_milliseconds_converted(self):
        grid = parse_delays("10-100:10", 200.0, True)
        assert list(grid) == [2, 4, 6, 8, 10, 12, 14, 16, 18, 20]

    def test_fractional_samples_rejected(self):
        with pytest.raises(OpcausalError):
            parse_delays("15-25:10", 100.0, True)


class TestCommands:
    def test_simulate_writes_artifacts(self, tmp_path, capsys):
        out = tmp_path / "run"
        rc = main(
            [
                "simulate",
                "--system",
                "ar",
                "--T",
                "500",
                "--seed",
                "5",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        assert (tmp_path / "run.csv").exists()
        truth = read_truth_json(tmp_path / "run.truth.json")
        assert len(truth.edges) == 9
        manifest = json.loads((tmp_path / "run.manifest.json").read_text())
        assert manifest["seed"] == 5
        assert "seed: 5" in capsys.readouterr().out

    def test_infer_on_simulated_series(self, tmp_path):
        out = tmp_path / "run"
        main(["simulate", "--system", "ar", "--T", "4000", "--seed", "1", "--out", str(out)])
        rc = main(
            [
                "infer",
                "--input",
                str(tmp_path / "run.csv"),
                "--out",
                str(tmp_path / "net.json"),
                "--delta",
                "0.15",
            ]
        )
        assert rc == 0
        payload = json.loads((tmp_path / "net.json").read_text())
        assert payload["params"]["delta"] == 0.15
        pairs = {(e["source"], e["target"]) for e in payload["edges"]}
        assert (1, 0) in pairs

    def test_infer_flag_overrides_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"delta": 0.5, "d": 1}))
        out = tmp_path / "run"
        main(["simulate", "--system", "ar", "--T", "500", "--seed", "1", "--out", str(out)])
        main(
            [
                "infer",
                "--input",
                str(tmp_path / "run.csv"),
                "--out",
                str(tmp_path / "net.json"),
                "--config",
                str(cfg),
                "--delta",
                "0.2",
                "--delays",
                "1-3",
            ]
        )
        payload = json.loads((tmp_path / "net.json").read_text())
        assert payload["params"]["delta"] == 0.2  # flag wins
        assert payload["params"]["d"] == 1  # config file wins over default

    def test_sweep_writes_csv(self, tmp_path):
        out = tmp_path / "sweep"
        rc = main(
            [
                "sweep",
                "--system",
                "ar",
                "--delta",
                "0.15",
                "--T",
                "4000",
                "--R",
                "1",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        lines = (tmp_path / "sweep.csv").read_text().strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("system,")

    def test_sweep_needs_an_axis(self, tmp_path, capsys):
        rc = main(["sweep", "--system", "ar", "--out", str(tmp_path / "s")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        rc = main(
            [
                "infer",
                "--input",
                str(tmp_path / "nope.csv"),
                "--out",
                str(tmp_path / "net.json"),
            ]
        )
        assert rc == 1
