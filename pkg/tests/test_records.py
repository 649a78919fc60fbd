"""Tests for result records and the results CSV in src/experiments/records.py."""
import math
import threading

import pandas as pd
import pytest

from src.experiments.records import (
    RESULT_COLUMNS,
    ResultAppender,
    ResultRecord,
    load_results_csv,
    metric_table,
    records_to_frame,
    save_error_log,
    save_results_csv,
    sentinel_record,
)


def sample_records():
    return [
        ResultRecord("bench", "SNO_F", "derivative_10", "base", "test_error", 0.02, 1.5),
        ResultRecord("bench", "Exact", "derivative_10", "base", "test_error", 1e-16, 0.1),
        sentinel_record("bench", "FNO", "derivative_10", "base", 3.0),
    ]


class TestRecords:
    """Test records and the append-only collection."""

    def test_sentinel(self):
        r = sentinel_record("e", "FNO", "kdv_1d", "base")
        assert r.metric == "status" and math.isnan(r.value) and r.is_sentinel
        assert not sample_records()[0].is_sentinel

    def test_duplicate_rejected(self):
        appender = ResultAppender("e")
        appender.add("SNO_F", "identity", "base", "test_error", 0.1)
        appender.add("SNO_F", "identity", "base", "train_error", 0.1)
        with pytest.raises(ValueError):
            appender.add("SNO_F", "identity", "base", "test_error", 0.2)
        assert len(appender) == 2

    def test_threaded_appends(self):
        appender = ResultAppender("e")

        def add_many(model):
            for i in range(200):
                appender.add(model, "identity", f"seed={i}", "test_error", i)

        threads = [threading.Thread(target=add_many, args=(m,)) for m in ("a", "b", "c")]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(appender.records) == 600

    def test_frame_columns(self):
        assert list(records_to_frame(sample_records()).columns) == RESULT_COLUMNS
        assert list(records_to_frame([]).columns) == RESULT_COLUMNS


class TestResultsCSV:
    """Test writing and reading the results CSV."""

    def test_header(self, tmp_path):
        path = save_results_csv(sample_records(), tmp_path / "r.csv")
        assert path.read_text().splitlines()[0] == "experiment,model,problem,param,metric,value,seconds"

    def test_seconds_zeroed(self, tmp_path):
        df = load_results_csv(save_results_csv(sample_records(), tmp_path / "r.csv"))
        assert (df["seconds"] == 0.0).all()
        df = load_results_csv(save_results_csv(sample_records(), tmp_path / "t.csv", record_timings=True))
        assert df["seconds"].tolist() == [1.5, 0.1, 3.0]

    def test_identical_files(self, tmp_path):
        a = save_results_csv(sample_records(), tmp_path / "a.csv")
        b = save_results_csv(sample_records(), tmp_path / "b.csv")
        assert a.read_bytes() == b.read_bytes()

    def test_sentinel_roundtrip(self, tmp_path):
        df = load_results_csv(save_results_csv(sample_records(), tmp_path / "r.csv"))
        assert df.loc[2, "metric"] == "status" and math.isnan(df.loc[2, "value"])
        assert df.loc[0, "value"] == 0.02

    def test_not_a_results_file(self, tmp_path):
        path = tmp_path / "x.csv"
        pd.DataFrame({"a": [1]}).to_csv(path, index=False)
        with pytest.raises(ValueError):
            load_results_csv(path)

    def test_metric_table(self):
        table = metric_table(records_to_frame(sample_records()))
        assert table.loc["derivative_10", "SNO_F"] == 0.02
        assert "FNO" not in table.columns


class TestErrorLog:
    """Test the error log writer."""

    def test_numbered(self, tmp_path):
        path = tmp_path / "errors.txt"
        save_error_log(["first", "second"], path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("Experiment Error Log")
        assert "1. first" in lines and "2. second" in lines

    def test_no_errors_no_file(self, tmp_path):
        save_error_log([], tmp_path / "errors.txt")
        assert not (tmp_path / "errors.txt").exists()
