"""
Result records and the results CSV.

Every experiment writes the same columns so result files can be diffed
across runs.
"""

import logging
import math
import threading
from dataclasses import asdict, dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import pandas as pd

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["experiment", "model", "problem", "param", "metric", "value", "seconds"]
STATUS_METRIC = "status"


@dataclass(frozen=True)
class ResultRecord:
    experiment: str
    model: str
    problem: str
    param: str
    metric: str
    value: float
    seconds: float = 0.0

    @property
    def key(self) -> Tuple[str, str, str, str]:
        return (self.model, self.problem, self.param, self.metric)

    @property
    def is_sentinel(self) -> bool:
        return self.metric == STATUS_METRIC and math.isnan(self.value)


def sentinel_record(experiment: str, model: str, problem: str, param: str, seconds: float = 0.0) -> ResultRecord:
    """Row standing in for a run that failed (NaN status)."""
    return ResultRecord(experiment, model, problem, param, STATUS_METRIC, float("nan"), seconds)


class ResultAppender:
    """Append-only, thread-safe collection with one row per (model, problem, param, metric)."""

    def __init__(self, experiment: str):
        self.experiment = experiment
        self._records: List[ResultRecord] = []
        self._keys = set()
        self._lock = threading.Lock()

    def add(self, model: str, problem: str, param: str, metric: str, value: float, seconds: float = 0.0) -> ResultRecord:
        return self.append(ResultRecord(self.experiment, model, problem, param, metric, float(value), float(seconds)))

    def append(self, record: ResultRecord) -> ResultRecord:
        with self._lock:
            if record.key in self._keys:
                raise ValueError(f"duplicate result row {record.key}")
            self._keys.add(record.key)
            self._records.append(record)
        return record

    def extend(self, records: Iterable[ResultRecord]) -> None:
        for r in records:
            self.append(r)

    @property
    def records(self) -> List[ResultRecord]:
        with self._lock:
            return list(self._records)

    def __len__(self) -> int:
        return len(self._records)


def records_to_frame(records: Sequence[ResultRecord]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in records], columns=RESULT_COLUMNS)


def save_results_csv(
    records: Sequence[ResultRecord], output_path: Union[str, Path], record_timings: bool = False
) -> Path:
    """
    Write records in order. ``seconds`` is zeroed unless ``record_timings``
    so that reruns give identical files.
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    df = records_to_frame(records)
    if not record_timings:
        df["seconds"] = 0.0
    df.to_csv(output_path, index=False)
    logger.info(f"Results saved to {output_path} ({len(df)} rows)")
    return output_path


def load_results_csv(path: Union[str, Path]) -> pd.DataFrame:
    df = pd.read_csv(path, dtype={"param": str})
    if list(df.columns) != RESULT_COLUMNS:
        raise ValueError(f"{path} is not a results file (columns {list(df.columns)})")
    return df


def metric_table(df: pd.DataFrame, metric: str = "test_error", index: str = "problem", columns: str = "model") -> pd.DataFrame:
    """Pivot one metric, e.g. problems x models for the benchmark table."""
    rows = df[df["metric"] == metric]
    return rows.pivot_table(index=index, columns=columns, values="value", aggfunc="first", sort=False)


def print_summary(df: pd.DataFrame, title: str) -> None:
    print("\n" + "=" * 80)
    print(title)
    print("=" * 80)
    if df.empty:
        print("(no results)")
    else:
        print(df.to_string())
    print("=" * 80)


def save_error_log(errors: List[str], log_path: Union[str, Path]) -> None:
    """
    Save the errors collected during a run.

    Args:
        errors: error messages
        log_path: where the log is written
    """
    if not errors:
        return

    log_path = Path(log_path)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    with open(log_path, "w") as f:
        f.write(f"Experiment Error Log - {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
        f.write("=" * 80 + "\n\n")
        for i, error in enumerate(errors, 1):
            f.write(f"{i}. {error}\n")

    logger.info(f"Error log saved to {log_path}")
