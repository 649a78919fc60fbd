"""
Experiment harness: configs, jobs and result records.

The protocols live in ``src.experiments.protocols`` and the LangGraph
pipeline in ``src.experiments.workflow``; both import the workflow nodes,
which import this package, so they are not re-exported here.
"""

from .config import ExperimentConfig, ExperimentKind
from .jobs import EvalTask, TrainJob, plan_jobs
from .records import (
    RESULT_COLUMNS,
    ResultAppender,
    ResultRecord,
    load_results_csv,
    records_to_frame,
    save_error_log,
    save_results_csv,
    sentinel_record,
)

__all__ = [
    "EvalTask",
    "ExperimentConfig",
    "ExperimentKind",
    "RESULT_COLUMNS",
    "ResultAppender",
    "ResultRecord",
    "TrainJob",
    "load_results_csv",
    "plan_jobs",
    "records_to_frame",
    "save_error_log",
    "save_results_csv",
    "sentinel_record",
]
