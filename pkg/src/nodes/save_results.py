import logging
from pathlib import Path
from typing import Dict

from ..experiments.config import ExperimentKind
from ..experiments.records import metric_table, print_summary, records_to_frame, save_error_log, save_results_csv

logger = logging.getLogger(__name__)

# metric and pivot shown in the console summary per experiment kind
SUMMARY_VIEW = {
    ExperimentKind.BENCHMARK: ("test_error", "problem", "model"),
    ExperimentKind.SUPERRES: ("test_error", "param", "model"),
    ExperimentKind.LOWFREQ: ("test_error", "param", "model"),
    ExperimentKind.ALIASING_STUDY: ("discrepancy_mean", "param", "model"),
    ExperimentKind.INIT_SENSITIVITY: ("test_error", "param", "model"),
}


def error_log_path(output_csv: str) -> Path:
    path = Path(output_csv)
    return path.with_name(f"{path.stem}_errors.txt")


def save_results_node(state: Dict) -> Dict:
    """
    LangGraph node that writes the results CSV and the error log.

    Nothing is written when 'output_csv' is empty; the records stay in the
    state either way.

    Args:
        state: Graph state containing 'records', 'errors', 'config', 'output_csv'

    Returns:
        The state, unchanged
    """
    cfg = state["config"]
    records = state.get("records", [])
    output_csv = state.get("output_csv")

    if not output_csv:
        logger.debug("No output path; results kept in memory")
        return state

    save_results_csv(records, output_csv, cfg.record_timings)
    if state.get("errors"):
        log_path = error_log_path(output_csv)
        save_error_log(state["errors"], log_path)
        logger.warning(f"{len(state['errors'])} error(s) occurred; see {log_path}")

    if state.get("verbose", True):
        metric, index, columns = SUMMARY_VIEW[cfg.kind]
        df = records_to_frame(records)
        print_summary(metric_table(df, metric, index, columns), f"{cfg.experiment_id.upper()}: {metric}")
        print(f"\nDetailed results saved to: {output_csv}")

    return state
