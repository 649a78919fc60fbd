import logging
import time
from typing import Dict, List, Tuple

from ..errors import SpectralError
from ..experiments.jobs import run_eval, summarize
from ..experiments.records import ResultAppender, ResultRecord, sentinel_record

logger = logging.getLogger(__name__)


class ModelEvaluator:
    """Turns training outcomes into result records."""

    def __init__(self, experiment: str, datasets: Dict, record_timings: bool = False):
        self.experiment = experiment
        self.datasets = datasets
        self.record_timings = record_timings

    def _seconds(self, value: float) -> float:
        return value if self.record_timings else 0.0

    def evaluate_outcome(self, outcome: Dict) -> Tuple[List[ResultRecord], List[str]]:
        """
        Records for one job: a sentinel row if training failed, otherwise
        the training error and one row per evaluation metric.
        """
        job = outcome["job"]
        if outcome["error"]:
            return [sentinel_record(self.experiment, job.model_name, job.problem, job.param,
                                    self._seconds(outcome["seconds"]))], []

        records = [ResultRecord(
            self.experiment, job.model_name, job.problem, job.param,
            "train_error", outcome["train_error"], self._seconds(outcome["seconds"]),
        )]
        errors = []
        for task in job.evals:
            start = time.perf_counter()
            try:
                rows = run_eval(job, task, outcome["params"], self.datasets)
            except KeyError:
                errors.append(f"{job.key}: evaluation data for {task.param} unavailable")
                records.append(sentinel_record(self.experiment, job.model_name, job.problem, task.param))
                continue
            except (SpectralError, ValueError) as e:
                errors.append(f"{job.key} [{task.param} {task.metric}]: {e}")
                records.append(sentinel_record(self.experiment, job.model_name, job.problem, task.param))
                continue
            seconds = self._seconds(time.perf_counter() - start)
            for param, metric, value in rows:
                records.append(ResultRecord(self.experiment, job.model_name, job.problem, param, metric, value, seconds))
                logger.debug(f"{job.key} {param} {metric} = {value:.4e}")
        return records, errors


def evaluate_models_node(state: Dict) -> Dict:
    """
    LangGraph node that evaluates the trained models.

    Args:
        state: Graph state containing 'outcomes', 'datasets' and 'config'

    Returns:
        Updated state with 'records' in job order, followed by summary rows
    """
    cfg = state["config"]
    outcomes = state.get("outcomes", [])
    errors: List[str] = list(state.get("errors", []))
    appender = ResultAppender(cfg.experiment_id)

    if not outcomes:
        logger.warning("No trained models to evaluate")
        return {**state, "records": []}

    evaluator = ModelEvaluator(cfg.experiment_id, state.get("datasets", {}), cfg.record_timings)
    seen = set()
    for outcome in outcomes:
        records, eval_errors = evaluator.evaluate_outcome(outcome)
        for r in records:
            # one sentinel per parameter point
            if r.is_sentinel and r.key in seen:
                continue
            seen.add(r.key)
            appender.append(r)
        for e in eval_errors:
            logger.error(e)
        errors.extend(eval_errors)

    appender.extend(summarize(cfg, appender.records))
    logger.info(f"Collected {len(appender)} result row(s)")

    return {
        **state,
        "records": appender.records,
        "errors": errors,
    }
