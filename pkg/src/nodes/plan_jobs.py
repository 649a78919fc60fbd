import logging
from typing import Dict

from ..experiments.jobs import plan_jobs

logger = logging.getLogger(__name__)


def plan_jobs_node(state: Dict) -> Dict:
    """
    LangGraph node that expands the experiment config into training jobs.

    Args:
        state: Graph state containing 'config'

    Returns:
        Updated state with 'jobs'
    """
    cfg = state["config"]
    jobs = plan_jobs(cfg)
    if not jobs:
        logger.warning(f"Experiment {cfg.experiment_id} has no jobs")

    n_data = len({spec for job in jobs for spec in job.datasets()})
    logger.info(f"Planned {len(jobs)} job(s) over {n_data} dataset(s) for {cfg.kind.value} experiment {cfg.experiment_id}")
    for job in jobs:
        logger.debug(f"  {job.key}: {len(job.evals)} evaluation(s)")

    return {
        **state,
        "jobs": jobs,
    }
