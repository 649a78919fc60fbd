"""
The experiment pipeline as a LangGraph state graph:

    plan_jobs -> prepare_data -> train_models -> evaluate_models -> save_results
"""

import logging
from pathlib import Path
from typing import Optional, TypedDict, Union

from langgraph.graph import END, StateGraph

from ..nodes import (
    evaluate_models_node,
    plan_jobs_node,
    prepare_data_node,
    save_results_node,
    train_models_node,
)
from .config import ExperimentConfig

logger = logging.getLogger(__name__)


class ExperimentState(TypedDict):
    """Type definition for the graph state."""
    config: ExperimentConfig
    jobs: list
    datasets: dict
    outcomes: list
    records: list
    errors: list
    output_csv: Optional[str]
    verbose: bool


def create_experiment_workflow():
    workflow = StateGraph(ExperimentState)

    workflow.add_node("plan_jobs", plan_jobs_node)
    workflow.add_node("prepare_data", prepare_data_node)
    workflow.add_node("train_models", train_models_node)
    workflow.add_node("evaluate_models", evaluate_models_node)
    workflow.add_node("save_results", save_results_node)

    workflow.set_entry_point("plan_jobs")
    workflow.add_edge("plan_jobs", "prepare_data")
    workflow.add_edge("prepare_data", "train_models")
    workflow.add_edge("train_models", "evaluate_models")
    workflow.add_edge("evaluate_models", "save_results")
    workflow.add_edge("save_results", END)

    return workflow.compile()


def initial_state(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = True
) -> ExperimentState:
    return {
        "config": cfg,
        "jobs": [],
        "datasets": {},
        "outcomes": [],
        "records": [],
        "errors": [],
        "output_csv": str(output_csv) if output_csv else None,
        "verbose": verbose,
    }


def run_experiment(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = True
) -> ExperimentState:
    """
    Run one experiment end to end.

    Args:
        cfg: validated experiment config
        output_csv: results file; nothing is written when None
        verbose: print the summary table after saving

    Returns:
        Final graph state with 'records' and 'errors'
    """
    logger.info(f"Running {cfg.kind.value} experiment {cfg.experiment_id}")
    workflow = create_experiment_workflow()
    final_state = workflow.invoke(initial_state(cfg, output_csv, verbose))
    if final_state.get("errors"):
        logger.warning(f"{len(final_state['errors'])} error(s) during {cfg.experiment_id}")
    return final_state
