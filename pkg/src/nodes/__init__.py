"""
LangGraph node modules for the experiment workflow.
"""

from .plan_jobs import plan_jobs_node
from .prepare_data import prepare_data_node
from .train_models import train_models_node
from .evaluate_models import evaluate_models_node
from .save_results import save_results_node

__all__ = [
    'plan_jobs_node',
    'prepare_data_node',
    'train_models_node',
    'evaluate_models_node',
    'save_results_node',
]
