import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional

from ..errors import SpectralError, TrainingDivergedError
from ..experiments.jobs import TrainJob
from ..nets.checkpoint import save_checkpoint
from ..nets.models import build_model, prepare_targets
from ..nets.training import relative_l2_loss, train_loop
from ..problems.datasets import Dataset, DatasetSpec

logger = logging.getLogger(__name__)


def checkpoint_name(job: TrainJob) -> str:
    return f"{job.problem}__{job.model_name}__{job.param.replace('=', '')}"


class ModelTrainer:
    """Trains one job and reports the outcome without raising."""

    def __init__(self, datasets: Dict[DatasetSpec, Dataset], checkpoint_dir: Optional[Path] = None):
        """
        Args:
            datasets: prepared datasets keyed by spec
            checkpoint_dir: if given, every trained model is saved there
        """
        self.datasets = datasets
        self.checkpoint_dir = checkpoint_dir

    def train_job(self, job: TrainJob) -> Dict:
        """
        Train ``job`` on the training split of its dataset.

        Returns:
            Dictionary with 'job', 'params', 'train_error', 'epochs',
            'seconds', 'diverged' and 'error' (None on success)
        """
        outcome = {
            "job": job,
            "params": None,
            "train_error": None,
            "epochs": 0,
            "seconds": 0.0,
            "diverged": False,
            "error": None,
        }
        if job.data not in self.datasets:
            outcome["error"] = "training data unavailable"
            return outcome

        start = time.perf_counter()
        try:
            train, test = self.datasets[job.data].split(job.n_train)
            model = build_model(job.model)
            x_train = model.prepare(train.inputs)
            y_train = prepare_targets(train.targets, job.model.eval_size)
            logger.info(f"Training {job.key} ({model.n_params()} parameters, {job.train_config.epochs} epochs)")
            result = train_loop(model, x_train, y_train, job.train_config)
            outcome["params"] = result.params
            outcome["epochs"] = result.epochs_run
            outcome["train_error"] = relative_l2_loss(model.predict(result.params, x_train), y_train)
            if self.checkpoint_dir is not None:
                save_checkpoint(
                    self.checkpoint_dir / checkpoint_name(job), model, result.params,
                    job.train_config, result.epochs_run, job.train_config.seed,
                )
        except TrainingDivergedError as e:
            logger.warning(f"{job.key}: {e}")
            outcome["diverged"] = True
            outcome["error"] = str(e)
        except (SpectralError, ValueError) as e:
            logger.error(f"{job.key}: {e}")
            outcome["error"] = str(e)
        outcome["seconds"] = time.perf_counter() - start
        return outcome


def train_models_node(state: Dict) -> Dict:
    """
    LangGraph node that trains every planned job.

    Args:
        state: Graph state containing 'jobs', 'datasets' and 'config'

    Returns:
        Updated state with 'outcomes' in job order
    """
    cfg = state["config"]
    jobs: List[TrainJob] = state.get("jobs", [])
    errors: List[str] = list(state.get("errors", []))

    if not jobs:
        logger.warning("No jobs to train")
        return {**state, "outcomes": []}

    checkpoint_dir = None
    if cfg.save_checkpoints:
        checkpoint_dir = Path(state.get("output_csv") or cfg.output_path()).parent / "checkpoints"
    trainer = ModelTrainer(state.get("datasets", {}), checkpoint_dir)
    outcomes = []

    if cfg.workers == 1 or len(jobs) == 1:
        outcomes = [trainer.train_job(job) for job in jobs]
    else:
        logger.info(f"Training with {cfg.workers} workers")
        with ThreadPoolExecutor(max_workers=min(cfg.workers, len(jobs))) as executor:
            future_to_job = {executor.submit(trainer.train_job, job): job for job in jobs}
            for future in as_completed(future_to_job):
                outcomes.append(future.result())

    # Sort by job index for output independent of scheduling
    outcomes.sort(key=lambda o: o["job"].index)
    for o in outcomes:
        if o["error"]:
            errors.append(f"{o['job'].key}: {o['error']}")

    trained = sum(1 for o in outcomes if not o["error"])
    logger.info(f"Trained {trained}/{len(jobs)} job(s)")

    return {
        **state,
        "outcomes": outcomes,
        "errors": errors,
    }
