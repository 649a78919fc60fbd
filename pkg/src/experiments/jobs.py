"""
Planning and evaluation of experiment jobs.

A job is one trained model: an architecture on a problem at one parameter
point (a training grid size for the aliasing study, an initialization seed
for the sensitivity study, "base" otherwise). Each job carries the
evaluations to run once it is trained.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..nets.models import Architecture, Model, ModelSpec, build_model, prepare_targets, series_operator
from ..nets.training import TrainConfig, relative_l2_loss
from ..problems.datasets import PROBLEMS, Dataset, DatasetSpec, with_band
from ..spectral.aliasing import operator_grid_discrepancy
from ..spectral.series import Grid, GridFunction, interpolate_to_grid
from .config import ExperimentConfig, ExperimentKind
from .records import ResultRecord

logger = logging.getLogger(__name__)

BASE_PARAM = "base"
DISCREPANCY_RATIO = 2


@dataclass(frozen=True)
class EvalTask:
    """
    One evaluation of a trained job.

    ``data`` replaces the job's dataset (shifted bands); ``eval_size`` and
    ``grid_size`` override the evaluation grid and the FNO input grid.
    """

    param: str
    metric: str
    data: Optional[DatasetSpec] = None
    eval_size: Optional[int] = None
    grid_size: Optional[int] = None


@dataclass(frozen=True)
class TrainJob:
    index: int
    problem: str
    model: ModelSpec
    train_config: TrainConfig
    data: DatasetSpec
    n_train: int
    param: str = BASE_PARAM
    evals: Tuple[EvalTask, ...] = ()

    @property
    def model_name(self) -> str:
        return self.model.architecture.value

    @property
    def key(self) -> str:
        return f"{self.problem}/{self.model_name}/{self.param}"

    def datasets(self) -> List[DatasetSpec]:
        specs = [self.data]
        for task in self.evals:
            if task.data is not None and task.data not in specs:
                specs.append(task.data)
        return specs


# ---------------------------------------------------------------------------
# planning


def models_for(cfg: ExperimentConfig, problem: str, with_baseline: bool = True) -> List[str]:
    """Configured models, plus the exact-rule baseline when the problem has one."""
    models = list(cfg.models)
    exact = Architecture.EXACT.value
    if with_baseline and cfg.exact_baselines and PROBLEMS[problem].exact_rule and exact not in models:
        models.append(exact)
    return models


def _shifted_evals(cfg: ExperimentConfig, problem: str, arch: str, direction: int) -> Tuple[EvalTask, ...]:
    data = cfg.dataset_spec(problem)
    k_min, k_max = cfg.base_band(problem)
    grid = cfg.eval_size if Architecture(arch) is Architecture.FNO else None
    evals = []
    for dk in cfg.shifts:
        shifted = with_band(data, k_min + direction * dk, k_max + direction * dk)
        evals.append(EvalTask(f"dk={dk}", "test_error", shifted, cfg.eval_size, grid))
    return tuple(evals)


def _plan_base(cfg: ExperimentConfig) -> List[TrainJob]:
    jobs = []
    for problem in cfg.problems:
        for arch in models_for(cfg, problem):
            if cfg.kind is ExperimentKind.SUPERRES:
                evals = _shifted_evals(cfg, problem, arch, +1)
            elif cfg.kind is ExperimentKind.LOWFREQ:
                evals = _shifted_evals(cfg, problem, arch, -1)
            else:
                evals = (EvalTask(BASE_PARAM, "test_error"),)
            jobs.append(TrainJob(
                index=len(jobs),
                problem=problem,
                model=cfg.model_spec(arch, problem),
                train_config=cfg.train_config(),
                data=cfg.dataset_spec(problem),
                n_train=cfg.n_train,
                evals=evals,
            ))
    return jobs


def _plan_aliasing(cfg: ExperimentConfig) -> List[TrainJob]:
    jobs = []
    sizes = sorted(cfg.grid_sizes)
    for problem in cfg.problems:
        for arch in models_for(cfg, problem, with_baseline=False):
            for n in sizes:
                param = f"grid={n}"
                evals = [EvalTask(param, "test_error"), EvalTask(param, "discrepancy", grid_size=n)]
                if n == sizes[0]:
                    evals += [EvalTask(f"grid={m}", "grid_error", grid_size=m) for m in sizes]
                jobs.append(TrainJob(
                    index=len(jobs),
                    problem=problem,
                    model=cfg.model_spec(arch, problem, grid_size=n),
                    train_config=cfg.train_config(),
                    data=cfg.dataset_spec(problem),
                    n_train=cfg.n_train,
                    param=param,
                    evals=tuple(evals),
                ))
    return jobs


def _plan_init_sensitivity(cfg: ExperimentConfig) -> List[TrainJob]:
    jobs = []
    for problem in cfg.problems:
        for arch in models_for(cfg, problem, with_baseline=False):
            for seed in cfg.seeds:
                param = f"seed={seed}"
                jobs.append(TrainJob(
                    index=len(jobs),
                    problem=problem,
                    model=cfg.model_spec(arch, problem),
                    train_config=cfg.train_config(seed),
                    data=cfg.dataset_spec(problem),
                    n_train=cfg.n_train,
                    param=param,
                    evals=(EvalTask(param, "test_error"),),
                ))
    return jobs


def plan_jobs(cfg: ExperimentConfig) -> List[TrainJob]:
    """All jobs of an experiment, in a fixed order."""
    if cfg.kind is ExperimentKind.ALIASING_STUDY:
        return _plan_aliasing(cfg)
    if cfg.kind is ExperimentKind.INIT_SENSITIVITY:
        return _plan_init_sensitivity(cfg)
    return _plan_base(cfg)


# ---------------------------------------------------------------------------
# evaluation


def evaluation_model(spec: ModelSpec, eval_size: Optional[int] = None, grid_size: Optional[int] = None) -> Model:
    """
    The trained architecture evaluated on another grid. Only the FNO input
    grid can change; the other parameter shapes depend on their grid.
    """
    changes = {}
    if eval_size is not None:
        changes["eval_size"] = eval_size
    if grid_size is not None and spec.architecture is Architecture.FNO:
        changes["grid_size"] = grid_size
    return build_model(replace(spec, **changes) if changes else spec)


def model_error(model: Model, params: Dict[str, np.ndarray], data: Dataset) -> float:
    """Mean relative L2 error of ``model`` on ``data``, on the uniform evaluation grid."""
    x = model.prepare(data.inputs)
    y = prepare_targets(data.targets, model.spec.eval_size)
    return relative_l2_loss(model.predict(params, x), y)


def _fine_grid_inputs(data: Dataset, coarse: int) -> List[GridFunction]:
    fine = []
    for s in data.inputs:
        g = interpolate_to_grid(s, (DISCREPANCY_RATIO * coarse,) * s.dim, (Grid.UNIFORM,) * s.dim)
        fine.append(GridFunction(g.grids, g.values.real))
    return fine


def run_eval(
    job: TrainJob, task: EvalTask, params: Dict[str, np.ndarray], datasets: Dict[DatasetSpec, Dataset]
) -> List[Tuple[str, str, float]]:
    """(param, metric, value) rows of one evaluation."""
    _, test = datasets[task.data or job.data].split(job.n_train)
    if task.metric in ("test_error", "grid_error"):
        model = evaluation_model(job.model, task.eval_size, task.grid_size)
        return [(task.param, task.metric, model_error(model, params, test))]
    if task.metric == "discrepancy":
        operator = series_operator(build_model(job.model), params)
        stats = operator_grid_discrepancy(operator, _fine_grid_inputs(test, task.grid_size), ratio=DISCREPANCY_RATIO)
        return [
            (task.param, "discrepancy_mean", stats.mean),
            (task.param, "discrepancy_median", stats.median),
            (task.param, "discrepancy_max", stats.max),
        ]
    raise ValueError(f"unknown evaluation metric {task.metric!r}")


def summarize(cfg: ExperimentConfig, records: Sequence[ResultRecord]) -> List[ResultRecord]:
    """
    Per-experiment summary rows. The initialization study reports mean and
    population standard deviation of the test error over seeds, and flags
    right skew when mean - std < 0.
    """
    if cfg.kind is not ExperimentKind.INIT_SENSITIVITY:
        return []
    summary = []
    groups: Dict[Tuple[str, str], List[float]] = {}
    for r in records:
        if r.metric == "test_error":
            groups.setdefault((r.model, r.problem), []).append(r.value)
    for (model, problem), values in groups.items():
        errors = np.asarray(values)
        mean = float(np.mean(errors))
        std = float(np.std(errors))
        skewed = mean - std < 0
        if skewed:
            logger.warning(f"{model} on {problem}: error distribution skewed to the right ({mean:.3e} +- {std:.3e})")
        summary += [
            ResultRecord(cfg.experiment_id, model, problem, "seeds", "mean", mean),
            ResultRecord(cfg.experiment_id, model, problem, "seeds", "std", std),
            ResultRecord(cfg.experiment_id, model, problem, "seeds", "right_skew", float(skewed)),
        ]
    return summary
