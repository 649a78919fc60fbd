"""
Experiment protocols and the helpers that read their results.

Each ``run_*`` function runs the workflow for one experiment kind and
returns the result rows as a DataFrame with the results-file columns.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from .config import ExperimentConfig, ExperimentKind
from .records import records_to_frame
from .workflow import run_experiment

logger = logging.getLogger(__name__)


def _run(cfg: ExperimentConfig, kind: ExperimentKind, output_csv, verbose: bool) -> pd.DataFrame:
    if cfg.kind is not kind:
        cfg = cfg.with_changes(kind=kind)
    state = run_experiment(cfg, output_csv, verbose)
    return records_to_frame(state["records"])


def run_benchmark(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = False
) -> pd.DataFrame:
    """Test error of every model on every problem, with exact-rule baselines."""
    return _run(cfg, ExperimentKind.BENCHMARK, output_csv, verbose)


def run_superres(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = False
) -> pd.DataFrame:
    """
    Train on the base band, evaluate on bands shifted up by each ``shifts``
    entry on the ``eval_size`` grid.
    """
    return _run(cfg, ExperimentKind.SUPERRES, output_csv, verbose)


def run_lowfreq(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = False
) -> pd.DataFrame:
    """Train on a high band ([15, 25] unless configured) and evaluate on bands shifted down."""
    return _run(cfg, ExperimentKind.LOWFREQ, output_csv, verbose)


def run_aliasing_study(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = False
) -> pd.DataFrame:
    """
    Per training grid size: test error and coarse/fine grid discrepancy.
    The model trained on the smallest grid is also evaluated on every
    larger input grid (``grid_error`` rows).
    """
    return _run(cfg, ExperimentKind.ALIASING_STUDY, output_csv, verbose)


def run_init_sensitivity(
    cfg: ExperimentConfig, output_csv: Optional[Union[str, Path]] = None, verbose: bool = False
) -> pd.DataFrame:
    """Test error per initialization seed plus mean, population std and a right-skew flag."""
    return _run(cfg, ExperimentKind.INIT_SENSITIVITY, output_csv, verbose)


PROTOCOLS = {
    ExperimentKind.BENCHMARK: run_benchmark,
    ExperimentKind.SUPERRES: run_superres,
    ExperimentKind.LOWFREQ: run_lowfreq,
    ExperimentKind.ALIASING_STUDY: run_aliasing_study,
    ExperimentKind.INIT_SENSITIVITY: run_init_sensitivity,
}


# ---------------------------------------------------------------------------
# reading results


def param_value(param: str) -> float:
    """Numeric part of a parameter point such as 'dk=4' or 'grid=33'."""
    return float(param.split("=", 1)[1])


def curve(df: pd.DataFrame, model: str, problem: str, metric: str = "test_error") -> pd.Series:
    """Metric values of one (model, problem) indexed by the numeric parameter, sorted."""
    rows = df[(df["model"] == model) & (df["problem"] == problem) & (df["metric"] == metric)]
    rows = rows[rows["param"].str.contains("=", regex=False)]
    values = pd.Series(rows["value"].to_numpy(), index=[param_value(p) for p in rows["param"]], name=metric)
    return values.sort_index()


def growth_factor(values: pd.Series) -> float:
    """Last value over first value of a curve."""
    first = values.iloc[0]
    return float(values.iloc[-1] / first) if first > 0 else float("inf")


def monotone_decreasing(values: Sequence[float], allowed_inversions: int = 1) -> bool:
    """True when the sequence ends below where it started and rises at most ``allowed_inversions`` times."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return True
    inversions = int(np.sum(np.diff(v) > 0))
    return bool(v[-1] < v[0] and inversions <= allowed_inversions)
