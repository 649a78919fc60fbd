#!/usr/bin/env python3
"""
Command-line entry point.

Subcommands:
    gen-data     generate a benchmark dataset directory
    train        train one model on one problem and save a .sno checkpoint
    eval         relative L2 error of a checkpoint on a dataset
    experiment   run an experiment protocol from a config file
    aliasing     aliasing error of an activation on an extreme harmonic

Run with ``python -m src.main <subcommand> --help``.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from .errors import ConfigError, SpectralError
from .experiments.config import ExperimentConfig, ExperimentKind
from .experiments.jobs import EvalTask, TrainJob, evaluation_model, model_error
from .experiments.protocols import PROTOCOLS
from .experiments.records import (
    ResultRecord,
    print_summary,
    records_to_frame,
    save_error_log,
    save_results_csv,
)
from .nets.checkpoint import load_checkpoint, save_checkpoint
from .nets.models import Architecture, build_model
from .nodes.prepare_data import DataPreparer
from .nodes.train_models import ModelTrainer
from .problems.datasets import PROBLEMS, DatasetSpec, build_dataset, load_dataset
from .spectral.aliasing import Activation, aliasing_error_refined
from .spectral.io import load_series
from .spectral.series import Basis, CoeffSeries

logger = logging.getLogger(__name__)

PROBLEM_ALIASES = {
    "derivative": "derivative_10",
    "integrate": "integration",
    "ode": "parametric_ode",
}


def setup_logging() -> None:
    """Configure the root logger from SNO_LOG_LEVEL and SNO_LOG_FILE."""
    level = os.getenv("SNO_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(os.getenv("SNO_LOG_FILE", "sno_experiments.log")),
            logging.StreamHandler()
        ]
    )


def results_dir() -> Path:
    return Path(os.getenv("SNO_RESULTS_DIR", "results"))


def data_dir() -> Path:
    return Path(os.getenv("SNO_DATA_DIR", "data"))


def default_workers() -> int:
    try:
        return max(1, int(os.getenv("SNO_WORKERS", "1")))
    except ValueError:
        logger.warning("SNO_WORKERS is not an integer; using 1 worker")
        return 1


def resolve_problem(name: str) -> str:
    problem = PROBLEM_ALIASES.get(name, name)
    if problem not in PROBLEMS:
        raise ConfigError(f"unknown problem {name!r}; known: {', '.join(PROBLEMS)}")
    return problem


def load_config(path: Optional[str], **overrides) -> ExperimentConfig:
    if path:
        return ExperimentConfig.from_file(path, **overrides)
    return ExperimentConfig.from_mapping({}, **overrides)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen_data(args) -> int:
    problem = resolve_problem(args.problem)
    band = tuple(args.band) if args.band else None
    spec = DatasetSpec(problem, count=args.count, seed=args.seed, band=band, size=args.size)
    out = Path(args.out) if args.out else data_dir() / f"{problem}_seed{args.seed}"
    dataset = build_dataset(spec, out, workers=args.workers or default_workers())
    print(f"Wrote {len(dataset)} samples of {problem} to {out}")
    return 0


def cmd_train(args) -> int:
    problem = resolve_problem(args.problem)
    overrides = {"models": [args.model], "problems": [problem], "seed": args.seed, "epochs": args.epochs}
    cfg = load_config(args.config, **overrides)

    if args.dataset:
        dataset = load_dataset(args.dataset)
        if dataset.spec.problem != problem:
            raise ConfigError(f"dataset {args.dataset} holds {dataset.spec.problem}, not {problem}")
    else:
        dataset = DataPreparer(cfg.data_dir).prepare(cfg.dataset_spec(problem))

    job = TrainJob(
        index=0,
        problem=problem,
        model=cfg.model_spec(args.model, problem),
        train_config=cfg.train_config(),
        data=dataset.spec,
        n_train=cfg.n_train,
        evals=(EvalTask("base", "test_error"),),
    )
    outcome = ModelTrainer({dataset.spec: dataset}).train_job(job)
    if outcome["error"]:
        logger.error(f"Training failed: {outcome['error']}")
        return 1

    _, test = dataset.split(cfg.n_train)
    test_error = model_error(build_model(job.model), outcome["params"], test)
    out = Path(args.out) if args.out else results_dir() / "checkpoints" / f"{problem}_{args.model}"
    path = save_checkpoint(out, build_model(job.model), outcome["params"], job.train_config,
                           outcome["epochs"], job.train_config.seed)

    print("\n" + "=" * 80)
    print("TRAINING SUMMARY")
    print("=" * 80)
    print(f"Model: {args.model}    Problem: {problem}")
    print(f"Train error: {outcome['train_error']:.4e}")
    print(f"Test error:  {test_error:.4e}")
    print(f"Checkpoint:  {path}")
    print("=" * 80)
    return 0


def cmd_eval(args) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    dataset = load_dataset(args.dataset)
    model = evaluation_model(ckpt.spec, args.eval_size)
    name = ckpt.spec.architecture.value
    param = Path(args.checkpoint).stem

    records = []
    if args.n_train:
        train, test = dataset.split(args.n_train)
        records.append(ResultRecord("eval", name, dataset.spec.problem, param, "train_error",
                                    model_error(model, ckpt.params, train)))
    else:
        test = dataset
    records.append(ResultRecord("eval", name, dataset.spec.problem, param, "test_error",
                                model_error(model, ckpt.params, test)))

    df = records_to_frame(records)
    if args.out:
        save_results_csv(records, args.out)
    print_summary(df[["model", "problem", "metric", "value"]], "CHECKPOINT EVALUATION")
    return 0


def cmd_experiment(args) -> int:
    overrides = {"kind": args.kind, "workers": args.workers or default_workers(), "data_dir": args.data_dir}
    cfg = load_config(args.config, **overrides)
    output = Path(args.out) if args.out else cfg.output_path(results_dir())
    df = PROTOCOLS[cfg.kind](cfg, output, verbose=True)
    failed = int((df["metric"] == "status").sum())
    if failed:
        logger.warning(f"{failed} run(s) failed; recorded as status rows")
    return 0


def extreme_harmonic(basis: Basis, band: int) -> CoeffSeries:
    """cos(pi N x) in the Fourier basis or T_N in the Chebyshev basis."""
    c = np.zeros(band + 1, dtype=complex if basis is Basis.FOURIER else float)
    c[band] = 0.5 if basis is Basis.FOURIER and band > 0 else 1.0
    return CoeffSeries((basis,), c)


def cmd_aliasing(args) -> int:
    activation = Activation(args.activation)
    inputs = []
    if args.input:
        for i, s in enumerate(load_series(args.input)):
            inputs.append((f"{Path(args.input).stem}[{i}]", s, args.band if args.band is not None else max(s.bands())))
    else:
        if args.band is None:
            raise ConfigError("--band is required without --input")
        basis = Basis(args.basis)
        inputs.append((f"{basis.value}_{args.band}", extreme_harmonic(basis, args.band), args.band))

    rows = []
    for input_id, f, band in inputs:
        report = aliasing_error_refined(f, activation, band, args.refine, args.oversample)
        rows.append(report.to_row(input_id))
    df = pd.DataFrame(rows)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(args.out, index=False)
        logger.info(f"Aliasing results saved to {args.out}")
    print(df.to_csv(index=False), end="")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="Spectral neural operators: datasets, training and experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Generate 8 derivative samples with seed 1
  python -m src.main gen-data derivative --seed 1 --count 8 --out data/deriv

  # Train SNO_F on the derivative problem with a config
  python -m src.main train --model SNO_F --problem derivative_10 --config configs/example.cfg

  # Evaluate a checkpoint on a dataset (first 200 samples count as training)
  python -m src.main eval --checkpoint results/checkpoints/derivative_10_SNO_F.sno --dataset data/deriv --n-train 200

  # Run the super-resolution test
  python -m src.main experiment superres --config configs/superres.cfg

  # Aliasing error of ReLU on cos(8 pi x)
  python -m src.main aliasing --activation relu --band 8
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a dataset directory")
    p.add_argument("problem", help="problem id (or alias: derivative, integrate, ode)")
    p.add_argument("--out", "-o", default=None, help="output directory (default: $SNO_DATA_DIR/<problem>_seed<seed>)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--band", type=int, nargs=2, metavar=("K_MIN", "K_MAX"), default=None)
    p.add_argument("--size", type=int, default=64, help="coefficients kept per axis for non-band-limited targets")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train one model and save a checkpoint")
    p.add_argument("--model", "-m", required=True, choices=[a.value for a in Architecture])
    p.add_argument("--problem", "-p", required=True)
    p.add_argument("--config", "-c", default=None, help="key-value config file")
    p.add_argument("--dataset", "-d", default=None, help="dataset directory (generated when omitted)")
    p.add_argument("--out", "-o", default=None, help="checkpoint path (.sno)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="relative L2 error of a checkpoint on a dataset")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--n-train", type=int, default=None, help="report train/test errors split at this index")
    p.add_argument("--eval-size", type=int, default=None, help="uniform evaluation grid size")
    p.add_argument("--out", "-o", default=None, help="results CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="run an experiment protocol")
    p.add_argument("kind", choices=[k.value for k in ExperimentKind])
    p.add_argument("--config", "-c", default=None, help="key-value config file")
    p.add_argument("--out", "-o", default=None, help="results CSV (default: $SNO_RESULTS_DIR/<name>.csv)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--data-dir", default=None, help="dataset cache directory")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("aliasing", help="aliasing error of an activation")
    p.add_argument("--activation", "-a", default="relu", choices=[a.value for a in Activation])
    p.add_argument("--band", "-N", type=int, default=None, help="resolution N (harmonic of the extreme input)")
    p.add_argument("--basis", default="fourier", choices=[b.value for b in Basis])
    p.add_argument("--oversample", type=int, default=None, help="pseudospectral oversampling factor")
    p.add_argument("--refine", "-k", type=int, default=1, help="grid refinement factor k")
    p.add_argument("--input", "-i", default=None, help=".specf file of inputs instead of the extreme harmonic")
    p.add_argument("--out", "-o", default=None, help="CSV output")
    p.set_defaults(func=cmd_aliasing)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function. Returns the process exit status."""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0

    setup_logging()
    errors = []
    try:
        return args.func(args)
    except (SpectralError, ConfigError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        errors.append(f"{args.command}: {e}")
        return 1
    except Exception as e:
        logger.error(f"Fatal error during {args.command}: {str(e)}", exc_info=True)
        errors.append(f"{args.command}: {e}")
        return 1
    finally:
        if errors:
            save_error_log(errors, results_dir() / "error_log.txt")


if __name__ == "__main__":
    sys.exit(main())
