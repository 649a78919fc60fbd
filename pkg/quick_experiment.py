#!/usr/bin/env python3
"""
Quick experiment script - run a shipped preset with one command.

Usage:
    python quick_experiment.py                 # configs/benchmark.cfg
    python quick_experiment.py superres        # configs/superres.cfg
    python quick_experiment.py lowfreq 4       # configs/lowfreq.cfg with 4 workers
"""

import sys
from pathlib import Path

# Add the repository root to the path so the src package resolves
sys.path.insert(0, str(Path(__file__).parent))

from src.experiments.config import ExperimentConfig
from src.main import main

if __name__ == "__main__":
    preset = sys.argv[1] if len(sys.argv) > 1 else "benchmark"
    workers = sys.argv[2] if len(sys.argv) > 2 else "1"

    config_path = Path(__file__).parent / "configs" / f"{preset}.cfg"
    if not config_path.exists():
        available = ", ".join(sorted(p.stem for p in config_path.parent.glob("*.cfg")))
        print(f"Error: preset not found: {config_path}")
        print(f"   Available presets: {available}")
        sys.exit(2)

    cfg = ExperimentConfig.from_file(config_path)
    print(f"\nRunning preset: {preset} ({cfg.kind.value})")
    print(f"   Models:   {', '.join(cfg.models)}")
    print(f"   Problems: {', '.join(cfg.problems)}")
    print(f"   Workers:  {workers}\n")

    sys.exit(main(["experiment", cfg.kind.value, "--config", str(config_path), "--workers", workers]))
