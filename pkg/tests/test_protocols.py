"""Tests for the experiment protocols in src/experiments/protocols.py."""
import numpy as np
import pytest

from src.errors import TrainingDivergedError
from src.experiments.config import ExperimentConfig
from src.experiments.protocols import (
    curve,
    growth_factor,
    monotone_decreasing,
    run_aliasing_study,
    run_benchmark,
    run_init_sensitivity,
    run_lowfreq,
    run_superres,
)
from src.experiments.records import RESULT_COLUMNS

TINY = dict(
    n_train=6,
    n_test=4,
    epochs=3,
    n_coeffs=12,
    width=12,
    width_fourier=12,
    features=3,
    n2_layers=1,
    fno_width=4,
    fno_layers=1,
    modes=4,
    branch_width=8,
    branch_layers=2,
    trunk_width=8,
    trunk_layers=2,
    eval_size=32,
    k_min=1,
    k_max=5,
)


def rows(df, **where):
    for column, value in where.items():
        df = df[df[column] == value]
    return df


class TestExactBaselines:
    """Test the harness against the exact spectral rules."""

    def test_benchmark_exact_rows(self):
        cfg = ExperimentConfig(models=("Exact",), problems=("derivative_10", "integration", "identity"),
                               n_train=4, n_test=4, epochs=0)
        df = run_benchmark(cfg)
        assert list(df.columns) == RESULT_COLUMNS
        test = rows(df, metric="test_error")
        assert len(test) == 3
        assert (test["value"] < 1e-10).all()

    def test_superres_exact_passes(self):
        cfg = ExperimentConfig(models=("Exact",), problems=("derivative_10",), k_min=0, k_max=10,
                               shifts=(0, 10, 20, 40), eval_size=300, n_train=4, n_test=6, epochs=0)
        df = run_superres(cfg)
        values = curve(df, "Exact", "derivative_10")
        assert list(values.index) == [0, 10, 20, 40]
        assert (values < 1e-10).all()

    def test_lowfreq_exact_passes(self):
        cfg = ExperimentConfig(models=("Exact",), problems=("integration",), shifts=(0, 7, 14),
                               n_train=4, n_test=6, epochs=0)
        values = curve(run_lowfreq(cfg), "Exact", "integration")
        assert len(values) == 3 and (values < 1e-10).all()

    def test_superres_rejects_coarse_grid(self):
        from src.errors import ConfigError
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="superres", models=("Exact",), shifts=(0, 50), eval_size=100)


class TestTrainedRuns:
    """Test small trained runs end to end."""

    def test_benchmark_rows(self):
        cfg = ExperimentConfig(models=("SNO_F", "FNO", "DeepONet"), problems=("derivative_10",), **TINY)
        df = run_benchmark(cfg)
        for model in ("SNO_F", "FNO", "DeepONet", "Exact"):
            for metric in ("train_error", "test_error"):
                r = rows(df, model=model, metric=metric)
                assert len(r) == 1 and np.isfinite(r["value"].iloc[0])
        assert (df["seconds"] == 0.0).all()

    def test_reproducible_csv(self, tmp_path):
        cfg = ExperimentConfig(models=("SNO_Ch",), problems=("integration",), **TINY)
        run_benchmark(cfg, tmp_path / "a.csv")
        run_benchmark(cfg, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_workers_do_not_change_results(self):
        cfg = ExperimentConfig(models=("SNO_F", "FNO"), problems=("derivative_10", "integration"), **TINY)
        serial = run_benchmark(cfg)
        parallel = run_benchmark(cfg.with_changes(workers=3))
        assert serial.equals(parallel)

    def test_divergence_recorded(self, monkeypatch):
        def diverge(model, x, y, config, *args, **kwargs):
            raise TrainingDivergedError(7, float("nan"), {"w": 1e308})

        monkeypatch.setattr("src.nodes.train_models.train_loop", diverge)
        cfg = ExperimentConfig(models=("SNO_F",), problems=("derivative_10",), exact_baselines=False, **TINY)
        df = run_benchmark(cfg)
        assert len(df) == 1
        assert df["metric"].iloc[0] == "status" and np.isnan(df["value"].iloc[0])

    def test_superres_curve_shape(self):
        cfg = ExperimentConfig(models=("SNO_F",), problems=("derivative_10",), shifts=(0, 3), **TINY)
        df = run_superres(cfg)
        assert sorted(rows(df, model="SNO_F")["param"]) == ["base", "dk=0", "dk=3"]

    def test_init_sensitivity(self):
        cfg = ExperimentConfig(models=("SNO_F",), problems=("identity",), seeds=(0, 1, 2), **TINY)
        first = run_init_sensitivity(cfg)
        second = run_init_sensitivity(cfg)
        assert first.equals(second)
        per_seed = rows(first, metric="test_error")["value"].to_numpy()
        assert len(per_seed) == 3
        assert rows(first, metric="std")["value"].iloc[0] == pytest.approx(np.std(per_seed))
        assert rows(first, metric="mean")["value"].iloc[0] == pytest.approx(np.mean(per_seed))


class TestAliasingStudy:
    """Test grid discrepancy rows."""

    def test_series_interface_is_grid_independent(self):
        cfg = ExperimentConfig(models=("SNO_F",), problems=("derivative_10",), grid_sizes=(12, 24, 36), **TINY)
        df = run_aliasing_study(cfg)
        assert (rows(df, metric="discrepancy_max")["value"] < 1e-10).all()
        assert len(rows(df, metric="grid_error")) == 3

    def test_pointwise_network_follows_subsampling(self):
        cfg = ExperimentConfig(models=("DeepONet",), problems=("derivative_10",), grid_sizes=(12, 24), **TINY)
        df = run_aliasing_study(cfg)
        assert (rows(df, metric="discrepancy_max")["value"] < 1e-10).all()

    def test_fno_has_grid_discrepancy(self):
        cfg = ExperimentConfig(models=("FNO",), problems=("derivative_10",), grid_sizes=(12, 24), **TINY)
        df = run_aliasing_study(cfg)
        assert (rows(df, metric="discrepancy_mean")["value"] > 1e-8).all()


class TestCurveHelpers:
    """Test curve reading helpers."""

    def test_monotone_with_one_inversion(self):
        assert monotone_decreasing([0.3, 0.2, 0.25, 0.1])
        assert not monotone_decreasing([0.3, 0.35, 0.2, 0.25, 0.1])
        assert not monotone_decreasing([0.1, 0.2])

    def test_growth_factor(self):
        import pandas as pd
        assert growth_factor(pd.Series([0.1, 0.2, 0.5])) == pytest.approx(5.0)


@pytest.mark.slow
class TestDeskScale:
    """Desk-scale reproductions of the qualitative findings (minutes of CPU each)."""

    TRAIN = dict(n_train=200, n_test=100, lr=2e-3, decay_interval=1000, epochs=3000,
                 n_coeffs=32, width=32, width_fourier=32, features=10, fno_width=32)

    def test_sno_learns_derivative(self):
        cfg = ExperimentConfig(models=("SNO_F",), problems=("derivative_10",), **self.TRAIN)
        df = run_benchmark(cfg)
        assert rows(df, model="SNO_F", metric="test_error")["value"].iloc[0] < 0.05

    def test_superres_fails_for_trained_models(self):
        cfg = ExperimentConfig(models=("SNO_F", "FNO"), problems=("derivative_10",), k_min=0, k_max=10,
                               shifts=(0, 5, 10), grid_size=100, eval_size=300, **self.TRAIN)
        df = run_superres(cfg)
        for model in ("SNO_F", "FNO"):
            assert growth_factor(curve(df, model, "derivative_10")) >= 2
        assert (curve(df, "Exact", "derivative_10") < 1e-10).all()

    def test_lowfreq_fails_for_trained_models(self):
        cfg = ExperimentConfig(models=("SNO_F",), problems=("integration",), shifts=(0, 7, 14),
                               grid_size=100, **self.TRAIN)
        df = run_lowfreq(cfg)
        assert growth_factor(curve(df, "SNO_F", "integration")) >= 2
        assert (curve(df, "Exact", "integration") < 1e-10).all()

    def test_fno_discrepancy_decreases_with_grid(self):
        cfg = ExperimentConfig(models=("FNO",), problems=("derivative_10",), k_min=0, k_max=10,
                               grid_sizes=(33, 66, 99), **self.TRAIN)
        df = run_aliasing_study(cfg)
        assert monotone_decreasing(curve(df, "FNO", "derivative_10", "discrepancy_mean").to_list())

    def test_identity_low_variance(self):
        cfg = ExperimentConfig(models=("SNO_F",), problems=("identity",), seeds=(0, 1, 2, 3, 4), **self.TRAIN)
        df = run_init_sensitivity(cfg)
        mean = rows(df, metric="mean")["value"].iloc[0]
        std = rows(df, metric="std")["value"].iloc[0]
        assert std < 0.5 * mean
