"""Tests for ExperimentConfig in src/experiments/config.py."""
from pathlib import Path

import pytest

from src.errors import ConfigError
from src.experiments.config import ExperimentConfig, ExperimentKind
from src.nets.models import Architecture
from src.spectral.aliasing import Activation

CONFIG_DIR = Path(__file__).parent.parent / "configs"


class TestValidation:
    """Test config validation."""

    def test_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.kind is ExperimentKind.BENCHMARK
        assert cfg.experiment_id == "benchmark"
        assert cfg.models == ("SNO_F",)

    def test_scalar_lists(self):
        cfg = ExperimentConfig(models="FNO", seeds=3)
        assert cfg.models == ("FNO",) and cfg.seeds == (3,)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="tabulate")

    def test_unknown_model(self):
        with pytest.raises(ConfigError, match="unknown model"):
            ExperimentConfig(models=("SNO_X",))

    def test_unknown_problem(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(problems=("heat",))

    def test_unknown_activation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(activation="gelu")

    def test_half_band(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(k_min=1)

    def test_train_grid_resolves_band(self):
        with pytest.raises(ConfigError, match="train grid"):
            ExperimentConfig(grid_size=20)
        ExperimentConfig(grid_size=21)

    def test_band_below_problem_floor(self):
        with pytest.raises(ConfigError, match="harmonic 1"):
            ExperimentConfig(problems=("integration",), k_min=0, k_max=10)
        ExperimentConfig(problems=("derivative_10",), k_min=0, k_max=10)

    def test_superres_eval_grid(self):
        """M >= 2 (k_max + max shift) + 1."""
        ExperimentConfig(kind="superres", k_min=0, k_max=10, shifts=(0, 10), eval_size=41)
        with pytest.raises(ConfigError, match="eval grid"):
            ExperimentConfig(kind="superres", k_min=0, k_max=10, shifts=(0, 10), eval_size=40)

    def test_superres_needs_band(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="superres", problems=("kdv_1d",))

    def test_lowfreq_floor(self):
        ExperimentConfig(kind="lowfreq", problems=("integration",), shifts=(0, 14))
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="lowfreq", problems=("integration",), shifts=(0, 15))

    def test_aliasing_grids(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="aliasing_study", models=("FNO",), modes=16, grid_sizes=(24, 48))
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="aliasing_study", models=("SNO_F",), grid_sizes=(16,))

    def test_duplicate_seeds(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="init_sensitivity", seeds=(1, 1))


class TestDerived:
    """Test the specs derived from a config."""

    def test_lowfreq_default_band(self):
        cfg = ExperimentConfig(kind="lowfreq", problems=("integration",))
        assert cfg.base_band("integration") == (15, 25)
        assert ExperimentConfig().base_band("derivative_10") == (0, 10)
        assert ExperimentConfig().base_band("kdv_1d") is None

    def test_model_spec(self):
        cfg = ExperimentConfig(n_coeffs=16, activation="tanh", eval_size=64)
        spec = cfg.model_spec("SNO_Ch", "integration")
        assert spec.architecture is Architecture.SNO_CH
        assert spec.n_coeffs == 16 and spec.eval_size == 64
        assert spec.activation is Activation.TANH
        assert spec.exact_rule == "integrate"
        assert cfg.model_spec("FNO", "kdv_2d").dim == 2

    def test_dataset_spec(self):
        cfg = ExperimentConfig(n_train=10, n_test=5, seed=7, k_min=2, k_max=6)
        spec = cfg.dataset_spec("derivative_10")
        assert spec.count == 15 and spec.seed == 7 and spec.band == (2, 6)

    def test_train_config_seed(self):
        cfg = ExperimentConfig(seed=4, epochs=10)
        assert cfg.train_config().seed == 4
        assert cfg.train_config(9).seed == 9
        assert cfg.train_config().epochs == 10

    def test_output_path(self):
        assert ExperimentConfig(name="x").output_path("out") == Path("out") / "x.csv"
        assert ExperimentConfig(output="a/b.csv").output_path() == Path("a/b.csv")


class TestFromFile:
    """Test building configs from key-value files."""

    def test_band_key(self):
        cfg = ExperimentConfig.from_mapping({"kind": "lowfreq", "problems": "integration", "band": [10, 20]})
        assert (cfg.k_min, cfg.k_max) == (10, 20)

    def test_overrides(self):
        cfg = ExperimentConfig.from_mapping({"epochs": 5}, epochs=None, workers=3)
        assert cfg.epochs == 5 and cfg.workers == 3

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping({"epochz": 5})

    def test_bad_band(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping({"band": 5})

    def test_file_unknown_key(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("kind = benchmark\nlearning_rate = 0.1\n")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(path)

    @pytest.mark.parametrize("preset", sorted(p.name for p in CONFIG_DIR.glob("*.cfg")))
    def test_shipped_presets(self, preset):
        cfg = ExperimentConfig.from_file(CONFIG_DIR / preset)
        assert cfg.models and cfg.problems

    def test_presets_named_after_kind(self):
        for kind in ExperimentKind:
            assert ExperimentConfig.from_file(CONFIG_DIR / f"{kind.value}.cfg").kind is kind
        assert ExperimentConfig.from_file(CONFIG_DIR / "superres.cfg").eval_size == 300
