"""Tests for the command-line interface in src/main.py."""
import numpy as np
import pandas as pd
import pytest

from src.main import extreme_harmonic, main, resolve_problem
from src.errors import ConfigError
from src.spectral.series import Basis

TINY_CONFIG = """
models = SNO_F
problems = derivative_10
band = [1, 5]
n_train = 4
n_test = 4
epochs = 3
n_coeffs = 12
width = 12
width_fourier = 12
features = 3
n2_layers = 1
eval_size = 32
"""


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SNO_LOG_FILE", str(tmp_path / "cli.log"))
    monkeypatch.setenv("SNO_RESULTS_DIR", str(tmp_path / "results"))
    monkeypatch.setenv("SNO_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.chdir(tmp_path)


def write_config(tmp_path, text, name="tiny.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestParser:
    """Test argument handling and exit codes."""

    def test_unknown_subcommand(self):
        assert main(["tabulate"]) == 2

    def test_missing_required(self):
        assert main(["train", "--problem", "derivative"]) == 2

    def test_bad_model_choice(self):
        assert main(["train", "--model", "SNO_X", "--problem", "derivative"]) == 2

    def test_unknown_problem(self, tmp_path):
        assert main(["gen-data", "heat", "--count", "2"]) == 1
        assert (tmp_path / "results" / "error_log.txt").exists()

    def test_aliases(self):
        assert resolve_problem("derivative") == "derivative_10"
        assert resolve_problem("ode") == "parametric_ode"
        with pytest.raises(ConfigError):
            resolve_problem("heat")


class TestGenData:
    """Test dataset generation from the command line."""

    def test_reproducible(self, tmp_path):
        for out in ("a", "b"):
            assert main(["gen-data", "derivative", "--seed", "1", "--count", "8", "--out", str(tmp_path / out)]) == 0
        for name in ("inputs.specf", "targets.specf", "manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_default_location(self, tmp_path):
        assert main(["gen-data", "integrate", "--count", "3"]) == 0
        assert (tmp_path / "data" / "integration_seed0" / "manifest.json").exists()


class TestTrainAndEval:
    """Test training a checkpoint and evaluating it."""

    def test_train_then_eval(self, tmp_path, capsys):
        cfg = write_config(tmp_path, TINY_CONFIG)
        ckpt = tmp_path / "ck" / "deriv"
        assert main(["train", "--model", "SNO_F", "--problem", "derivative", "--config", cfg, "--out", str(ckpt)]) == 0
        assert "TRAINING SUMMARY" in capsys.readouterr().out
        assert (tmp_path / "ck" / "deriv.sno").exists()

        data = tmp_path / "deriv_data"
        assert main(["gen-data", "derivative", "--count", "8", "--band", "1", "5", "--out", str(data)]) == 0
        out = tmp_path / "eval.csv"
        assert main(["eval", "--checkpoint", str(ckpt) + ".sno", "--dataset", str(data),
                     "--n-train", "4", "--out", str(out)]) == 0
        df = pd.read_csv(out)
        assert df["metric"].tolist() == ["train_error", "test_error"]
        assert np.isfinite(df["value"]).all()

    def test_eval_missing_checkpoint(self, tmp_path):
        assert main(["eval", "--checkpoint", str(tmp_path / "none.sno"), "--dataset", str(tmp_path)]) == 1


class TestExperiment:
    """Test running a protocol from a config file."""

    def test_superres_exact(self, tmp_path):
        cfg = write_config(tmp_path, "models = Exact\nproblems = derivative_10\nband = [0, 10]\n"
                                     "shifts = 0, 10, 20\neval_size = 200\nn_train = 4\nn_test = 4\nepochs = 0\n")
        out = tmp_path / "superres.csv"
        assert main(["experiment", "superres", "--config", cfg, "--out", str(out)]) == 0
        df = pd.read_csv(out)
        assert df.columns.tolist() == ["experiment", "model", "problem", "param", "metric", "value", "seconds"]
        test = df[df["metric"] == "test_error"]
        assert sorted(test["param"]) == ["dk=0", "dk=10", "dk=20"]
        assert (test["value"] < 1e-10).all()

    def test_default_output_path(self, tmp_path):
        cfg = write_config(tmp_path, "name = quick\nmodels = Exact\nproblems = identity\nn_train = 2\n"
                                     "n_test = 2\nepochs = 0\n")
        assert main(["experiment", "benchmark", "--config", cfg]) == 0
        assert (tmp_path / "results" / "quick.csv").exists()

    def test_invalid_config(self, tmp_path):
        cfg = write_config(tmp_path, "models = SNO_F\nepochz = 3\n")
        assert main(["experiment", "benchmark", "--config", cfg]) == 1


class TestAliasingCommand:
    """Test the aliasing subcommand."""

    def test_relu_extreme_harmonic(self, tmp_path):
        out = tmp_path / "alias.csv"
        assert main(["aliasing", "--activation", "relu", "--band", "8", "--out", str(out)]) == 0
        row = pd.read_csv(out).iloc[0]
        assert row["N"] == 8 and row["k"] == 1
        assert row["E_a"] == pytest.approx(np.sqrt(np.pi ** 2 / 2 - 4) / np.pi, abs=1e-5)

    def test_chebyshev_matches_fourier(self, tmp_path):
        for basis in ("fourier", "chebyshev"):
            assert main(["aliasing", "--band", "8", "--basis", basis, "--out", str(tmp_path / f"{basis}.csv")]) == 0
        fourier = pd.read_csv(tmp_path / "fourier.csv")["E_a"].iloc[0]
        chebyshev = pd.read_csv(tmp_path / "chebyshev.csv")["E_a"].iloc[0]
        assert fourier == pytest.approx(chebyshev, abs=1e-6)

    def test_band_required(self):
        assert main(["aliasing", "--activation", "relu"]) == 1

    def test_extreme_harmonic(self):
        f = extreme_harmonic(Basis.FOURIER, 4)
        assert f.coeffs[4] == 0.5 and np.count_nonzero(f.coeffs) == 1
        t = extreme_harmonic(Basis.CHEBYSHEV, 4)
        assert t.coeffs[4] == 1.0
