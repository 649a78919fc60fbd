"""
Experiment configuration.

All randomness derives from ``seed``: every dataset is generated with it
(samples are keyed by (seed, index)), and each model is initialized and
batched with it. Initialization-sensitivity runs replace the model seed by
each entry of ``seeds`` and keep the datasets fixed.
"""

import logging
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from ..errors import ConfigError
from ..nets.models import Architecture, ModelSpec
from ..nets.training import TrainConfig
from ..problems.datasets import PROBLEMS, DatasetSpec
from ..spectral.aliasing import Activation
from ..utils.config_parser import ConfigParser

logger = logging.getLogger(__name__)

LOWFREQ_BAND = (15, 25)

# ExperimentConfig fields forwarded to ModelSpec when set
MODEL_KEYS = (
    "n_coeffs",
    "width",
    "width_fourier",
    "features",
    "n1_layers",
    "n2_layers",
    "grid_size",
    "modes",
    "fno_width",
    "fno_layers",
    "branch_width",
    "branch_layers",
    "trunk_width",
    "trunk_layers",
    "activation",
    "real_weights",
)

DATASET_KEYS = ("sigma", "size", "time_nodes", "dt", "burgers_harmonics", "elliptic_n", "elliptic_2d_n")

_TUPLE_FIELDS = ("models", "problems", "seeds", "shifts", "grid_sizes")


class ExperimentKind(str, Enum):
    BENCHMARK = "benchmark"
    SUPERRES = "superres"
    LOWFREQ = "lowfreq"
    ALIASING_STUDY = "aliasing_study"
    INIT_SENSITIVITY = "init_sensitivity"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: what to train, on what, and how to evaluate it."""

    kind: ExperimentKind = ExperimentKind.BENCHMARK
    name: Optional[str] = None
    models: Tuple[str, ...] = ("SNO_F",)
    problems: Tuple[str, ...] = ("derivative_10",)
    exact_baselines: bool = True

    # data
    n_train: int = 200
    n_test: int = 100
    seed: int = 0
    k_min: Optional[int] = None
    k_max: Optional[int] = None
    sigma: float = 2.0
    size: int = 64
    time_nodes: int = 16
    dt: float = 1e-4
    burgers_harmonics: int = 100
    elliptic_n: int = 64
    elliptic_2d_n: int = 24

    # training
    lr: float = 1e-3
    decay_factor: float = 0.5
    decay_interval: int = 2000
    epochs: int = 2000
    batch_size: Optional[int] = None
    log_every: int = 100

    # model sizes (None keeps the ModelSpec default)
    n_coeffs: Optional[int] = None
    width: Optional[int] = None
    width_fourier: Optional[int] = None
    features: Optional[int] = None
    n1_layers: Optional[int] = None
    n2_layers: Optional[int] = None
    grid_size: Optional[int] = None
    modes: Optional[int] = None
    fno_width: Optional[int] = None
    fno_layers: Optional[int] = None
    branch_width: Optional[int] = None
    branch_layers: Optional[int] = None
    trunk_width: Optional[int] = None
    trunk_layers: Optional[int] = None
    activation: Optional[str] = None
    real_weights: Optional[bool] = None

    # evaluation
    eval_size: int = 100
    shifts: Tuple[int, ...] = (0, 2, 4, 6, 8, 10)
    grid_sizes: Tuple[int, ...] = (33, 65, 99)
    seeds: Tuple[int, ...] = (0, 1, 2, 3, 4)

    # output
    output: Optional[str] = None
    data_dir: Optional[str] = None
    save_checkpoints: bool = False
    record_timings: bool = False
    workers: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ExperimentKind(self.kind))
        except ValueError as e:
            kinds = ", ".join(k.value for k in ExperimentKind)
            raise ConfigError(f"unknown experiment kind {self.kind!r}; known: {kinds}") from e
        for name in _TUPLE_FIELDS:
            value = getattr(self, name)
            if isinstance(value, (str, int)):
                value = (value,)
            object.__setattr__(self, name, tuple(value))
        self.validate()

    @property
    def experiment_id(self) -> str:
        return self.name or self.kind.value

    # ------------------------------------------------------------------
    # validation

    def validate(self) -> None:
        """
        Raises:
            ConfigError: unknown model or problem, bad sizes, or a band the
                training or evaluation grid cannot resolve
        """
        for m in self.models:
            try:
                Architecture(m)
            except ValueError as e:
                known = ", ".join(a.value for a in Architecture)
                raise ConfigError(f"unknown model {m!r}; known: {known}") from e
        for p in self.problems:
            if p not in PROBLEMS:
                raise ConfigError(f"unknown problem {p!r}")
        if not self.models or not self.problems:
            raise ConfigError("at least one model and one problem are required")
        if self.n_train < 1 or self.n_test < 1:
            raise ConfigError("n_train and n_test must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.activation is not None:
            try:
                Activation(self.activation)
            except ValueError as e:
                raise ConfigError(f"unknown activation {self.activation!r}") from e
        if (self.k_min is None) != (self.k_max is None):
            raise ConfigError("k_min and k_max must be given together")
        if self.k_min is not None and not 0 <= self.k_min <= self.k_max:
            raise ConfigError(f"invalid band [{self.k_min}, {self.k_max}]")

        for p in self.problems:
            band = self.base_band(p)
            if band is None:
                if self.kind in (ExperimentKind.SUPERRES, ExperimentKind.LOWFREQ):
                    raise ConfigError(f"{self.kind.value} needs a problem with a random input band, got {p!r}")
                continue
            floor = PROBLEMS[p].band[0]
            if band[0] < floor:
                raise ConfigError(f"{p} needs inputs from harmonic {floor} up, got band {list(band)}")
            n = self.train_grid_size
            if n < 2 * band[1] + 1:
                raise ConfigError(f"train grid N={n} cannot resolve harmonic {band[1]} of {p} (N >= {2 * band[1] + 1})")

        if self.kind is ExperimentKind.SUPERRES:
            self._validate_superres()
        elif self.kind is ExperimentKind.LOWFREQ:
            self._validate_lowfreq()
        elif self.kind is ExperimentKind.ALIASING_STUDY:
            if not self.grid_sizes or min(self.grid_sizes) < 2:
                raise ConfigError("aliasing_study needs grid sizes >= 2")
            for p in self.problems:
                band = self.base_band(p)
                if band is not None and min(self.grid_sizes) < 2 * band[1] + 1:
                    raise ConfigError(f"grid {min(self.grid_sizes)} cannot resolve harmonic {band[1]} of {p}")
            if Architecture.FNO.value in self.models:
                modes = self.modes if self.modes is not None else ModelSpec().modes
                if min(self.grid_sizes) < 2 * modes + 1:
                    raise ConfigError(f"FNO with {modes} modes needs grids of at least {2 * modes + 1} points")
        elif self.kind is ExperimentKind.INIT_SENSITIVITY:
            if not self.seeds:
                raise ConfigError("init_sensitivity needs a seed list")
            if len(set(self.seeds)) != len(self.seeds):
                raise ConfigError("seed list has duplicates")

    def _validate_superres(self) -> None:
        if not self.shifts or min(self.shifts) < 0:
            raise ConfigError("superres shifts must be non-negative")
        for p in self.problems:
            top = self.base_band(p)[1] + max(self.shifts)
            if self.eval_size < 2 * top + 1:
                raise ConfigError(
                    f"eval grid M={self.eval_size} is too coarse for harmonic {top} of {p} (M >= {2 * top + 1})"
                )

    def _validate_lowfreq(self) -> None:
        if not self.shifts or min(self.shifts) < 0:
            raise ConfigError("lowfreq shifts must be non-negative")
        for p in self.problems:
            k_min = self.base_band(p)[0]
            floor = PROBLEMS[p].band[0]
            if k_min - max(self.shifts) < floor:
                raise ConfigError(f"shift {max(self.shifts)} moves the band of {p} below harmonic {floor}")

    # ------------------------------------------------------------------
    # derived settings

    def base_band(self, problem: str) -> Optional[Tuple[int, int]]:
        """Training band of ``problem``: the configured band, the low-frequency default, or the problem's own."""
        if PROBLEMS[problem].band is None:
            return None
        if self.k_min is not None:
            return (self.k_min, self.k_max)
        if self.kind is ExperimentKind.LOWFREQ:
            return LOWFREQ_BAND
        return PROBLEMS[problem].band

    @property
    def train_grid_size(self) -> int:
        return self.grid_size if self.grid_size is not None else ModelSpec().grid_size

    def model_overrides(self) -> Dict[str, Any]:
        return {k: getattr(self, k) for k in MODEL_KEYS if getattr(self, k) is not None}

    def model_spec(self, architecture: str, problem: str, **changes) -> ModelSpec:
        definition = PROBLEMS[problem]
        overrides = self.model_overrides()
        overrides.update(eval_size=self.eval_size, exact_rule=definition.exact_rule or "none")
        overrides.update(changes)
        return ModelSpec.default(architecture, definition.dim, **overrides)

    def train_config(self, seed: Optional[int] = None) -> TrainConfig:
        return TrainConfig(
            lr=self.lr,
            decay_factor=self.decay_factor,
            decay_interval=self.decay_interval,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed if seed is None else seed,
            log_every=self.log_every,
        )

    def dataset_spec(self, problem: str, band: Optional[Tuple[int, int]] = None) -> DatasetSpec:
        """Train + test samples of ``problem``; ``band`` defaults to the base band."""
        band = band if band is not None else self.base_band(problem)
        options = {k: getattr(self, k) for k in DATASET_KEYS}
        return DatasetSpec(problem, count=self.n_train + self.n_test, seed=self.seed, band=band, **options)

    def output_path(self, results_dir: Union[str, Path] = "results") -> Path:
        if self.output:
            return Path(self.output)
        return Path(results_dir) / f"{self.experiment_id}.csv"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def keys(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls)) + ("band",)

    @classmethod
    def from_mapping(cls, values: Dict[str, Any], **overrides) -> "ExperimentConfig":
        """
        Build from parsed key-value settings. ``band = [a, b]`` sets k_min and k_max.

        Raises:
            ConfigError: unknown keys or invalid values
        """
        values = dict(values)
        values.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(values) - set(cls.keys())
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        band = values.pop("band", None)
        if band is not None:
            if not isinstance(band, (list, tuple)) or len(band) != 2:
                raise ConfigError(f"band must be [k_min, k_max], got {band!r}")
            values["k_min"], values["k_max"] = int(band[0]), int(band[1])
        try:
            return cls(**values)
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e)) from e

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides) -> "ExperimentConfig":
        values = ConfigParser(cls.keys()).parse_file(path)
        return cls.from_mapping(values, **overrides)

    def with_changes(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)
