"""
Benchmark dataset generation and persistence.

A dataset directory holds three files:

    manifest.json    problem id, generation settings, bases, per-sample metadata
    inputs.specf     stacked input series
    targets.specf    stacked target series

Every sample draws from its own generator seeded by (seed, sample index),
so the files do not depend on how many workers built them.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import SolverError, SpectralError
from ..spectral.io import load_series, save_series
from ..spectral.series import (
    Basis,
    CoeffSeries,
    Grid,
    GridFunction,
    analysis,
    analysis_matrix,
    fit_length,
    interpolate_to_grid,
)
from .closed_form import (
    ODE_OVERSAMPLE,
    BreatherParams,
    SolitonParams,
    TwoSolitonParams,
    field_series,
    kdv_soliton,
    kdv_two_soliton,
    km_breather,
    parametric_ode_solution,
    space_time_series,
    time_axis,
)
from .random_family import RandomFamilyParams, draw_coefficients, sample_rng, series_from_coefficients
from .solvers import burgers_solve, elliptic_solve_1d, elliptic_solve_2d
from .targets import EXACT_RULES

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
INPUTS_NAME = "inputs.specf"
TARGETS_NAME = "targets.specf"
BOUNDARY_WARN = 1e-6

Sample = Tuple[CoeffSeries, CoeffSeries, dict]


@dataclass(frozen=True)
class DatasetSpec:
    """
    Generation settings for one problem.

    ``band`` overrides the (k_min, k_max) input band of problems whose inputs
    come from the random family; ``size`` is the number of coefficients kept
    per spatial axis for targets that are not band-limited.
    """

    problem: str
    count: int = 200
    seed: int = 0
    band: Optional[Tuple[int, int]] = None
    sigma: float = 2.0
    size: int = 64
    time_nodes: int = 16
    dt: float = 1e-4
    burgers_harmonics: int = 100
    elliptic_n: int = 64
    elliptic_2d_n: int = 24

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}; known: {', '.join(sorted(PROBLEMS))}")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.band is not None:
            object.__setattr__(self, "band", tuple(int(k) for k in self.band))
        if self.size < 2 or self.time_nodes < 2:
            raise ValueError("size and time_nodes must be >= 2")

    @property
    def definition(self) -> "ProblemDef":
        return PROBLEMS[self.problem]

    def family(self) -> RandomFamilyParams:
        k_min, k_max = self.band if self.band is not None else self.definition.band
        return RandomFamilyParams(k_min=k_min, k_max=k_max, sigma=self.sigma, count=self.count, seed=self.seed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["band"] = list(self.band) if self.band is not None else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetSpec":
        d = dict(d)
        if d.get("band") is not None:
            d["band"] = tuple(d["band"])
        return cls(**d)


@dataclass(frozen=True)
class ProblemDef:
    """One benchmark problem: dimension, input family and the sample builder."""

    name: str
    dim: int
    build: Callable[[DatasetSpec, Sequence[int]], List[Sample]]
    band: Optional[Tuple[int, int]] = None
    exact_rule: Optional[str] = None
    settings: Callable[[DatasetSpec], dict] = field(default=lambda spec: {})


@dataclass
class Dataset:
    spec: DatasetSpec
    inputs: List[CoeffSeries]
    targets: List[CoeffSeries]
    metadata: dict

    def __len__(self) -> int:
        return len(self.inputs)

    def split(self, n_train: int) -> Tuple["Dataset", "Dataset"]:
        """First ``n_train`` samples for training, the rest for testing."""
        if not 0 < n_train < len(self):
            raise ValueError(f"cannot split {len(self)} samples at {n_train}")
        samples = self.metadata.get("samples", [])
        head = dict(self.metadata, samples=samples[:n_train])
        tail = dict(self.metadata, samples=samples[n_train:])
        return (
            Dataset(self.spec, self.inputs[:n_train], self.targets[:n_train], head),
            Dataset(self.spec, self.inputs[n_train:], self.targets[n_train:], tail),
        )


# ---------------------------------------------------------------------------
# sample builders


def _family_input(spec: DatasetSpec, index: int) -> CoeffSeries:
    params = spec.family()
    return series_from_coefficients(draw_coefficients(params, sample_rng(spec.seed, index)), params.k_min)


def _exact_builder(rule: str):
    op = EXACT_RULES[rule]

    def build(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
        out = []
        for i in indices:
            f = _family_input(spec, i)
            out.append((f, op(f), {}))
        return out

    return build


def _build_ode(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
    out = []
    for i in indices:
        f = _family_input(spec, i)
        out.append((f, parametric_ode_solution(f, n_out=spec.size), {}))
    return out


def _cheb_series(values: np.ndarray) -> CoeffSeries:
    return analysis(GridFunction((Grid.CHEBYSHEV,) * values.ndim, values))


def _elliptic_coefficient(g: CoeffSeries, n: int, scale: float) -> np.ndarray:
    gv = interpolate_to_grid(g, n + 1, Grid.CHEBYSHEV).values.real
    return scale * (np.tanh(gv) + 1.0) + 1.0


def _build_elliptic_1d(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
    n = spec.elliptic_n
    keep = min(spec.size, n + 1)
    out = []
    for i in indices:
        k = _elliptic_coefficient(_family_input(spec, i), n, 10.0)
        u = elliptic_solve_1d(k, n)
        out.append((fit_length(_cheb_series(k), keep), fit_length(_cheb_series(u.values), keep), {}))
    return out


def _build_elliptic_2d(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
    n = spec.elliptic_2d_n
    keep = min(spec.size, n + 1)
    params = spec.family()
    out = []
    for i in indices:
        rng = sample_rng(spec.seed, i)
        gx = series_from_coefficients(draw_coefficients(params, rng), params.k_min)
        gy = series_from_coefficients(draw_coefficients(params, rng), params.k_min)
        kx = _elliptic_coefficient(gx, n, 3.0)
        ky = _elliptic_coefficient(gy, n, 3.0)
        u = elliptic_solve_2d(kx, ky, n)
        k = _cheb_series(np.outer(kx, ky))
        out.append((fit_length(k, keep), fit_length(_cheb_series(u.values), keep), {}))
    return out


def _energy_non_increasing(energy: np.ndarray, times: np.ndarray) -> bool:
    e = energy[np.argsort(times)]
    return bool(np.all(np.diff(e) <= 1e-10 * max(e[0], 1e-300)))


def _burgers_builder(nu: float, dim: int):
    def build(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
        inputs = [_family_input(spec, i) for i in indices]
        if dim == 1:
            times = np.linspace(0.0, 1.0, 5)
        else:
            times = time_axis(spec.time_nodes, 1.0)
        try:
            traj = burgers_solve(inputs, nu, times, dt=spec.dt, n_harmonics=spec.burgers_harmonics)
        except SolverError:
            for i, f in zip(indices, inputs):
                try:
                    burgers_solve(f, nu, times, dt=spec.dt, n_harmonics=spec.burgers_harmonics)
                except SolverError as e:
                    raise SolverError(f"sample {i}: {e}") from e
            raise

        out = []
        A = analysis_matrix(Grid.CHEBYSHEV, len(times))
        for b, (i, f) in enumerate(zip(indices, inputs)):
            energy = traj.energy[b]
            if not _energy_non_increasing(energy, times):
                logger.warning(f"Burgers sample {i}: energy increased between snapshots")
            meta = {"energy": [float(e) for e in energy]}
            if dim == 1:
                out.append((f, traj.snapshots[b][-1], meta))
                continue
            values = np.stack([s.coeffs for s in traj.snapshots[b]], axis=1)
            target = CoeffSeries((Basis.FOURIER, Basis.CHEBYSHEV), values @ A.T)
            source = CoeffSeries((Basis.FOURIER, Basis.CHEBYSHEV), f.coeffs[:, None])
            out.append((source, target, meta))
        return out

    return build


def _boundary_value(field_fn, t) -> float:
    return float(np.max(np.abs(field_fn(np.array([-1.0, 1.0]), t))))


def _wave_builder(draw, field_fn, t_final: float, dim: int, x_grid: Grid = Grid.UNIFORM):
    """Builder for closed-form fields: u(., 0) -> u(., t_final) or the full space-time field."""

    def build(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
        if x_grid is Grid.UNIFORM:
            n_x = ODE_OVERSAMPLE * (2 * spec.size - 1)
        else:
            n_x = ODE_OVERSAMPLE * spec.size
        x_basis = Basis.FOURIER if x_grid is Grid.UNIFORM else Basis.CHEBYSHEV
        out = []
        for i in indices:
            params = draw(sample_rng(spec.seed, i))
            fn = lambda x, t, p=params: field_fn(p, x, t)
            boundary = max(_boundary_value(fn, 0.0), _boundary_value(fn, t_final))
            if x_grid is Grid.UNIFORM and boundary > BOUNDARY_WARN:
                logger.warning(f"{spec.problem} sample {i}: field is {boundary:.2e} at the boundary")
            meta = {"params": asdict(params), "max_boundary_value": boundary}

            initial = fit_length(field_series(lambda x: fn(x, 0.0), (x_grid,), (n_x,)), spec.size)
            if dim == 1:
                final = fit_length(field_series(lambda x: fn(x, t_final), (x_grid,), (n_x,)), spec.size)
                out.append((initial, final, meta))
                continue
            n_t = ODE_OVERSAMPLE * spec.time_nodes
            target = space_time_series(fn, t_final, x_grid, n_x, n_t)
            source = CoeffSeries((x_basis, Basis.CHEBYSHEV), initial.coeffs[:, None])
            out.append((source, fit_length(target, (spec.size, spec.time_nodes)), meta))
        return out

    return build


def _burgers_settings(nu: float):
    return lambda spec: {"nu": nu, "dt": spec.dt, "harmonics": spec.burgers_harmonics, "t_final": 1.0}


def _wave_settings(t_final: float):
    return lambda spec: {"t_final": t_final, "oversample": ODE_OVERSAMPLE}


def _problem_table() -> Dict[str, ProblemDef]:
    defs = [
        ProblemDef("identity", 1, _exact_builder("identity"), (0, 10), "identity"),
        ProblemDef("integration", 1, _exact_builder("integrate"), (1, 10), "integrate"),
        ProblemDef("shift_product", 1, _exact_builder("shift_product"), (0, 15), "shift_product"),
        ProblemDef("derivative_10", 1, _exact_builder("differentiate"), (0, 10), "differentiate"),
        ProblemDef("derivative_20", 1, _exact_builder("differentiate"), (0, 20), "differentiate"),
        ProblemDef(
            "parametric_ode", 1, _build_ode, (1, 30),
            settings=lambda spec: {"oversample": ODE_OVERSAMPLE},
        ),
        ProblemDef(
            "elliptic_1d", 1, _build_elliptic_1d, (0, 20),
            settings=lambda spec: {"n": spec.elliptic_n, "k": "10 (tanh g + 1) + 1", "forcing": 1.0},
        ),
        ProblemDef(
            "elliptic_2d", 2, _build_elliptic_2d, (0, 20),
            settings=lambda spec: {"n": spec.elliptic_2d_n, "k": "3 (tanh g + 1) + 1", "forcing": 1.0},
        ),
    ]
    for nu in (0.1, 0.01):
        for dim in (1, 2):
            defs.append(ProblemDef(f"burgers_{dim}d_nu{nu}", dim, _burgers_builder(nu, dim), (0, 20),
                                   settings=_burgers_settings(nu)))
    for dim in (1, 2):
        defs.append(ProblemDef(f"kdv_{dim}d", dim, _wave_builder(SolitonParams.draw, kdv_soliton, 0.001, dim),
                               settings=_wave_settings(0.001)))
        defs.append(ProblemDef(f"two_solitons_{dim}d", dim,
                               _wave_builder(TwoSolitonParams.draw, kdv_two_soliton, 0.005, dim),
                               settings=_wave_settings(0.005)))
    defs.append(ProblemDef("breather_2d", 2, _wave_builder(BreatherParams.draw, km_breather, 5.0, 2, Grid.CHEBYSHEV),
                           settings=_wave_settings(5.0)))
    return {d.name: d for d in defs}


PROBLEMS: Dict[str, ProblemDef] = _problem_table()


def problem_ids(include_identity: bool = False) -> List[str]:
    """Benchmark problem ids in table order."""
    return [p for p in PROBLEMS if include_identity or p != "identity"]


# ---------------------------------------------------------------------------
# build / save / load


def _common_shape(items: List[CoeffSeries]) -> Tuple[int, ...]:
    return tuple(max(s.shape[a] for s in items) for a in range(items[0].dim))


def _build_chunk(spec: DatasetSpec, indices: Sequence[int]) -> List[Sample]:
    try:
        return spec.definition.build(spec, indices)
    except SolverError as e:
        if str(e).startswith("sample "):
            raise
        raise SolverError(f"samples {indices[0]}..{indices[-1]}: {e}") from e


def build_dataset(spec: DatasetSpec, out_dir: Optional[Union[str, Path]] = None, workers: int = 1) -> Dataset:
    """
    Generate ``spec.count`` samples of ``spec.problem``.

    Args:
        spec: generation settings
        out_dir: if given, the dataset is also written there
        workers: thread count; the result does not depend on it

    Returns:
        Dataset with inputs, targets and manifest metadata

    Raises:
        SolverError: a reference solver failed (message names the sample)
    """
    definition = spec.definition
    chunks = [c.tolist() for c in np.array_split(np.arange(spec.count), max(1, min(workers, spec.count)))]
    logger.info(f"Building {spec.count} samples of {spec.problem} (seed {spec.seed}, {len(chunks)} chunk(s))")

    results: Dict[int, List[Sample]] = {}
    if len(chunks) == 1:
        results[0] = _build_chunk(spec, chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
            future_to_chunk = {executor.submit(_build_chunk, spec, chunk): j for j, chunk in enumerate(chunks)}
            for future in as_completed(future_to_chunk):
                results[future_to_chunk[future]] = future.result()

    samples = [s for j in sorted(results) for s in results[j]]
    inputs = [s[0] for s in samples]
    targets = [s[1] for s in samples]
    in_shape, out_shape = _common_shape(inputs), _common_shape(targets)
    inputs = [fit_length(s, in_shape) for s in inputs]
    targets = [fit_length(s, out_shape) for s in targets]

    metadata = {
        "problem": spec.problem,
        "dim": definition.dim,
        "count": spec.count,
        "seed": spec.seed,
        "spec": spec.to_dict(),
        "input_bases": [b.value for b in inputs[0].bases],
        "target_bases": [b.value for b in targets[0].bases],
        "input_shape": list(in_shape),
        "target_shape": list(out_shape),
        "exact_rule": definition.exact_rule,
        "solver": definition.settings(spec),
        "samples": [s[2] for s in samples],
    }
    dataset = Dataset(spec, inputs, targets, metadata)
    logger.info(f"Dataset {spec.problem}: inputs {in_shape}, targets {out_shape}")
    if out_dir is not None:
        save_dataset(dataset, out_dir)
    return dataset


def save_dataset(dataset: Dataset, out_dir: Union[str, Path]) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8") as f:
        json.dump(dataset.metadata, f, indent=2, sort_keys=True)
        f.write("\n")
    save_series(out_dir / INPUTS_NAME, dataset.inputs)
    save_series(out_dir / TARGETS_NAME, dataset.targets)
    logger.info(f"Saved {len(dataset)} samples to {out_dir}")
    return out_dir


def load_dataset(directory: Union[str, Path]) -> Dataset:
    """Read a dataset directory written by :func:`save_dataset`."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise SpectralError(f"{directory}: no {MANIFEST_NAME}")
    with open(manifest_path, encoding="utf-8") as f:
        metadata = json.load(f)
    inputs = load_series(directory / INPUTS_NAME)
    targets = load_series(directory / TARGETS_NAME)
    if not len(inputs) == len(targets) == metadata["count"]:
        raise SpectralError(
            f"{directory}: manifest says {metadata['count']} samples, "
            f"found {len(inputs)} inputs and {len(targets)} targets"
        )
    return Dataset(DatasetSpec.from_dict(metadata["spec"]), inputs, targets, metadata)


def with_band(spec: DatasetSpec, k_min: int, k_max: int, **changes) -> DatasetSpec:
    """Copy of ``spec`` drawing inputs from another band."""
    return replace(spec, band=(k_min, k_max), **changes)
