"""
Aliasing introduced by pointwise activations on band-limited functions.

sigma(f) of a function resolved up to harmonic N generally has energy above
N. The relative aliasing error is the norm of that tail over the norm of
sigma(f), both in the natural L2 norm of the basis (Chebyshev weight
1/sqrt(1 - x^2), plain measure for Fourier).

Closed-form reference values: relu_extreme_aliasing() is the error of
ReLU(cos(pi N x)) on the coarsest grid that resolves it (about 0.307754),
relu_refined_reference(k) the error of ReLU(T_N) once the grid is refined k times.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from ..errors import GridError, SpectralError
from .series import (
    Basis,
    CoeffSeries,
    GridFunction,
    Grid,
    analysis,
    chop,
    energy_weights,
    interpolate_to_grid,
    synthesis,
    unpack,
)

logger = logging.getLogger(__name__)

# sum_{i>=2} p_i^2 for the Chebyshev series of ReLU on [-1, 1]
RELU_TAIL_FROM_2 = (np.pi ** 2 - 8.0) / (4.0 * np.pi ** 2)

DEFAULT_OVERSAMPLE = {"relu": 2048}
SMOOTH_OVERSAMPLE = 32

LAST_DECILE_TOLERANCE = 1e-8


class Activation(str, Enum):
    RELU = "relu"
    SOFTPLUS = "softplus"
    TANH = "tanh"
    IDENTITY = "identity"
    SQUARE = "square"

    def apply(self, y: np.ndarray) -> np.ndarray:
        if self is Activation.RELU:
            return np.maximum(y, 0.0)
        if self is Activation.SOFTPLUS:
            return np.logaddexp(0.0, y)
        if self is Activation.TANH:
            return np.tanh(y)
        if self is Activation.SQUARE:
            return y * y
        return y

    @property
    def positively_homogeneous(self) -> bool:
        return self in (Activation.RELU, Activation.IDENTITY)


@dataclass(frozen=True)
class AliasingReport:
    """Tail / total split of sigma(f) at band k * N."""

    tail_norm: float
    total_norm: float
    E_a: float
    band: int
    oversample: int
    tail_energies: np.ndarray = field(repr=False)
    resolved_norm: float = 0.0
    warning: bool = False

    def to_row(self, input_id: str) -> Dict[str, object]:
        return {
            "input_id": input_id,
            "N": self.band,
            "k": self.oversample,
            "E_a": self.E_a,
            "tail_norm": self.tail_norm,
            "total_norm": self.total_norm,
            "warning_flag": self.warning,
        }


def relu_cheb_coeff(i: int) -> float:
    """Chebyshev coefficient p_i of ReLU(x) on [-1, 1]."""
    if i < 0:
        raise ValueError("coefficient index must be >= 0")
    if i == 0:
        return 1.0 / np.pi
    if i == 1:
        return 0.5
    if i % 2 == 1:
        return 0.0
    sign = 1.0 if i % 4 == 0 else -1.0
    return 2.0 / np.pi * sign / (1.0 - i * i)


def relu_tail_energy(start: int) -> float:
    """sum_{i >= start} p_i^2, from the closed form of the i >= 2 sum."""
    if start <= 2:
        head = sum(relu_cheb_coeff(i) ** 2 for i in range(start, 2))
        return RELU_TAIL_FROM_2 + head
    partial = sum(relu_cheb_coeff(i) ** 2 for i in range(2, start, 2))
    return max(RELU_TAIL_FROM_2 - partial, 0.0)


def relu_extreme_aliasing() -> float:
    """
    Aliasing error of ReLU(cos(pi N x)) on the 2N+1 point uniform grid,
    (1/pi) sqrt(pi^2/2 - 4) ~= 0.307754.
    """
    p0, p1 = relu_cheb_coeff(0), relu_cheb_coeff(1)
    total = 2.0 * p0 ** 2 + p1 ** 2 + RELU_TAIL_FROM_2
    # ||ReLU(cos)||^2 on one period is half of ||cos||^2
    if abs(total - 0.5) > 1e-14:
        raise SpectralError(f"Parseval bookkeeping failed: {total} != 1/2")
    value = np.sqrt(np.pi ** 2 / 2.0 - 4.0) / np.pi
    logger.debug(f"aliasing constant {value:.9f}, tail/total {RELU_TAIL_FROM_2 / total:.9f}")
    return float(value)


def relu_refined_reference(k: int) -> float:
    """Aliasing error of ReLU(T_N) when the tail starts above k N."""
    if k < 1:
        raise ValueError("refinement factor must be >= 1")
    return float(np.sqrt(relu_tail_energy(k + 1) / 0.5))


def default_oversample(activation: Activation) -> int:
    return DEFAULT_OVERSAMPLE.get(Activation(activation).value, SMOOTH_OVERSAMPLE)


def _real_values(series: CoeffSeries) -> CoeffSeries:
    if series.real_signal or Basis.FOURIER not in series.bases:
        return series
    raise SpectralError("composition needs a real-valued function (real_signal Fourier packing)")


def compose_with_activation(
    f: CoeffSeries, activation: Activation, oversample: Optional[int] = None
) -> CoeffSeries:
    """
    Pseudospectral sigma(f): sample f on a grid ``oversample`` times finer than
    its band, apply sigma pointwise, analyse back.

    The returned series has the resolution of the fine grid. When the last
    tenth of its coefficients carries more than 1e-8 of the energy a warning
    is logged; :func:`tail_warning` exposes the same check.
    """
    activation = Activation(activation)
    f = _real_values(f)
    oversample = oversample or default_oversample(activation)
    if oversample < 1:
        raise ValueError("oversample factor must be >= 1")
    sizes = []
    for basis, band in zip(f.bases, f.bands()):
        band = max(band, 1)
        if basis is Basis.CHEBYSHEV:
            sizes.append(oversample * band + 1)
        else:
            sizes.append(2 * oversample * band)
    fine = interpolate_to_grid(f, sizes)
    values = activation.apply(fine.values.real)
    composed = analysis(GridFunction(fine.grids, values), real_signal=True)
    if tail_warning(composed):
        logger.warning(
            f"insufficient oversampling for {activation.value}: last-decile energy above {LAST_DECILE_TOLERANCE:g}"
        )
    return composed


def _shell_energies(series: CoeffSeries) -> np.ndarray:
    """Energy per shell s = max_axis |index| (shell = harmonic for D = 1)."""
    c = unpack(series)
    energy = energy_weights(series) * np.abs(c) ** 2
    index = np.zeros(c.shape, dtype=int)
    for axis, basis in enumerate(series.bases):
        n = c.shape[axis]
        if basis is Basis.FOURIER:
            idx = np.abs(np.arange(n) - (n - 1) // 2)
        else:
            idx = np.arange(n)
        shape = [1] * c.ndim
        shape[axis] = -1
        index = np.maximum(index, idx.reshape(shape))
    return np.bincount(index.ravel(), weights=energy.ravel())


def tail_warning(series: CoeffSeries) -> bool:
    shells = _shell_energies(series)
    total = shells.sum()
    if total == 0.0:
        return False
    start = int(np.floor(0.9 * shells.size))
    return bool(shells[start:].sum() > LAST_DECILE_TOLERANCE * total)


def aliasing_error_refined(
    f: CoeffSeries,
    activation: Activation,
    band: int,
    k: int = 1,
    oversample: Optional[int] = None,
) -> AliasingReport:
    """
    Relative aliasing error with the tail starting above harmonic k * band.

    Args:
        f: real band-limited input
        activation: pointwise nonlinearity
        band: resolution N of the grid f lives on
        k: grid refinement factor (k = 1 is the plain aliasing error)
        oversample: pseudospectral oversampling (activation default if None)

    Returns:
        AliasingReport with tail/total/resolved norms and per-harmonic tail energies
    """
    if k < 1:
        raise ValueError("refinement factor must be >= 1")
    if band < 0:
        raise ValueError("band must be >= 0")
    composed = compose_with_activation(f, activation, oversample)
    shells = _shell_energies(composed)
    cut = k * band
    tail = shells[cut + 1:]
    tail_energy = float(tail.sum())
    resolved_energy = float(shells[: cut + 1].sum())
    total_energy = tail_energy + resolved_energy
    total_norm = float(np.sqrt(total_energy))
    tail_norm = float(np.sqrt(tail_energy))
    E_a = tail_norm / total_norm if total_norm > 0.0 else 0.0
    return AliasingReport(
        tail_norm=tail_norm,
        total_norm=total_norm,
        E_a=min(E_a, 1.0),
        band=band,
        oversample=k,
        tail_energies=tail,
        resolved_norm=float(np.sqrt(resolved_energy)),
        warning=tail_warning(composed),
    )


def aliasing_error(
    f: CoeffSeries, activation: Activation, band: int, oversample: Optional[int] = None
) -> AliasingReport:
    """Relative aliasing error of sigma(f) on the band-N grid."""
    return aliasing_error_refined(f, activation, band, 1, oversample)


@dataclass(frozen=True)
class DiscrepancyStats:
    relative: List[float]
    mean: float
    median: float
    max: float


def _subsample(g: GridFunction, ratio: int) -> GridFunction:
    index = tuple(slice(None, None, ratio) for _ in g.grids)
    return GridFunction(g.grids, g.values[index])


def _spectral_project(g: GridFunction, sizes: Sequence[int]) -> GridFunction:
    series = analysis(g, real_signal=False)
    series = chop(series, tuple(m // 2 + 1 for m in sizes))
    return synthesis(series, tuple(sizes))


def operator_grid_discrepancy(
    operator: Callable[[GridFunction], GridFunction],
    inputs: Sequence[GridFunction],
    projection: str = "subsample",
    ratio: int = 2,
) -> DiscrepancyStats:
    """
    Relative gap between an operator applied on the coarse grid and its
    fine-grid output projected to the coarse grid.

    Args:
        operator: grid-to-grid map, output on the same grid as its input
        inputs: functions sampled on the fine uniform grid
        projection: "subsample" (coincident nodes) or "spectral" (Fourier truncation)
        ratio: coarse spacing over fine spacing

    Returns:
        DiscrepancyStats with per-input values and mean / median / max
    """
    if projection not in ("subsample", "spectral"):
        raise ValueError(f"unknown projection {projection!r}")
    relative = []
    for g in inputs:
        if any(gr is not Grid.UNIFORM for gr in g.grids):
            raise GridError("grid discrepancy needs uniform grids")
        if any(m % ratio for m in g.shape):
            raise GridError(f"fine grid {g.shape} and coarse grid are not nested (ratio {ratio})")
        coarse_out = operator(_subsample(g, ratio))
        fine_out = operator(g)
        coarse_shape = tuple(m // ratio for m in g.shape)
        if projection == "subsample":
            projected = _subsample(fine_out, ratio)
        else:
            projected = _spectral_project(fine_out, coarse_shape)
        reference = np.linalg.norm(projected.values)
        gap = np.linalg.norm(np.asarray(coarse_out.values) - projected.values)
        relative.append(float(gap / reference) if reference > 0 else float(gap))
    values = np.asarray(relative)
    return DiscrepancyStats(
        relative=relative,
        mean=float(values.mean()) if values.size else 0.0,
        median=float(np.median(values)) if values.size else 0.0,
        max=float(values.max()) if values.size else 0.0,
    )
