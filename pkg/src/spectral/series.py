"""
Truncated Chebyshev / Fourier series on [-1, 1]^D.

Two dual representations are kept side by side:

* ``CoeffSeries`` - coefficients of sum c_n f_n(x), with f_n = T_n (Chebyshev)
  or exp(i pi k x) (Fourier), one basis per axis;
* ``GridFunction`` - samples on a Chebyshev grid x_k = cos(k pi / n) (stored
  in descending order) or on the periodic uniform grid x_j = -1 + 2 j / m.

Fourier axes come in two storage modes. With ``real_signal=True`` only
k = 0..K is stored and the function is c_0 + sum_{k>=1} (c_k e_k + conj(c_k) e_{-k});
at most one Fourier axis may be packed this way. With ``real_signal=False``
the centered spectrum k = -K..K is stored.

Internally every operation unpacks to the centered complex form, where all
transforms are complex-linear and separable across axes.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft as sfft

from ..errors import BasisMismatchError, DomainError, GridError, SpectralError

logger = logging.getLogger(__name__)


class Basis(str, Enum):
    CHEBYSHEV = "chebyshev"
    FOURIER = "fourier"


class Grid(str, Enum):
    CHEBYSHEV = "chebyshev"
    UNIFORM = "uniform"


GRID_OF_BASIS = {Basis.CHEBYSHEV: Grid.CHEBYSHEV, Basis.FOURIER: Grid.UNIFORM}
BASIS_OF_GRID = {Grid.CHEBYSHEV: Basis.CHEBYSHEV, Grid.UNIFORM: Basis.FOURIER}

_DOMAIN_TOL = 1e-12


def _as_tuple(value, dim: int) -> tuple:
    if isinstance(value, (list, tuple)):
        if len(value) != dim:
            raise SpectralError(f"expected {dim} per-axis values, got {len(value)}")
        return tuple(value)
    return (value,) * dim


@dataclass(frozen=True)
class CoeffSeries:
    """Coefficients of a tensor-product Chebyshev/Fourier series."""

    bases: Tuple[Basis, ...]
    coeffs: np.ndarray
    real_signal: bool = True

    def __post_init__(self):
        bases = tuple(Basis(b) for b in (self.bases if isinstance(self.bases, (list, tuple)) else (self.bases,)))
        coeffs = np.array(self.coeffs, dtype=np.complex128)
        if coeffs.ndim != len(bases):
            raise SpectralError(f"coefficient tensor has {coeffs.ndim} axes but {len(bases)} bases were given")
        if any(n < 1 for n in coeffs.shape):
            raise SpectralError(f"all axis lengths must be >= 1, got {coeffs.shape}")
        fourier_axes = [a for a, b in enumerate(bases) if b is Basis.FOURIER]
        if self.real_signal and len(fourier_axes) > 1:
            raise BasisMismatchError("real-signal packing supports at most one Fourier axis")
        if not self.real_signal:
            for a in fourier_axes:
                if coeffs.shape[a] % 2 == 0:
                    raise SpectralError("complex-mode Fourier axes store k=-K..K and must have odd length")
        coeffs.flags.writeable = False
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return len(self.bases)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.coeffs.shape

    def bands(self) -> Tuple[int, ...]:
        """Highest degree (Chebyshev) or harmonic |k| (Fourier) per axis."""
        out = []
        for basis, n in zip(self.bases, self.shape):
            if basis is Basis.FOURIER and not self.real_signal:
                out.append((n - 1) // 2)
            else:
                out.append(n - 1)
        return tuple(out)

    def replace(self, coeffs: np.ndarray) -> "CoeffSeries":
        return CoeffSeries(self.bases, coeffs, self.real_signal)

    def __add__(self, other: "CoeffSeries") -> "CoeffSeries":
        _check_same_bases(self, other)
        a, b = _common_mode(self, other)
        shape = tuple(max(p, q) for p, q in zip(a.shape, b.shape))
        return a.replace(_pad_centered(a, shape) + _pad_centered(b, shape))

    def __sub__(self, other: "CoeffSeries") -> "CoeffSeries":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "CoeffSeries":
        return self.replace(self.coeffs * factor)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on a tensor product of Chebyshev / uniform grids."""

    grids: Tuple[Grid, ...]
    values: np.ndarray

    def __post_init__(self):
        grids = tuple(Grid(g) for g in (self.grids if isinstance(self.grids, (list, tuple)) else (self.grids,)))
        values = np.array(self.values)
        if values.ndim != len(grids):
            raise GridError(f"value tensor has {values.ndim} axes but {len(grids)} grids were given")
        for g, m in zip(grids, values.shape):
            if m < 1 or (g is Grid.CHEBYSHEV and m < 2):
                raise GridError(f"{g.value} grid of size {m} is degenerate")
        values.flags.writeable = False
        object.__setattr__(self, "grids", grids)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return len(self.grids)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    def nodes(self) -> Tuple[np.ndarray, ...]:
        return tuple(grid_nodes(g, m) for g, m in zip(self.grids, self.shape))

    @classmethod
    def from_callable(cls, func: Callable, grids, sizes) -> "GridFunction":
        """Sample ``func(x)`` (D=1) or ``func(x, y)`` (D=2, broadcast on a mesh) on a tensor grid."""
        grids = tuple(Grid(g) for g in (grids if isinstance(grids, (list, tuple)) else (grids,)))
        sizes = _as_tuple(sizes, len(grids))
        axes = [grid_nodes(g, m) for g, m in zip(grids, sizes)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return cls(grids, np.asarray(func(*mesh)))


# ---------------------------------------------------------------------------
# grids


def cheb_points(n: int) -> np.ndarray:
    """
    Chebyshev extreme points x_k = cos(k pi / n), k = 0..n, in descending order.

    The sine form keeps the nodes exactly symmetric about 0.
    """
    if n < 1:
        raise GridError("Chebyshev grid needs n >= 1 (n = 0 is degenerate)")
    return np.sin(np.pi * np.arange(n, -n - 1, -2) / (2.0 * n))


def uniform_points(m: int) -> np.ndarray:
    """Periodic uniform grid x_j = -1 + 2 j / m, right endpoint excluded."""
    if m < 1:
        raise GridError("uniform grid needs m >= 1")
    return -1.0 + 2.0 * np.arange(m) / m


def grid_nodes(grid: Grid, size: int) -> np.ndarray:
    grid = Grid(grid)
    if grid is Grid.CHEBYSHEV:
        return cheb_points(size - 1)
    return uniform_points(size)


def natural_size(basis: Basis, n: int, real_signal: bool = True) -> int:
    """Smallest grid that represents a length-n coefficient axis exactly."""
    basis = Basis(basis)
    if basis is Basis.CHEBYSHEV:
        return max(n, 2)
    if real_signal:
        return 2 * (n - 1) + 1
    return n


# ---------------------------------------------------------------------------
# storage modes


def _fourier_k(n: int, packed: bool) -> np.ndarray:
    if packed:
        return np.arange(n)
    half = (n - 1) // 2
    return np.arange(-half, half + 1)


def _fourier_axis(series: CoeffSeries) -> Optional[int]:
    for a, b in enumerate(series.bases):
        if b is Basis.FOURIER:
            return a
    return None


def unpack(series: CoeffSeries) -> np.ndarray:
    """Centered complex coefficient tensor (real-signal packing expanded)."""
    c = series.coeffs
    if not series.real_signal:
        return c.copy()
    axis = _fourier_axis(series)
    if axis is None:
        return c.copy()
    moved = np.moveaxis(c, axis, 0)
    neg = np.conj(moved[:0:-1])
    return np.moveaxis(np.concatenate([neg, moved], axis=0), 0, axis)


def pack(bases: Sequence[Basis], centered: np.ndarray) -> CoeffSeries:
    """Inverse of :func:`unpack` for Hermitian data: keep k >= 0 on the Fourier axis."""
    series = CoeffSeries(bases, centered, real_signal=False)
    axis = _fourier_axis(series)
    if axis is None:
        return CoeffSeries(bases, centered, real_signal=True)
    half = (centered.shape[axis] - 1) // 2
    moved = np.moveaxis(centered, axis, 0)[half:]
    return CoeffSeries(bases, np.moveaxis(moved, 0, axis), real_signal=True)


def as_complex_mode(series: CoeffSeries) -> CoeffSeries:
    if not series.real_signal:
        return series
    return CoeffSeries(series.bases, unpack(series), real_signal=False)


def _from_centered(bases, centered: np.ndarray, real_signal: bool) -> CoeffSeries:
    if real_signal:
        return pack(bases, centered)
    return CoeffSeries(bases, centered, real_signal=False)


def _check_same_bases(a: CoeffSeries, b: CoeffSeries) -> None:
    if a.bases != b.bases:
        raise BasisMismatchError(f"basis mismatch: {[x.value for x in a.bases]} vs {[x.value for x in b.bases]}")


def _common_mode(a: CoeffSeries, b: CoeffSeries) -> Tuple[CoeffSeries, CoeffSeries]:
    if a.real_signal == b.real_signal:
        return a, b
    return as_complex_mode(a), as_complex_mode(b)


def _resize_axis(c: np.ndarray, axis: int, n: int, centered: bool) -> np.ndarray:
    """Zero-pad or truncate one axis, keeping the lowest modes."""
    moved = np.moveaxis(c, axis, 0)
    cur = moved.shape[0]
    if centered:
        half_cur, half_new = (cur - 1) // 2, (n - 1) // 2
        if half_new >= half_cur:
            out = np.zeros((n,) + moved.shape[1:], dtype=moved.dtype)
            out[half_new - half_cur:half_new + half_cur + 1] = moved
        else:
            out = moved[half_cur - half_new:half_cur + half_new + 1].copy()
    else:
        if n >= cur:
            out = np.zeros((n,) + moved.shape[1:], dtype=moved.dtype)
            out[:cur] = moved
        else:
            out = moved[:n].copy()
    return np.moveaxis(out, 0, axis)


def _centered_axes(series: CoeffSeries) -> Tuple[bool, ...]:
    return tuple(b is Basis.FOURIER and not series.real_signal for b in series.bases)


def _pad_centered(series: CoeffSeries, shape: Tuple[int, ...]) -> np.ndarray:
    c = series.coeffs
    for axis, (n, centered) in enumerate(zip(shape, _centered_axes(series))):
        c = _resize_axis(c, axis, n, centered)
    return c


# ---------------------------------------------------------------------------
# per-axis transforms


def _dct1(x: np.ndarray, axis: int) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return sfft.dct(x.real, type=1, axis=axis) + 1j * sfft.dct(x.imag, type=1, axis=axis)
    return sfft.dct(x, type=1, axis=axis)


def _cheb_analysis_axis(values: np.ndarray, axis: int) -> np.ndarray:
    """DCT-I: samples on cheb_points(n) -> exact Chebyshev coefficients c_0..c_n."""
    n = values.shape[axis] - 1
    c = np.moveaxis(_dct1(values, axis) / n, axis, 0).astype(np.complex128)
    c[0] /= 2.0
    c[n] /= 2.0
    return np.moveaxis(c, 0, axis)


def _cheb_synthesis_axis(coeffs: np.ndarray, size: int, axis: int) -> np.ndarray:
    """
    Values of sum c_k T_k on cheb_points(size - 1).

    Degrees above size - 1 are folded with T_k(cos(j pi / M)) = T_{k'}(...),
    so the result is exact for any size.
    """
    M = size - 1
    moved = np.moveaxis(np.asarray(coeffs, dtype=np.complex128), axis, 0)
    n = moved.shape[0]
    if n > M + 1:
        r = np.arange(n) % (2 * M)
        folded_index = np.where(r <= M, r, 2 * M - r)
        b = np.zeros((M + 1,) + moved.shape[1:], dtype=np.complex128)
        np.add.at(b, folded_index, moved)
    else:
        b = np.zeros((M + 1,) + moved.shape[1:], dtype=np.complex128)
        b[:n] = moved
    b[1:M] /= 2.0
    return np.moveaxis(_dct1(b, 0), 0, axis)


def _fourier_analysis_axis(values: np.ndarray, axis: int) -> np.ndarray:
    """Uniform samples -> centered coefficients k = -K..K (Nyquist split for even m)."""
    m = values.shape[axis]
    X = np.moveaxis(np.fft.fft(values, axis=axis), axis, 0) / m
    K = m // 2
    k = np.arange(-K, K + 1)
    sign = np.where(k % 2 == 0, 1.0, -1.0).reshape((-1,) + (1,) * (X.ndim - 1))
    c = X[k % m] * sign
    if m % 2 == 0:
        c[0] /= 2.0
        c[-1] /= 2.0
    return np.moveaxis(c, 0, axis)


def _fourier_synthesis_axis(centered: np.ndarray, size: int, axis: int) -> np.ndarray:
    """Values of sum c_k exp(i pi k x) on uniform_points(size), harmonics folded (exact for any size)."""
    moved = np.moveaxis(np.asarray(centered, dtype=np.complex128), axis, 0)
    k = _fourier_k(moved.shape[0], packed=False)
    sign = np.where(k % 2 == 0, 1.0, -1.0).reshape((-1,) + (1,) * (moved.ndim - 1))
    S = np.zeros((size,) + moved.shape[1:], dtype=np.complex128)
    np.add.at(S, k % size, moved * sign)
    return np.moveaxis(np.fft.ifft(S, axis=0) * size, 0, axis)


def basis_values(basis: Basis, n: int, x: np.ndarray, centered: bool = True) -> np.ndarray:
    """
    Matrix V[..., i] = f_i(x) of the first n basis functions.

    Fourier columns follow the centered order k = -K..K unless ``centered`` is
    False, in which case they are k = 0..n-1.
    """
    basis = Basis(basis)
    x = np.asarray(x, dtype=np.float64)
    if basis is Basis.CHEBYSHEV:
        V = np.empty(x.shape + (n,), dtype=np.float64)
        V[..., 0] = 1.0
        if n > 1:
            V[..., 1] = x
        for i in range(2, n):
            V[..., i] = 2.0 * x * V[..., i - 1] - V[..., i - 2]
        return V
    k = _fourier_k(n, packed=not centered)
    return np.exp(1j * np.pi * x[..., None] * k)


def _apply_axis_matrix(c: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(mat, c, axes=([1], [axis])), 0, axis)


# ---------------------------------------------------------------------------
# transforms


def analysis(g: GridFunction, real_signal: bool = True) -> CoeffSeries:
    """Grid values -> coefficients; the grid kind of each axis fixes its basis."""
    bases = tuple(BASIS_OF_GRID[gr] for gr in g.grids)
    c = np.asarray(g.values, dtype=np.complex128)
    for axis, grid in enumerate(g.grids):
        if grid is Grid.CHEBYSHEV:
            c = _cheb_analysis_axis(c, axis)
        else:
            c = _fourier_analysis_axis(c, axis)
    return _from_centered(bases, c, real_signal)


def synthesis(series: CoeffSeries, sizes=None) -> GridFunction:
    """Coefficients -> samples on each basis' own grid (natural sizes by default)."""
    if sizes is None:
        sizes = tuple(natural_size(b, n, series.real_signal) for b, n in zip(series.bases, series.shape))
    sizes = _as_tuple(sizes, series.dim)
    c = unpack(series)
    for axis, (basis, m) in enumerate(zip(series.bases, sizes)):
        if basis is Basis.CHEBYSHEV:
            c = _cheb_synthesis_axis(c, m, axis)
        else:
            c = _fourier_synthesis_axis(c, m, axis)
    return GridFunction(tuple(GRID_OF_BASIS[b] for b in series.bases), c)


def cheb_analysis(g: GridFunction) -> CoeffSeries:
    """DCT-I analysis of samples on cheb_points(n) along every axis."""
    if any(gr is not Grid.CHEBYSHEV for gr in g.grids):
        raise GridError("cheb_analysis needs samples on a Chebyshev grid")
    return analysis(g)


def cheb_synthesis(series: CoeffSeries, sizes=None) -> GridFunction:
    if any(b is not Basis.CHEBYSHEV for b in series.bases):
        raise BasisMismatchError("cheb_synthesis needs a Chebyshev series")
    return synthesis(series, sizes)


def fourier_analysis(g: GridFunction, real_signal: bool = True) -> CoeffSeries:
    """FFT analysis of samples on the periodic uniform grid."""
    if any(gr is not Grid.UNIFORM for gr in g.grids):
        raise GridError("fourier_analysis needs samples on a uniform grid")
    return analysis(g, real_signal)


def fourier_synthesis(series: CoeffSeries, sizes=None) -> GridFunction:
    if any(b is not Basis.FOURIER for b in series.bases):
        raise BasisMismatchError("fourier_synthesis needs a Fourier series")
    return synthesis(series, sizes)


def _check_domain(x: np.ndarray) -> None:
    if np.any(np.abs(x) > 1.0 + _DOMAIN_TOL):
        raise DomainError("evaluation points must satisfy |x| <= 1")


def clenshaw(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Clenshaw recurrence for sum c_n T_n(x), vectorized over x."""
    x = np.asarray(x, dtype=np.float64)
    b1 = np.zeros(x.shape, dtype=np.complex128)
    b2 = np.zeros(x.shape, dtype=np.complex128)
    for c in coeffs[:0:-1]:
        b1, b2 = c + 2.0 * x * b1 - b2, b1
    return coeffs[0] + x * b1 - b2


def evaluate(series: CoeffSeries, x) -> Union[complex, np.ndarray]:
    """
    Pointwise value of the series.

    Args:
        series: coefficients to evaluate
        x: point(s); for D=1 any array shape, for D>1 an array whose last axis has length D

    Returns:
        complex value(s) with the shape of the point array (minus the coordinate axis for D>1)
    """
    x = np.asarray(x, dtype=np.float64)
    _check_domain(x)
    if series.dim == 1 and series.bases[0] is Basis.CHEBYSHEV:
        out = clenshaw(series.coeffs, x)
        return complex(out) if out.ndim == 0 else out
    points = x[..., None] if series.dim == 1 else x
    if points.shape[-1] != series.dim:
        raise DomainError(f"points need {series.dim} coordinates")
    c = unpack(series)
    flat = points.reshape(-1, series.dim)
    letters = "abcdefgh"[: series.dim]
    mats = [basis_values(b, n, flat[:, a]) for a, (b, n) in enumerate(zip(series.bases, c.shape))]
    expr = ",".join(f"p{l}" for l in letters) + "," + letters + "->p"
    out = np.einsum(expr, *mats, c).reshape(points.shape[:-1])
    return complex(out) if out.ndim == 0 else out


def evaluate_on_grid(series: CoeffSeries, axes_points: Sequence[np.ndarray]) -> np.ndarray:
    """Values on the tensor product of per-axis point sets (O(n m) per axis)."""
    if len(axes_points) != series.dim:
        raise DomainError(f"need {series.dim} point sets")
    c = unpack(series)
    for axis, (basis, pts) in enumerate(zip(series.bases, axes_points)):
        pts = np.asarray(pts, dtype=np.float64)
        _check_domain(pts)
        c = _apply_axis_matrix(c, basis_values(basis, c.shape[axis], pts), axis)
    return c


def interpolate_to_grid(series: CoeffSeries, sizes, grids=None) -> GridFunction:
    """
    Spectral interpolation onto a target grid.

    Chebyshev -> Chebyshev grid and Fourier -> uniform grid use the fast
    (folded) transforms and are exact for every size; the cross combinations
    evaluate the basis directly at cost O(n m).
    """
    sizes = _as_tuple(sizes, series.dim)
    if grids is None:
        grids = tuple(GRID_OF_BASIS[b] for b in series.bases)
    grids = tuple(Grid(g) for g in _as_tuple(grids, series.dim))
    c = unpack(series)
    for axis, (basis, grid, m) in enumerate(zip(series.bases, grids, sizes)):
        if m < 1:
            raise GridError("target grid size must be >= 1")
        if basis is Basis.CHEBYSHEV and grid is Grid.CHEBYSHEV:
            c = _cheb_synthesis_axis(c, m, axis)
        elif basis is Basis.FOURIER and grid is Grid.UNIFORM:
            c = _fourier_synthesis_axis(c, m, axis)
        else:
            c = _apply_axis_matrix(c, basis_values(basis, c.shape[axis], grid_nodes(grid, m)), axis)
    return GridFunction(grids, c)


def to_basis(series: CoeffSeries, bases, sizes) -> CoeffSeries:
    """Re-expand in another basis by sampling on the target grids and analysing."""
    bases = tuple(Basis(b) for b in _as_tuple(bases, series.dim))
    sizes = _as_tuple(sizes, series.dim)
    if bases == series.bases:
        return fit_length(series, sizes)
    grids = tuple(GRID_OF_BASIS[b] for b in bases)
    grid_sizes = tuple(natural_size(b, n, series.real_signal) for b, n in zip(bases, sizes))
    sampled = interpolate_to_grid(series, grid_sizes, grids)
    return fit_length(analysis(sampled, series.real_signal), sizes)


# ---------------------------------------------------------------------------
# calculus


def _k_along(series_shape: Tuple[int, ...], axis: int, centered: bool) -> np.ndarray:
    k = _fourier_k(series_shape[axis], packed=not centered).astype(np.float64)
    shape = [1] * len(series_shape)
    shape[axis] = -1
    return k.reshape(shape)


def differentiate(series: CoeffSeries, axis: int = 0) -> CoeffSeries:
    """
    Exact derivative along one axis.

    Chebyshev uses the backward recurrence c'_{k-1} = c'_{k+1} + 2 k c_k
    (length drops by one); Fourier multiplies c_k by i pi k.
    """
    basis = series.bases[axis]
    if basis is Basis.FOURIER:
        k = _k_along(series.shape, axis, centered=not series.real_signal)
        return series.replace(series.coeffs * (1j * np.pi * k))
    a = np.moveaxis(series.coeffs, axis, 0)
    n = a.shape[0]
    if n == 1:
        return series.replace(np.zeros_like(series.coeffs))
    b = np.zeros((n + 1,) + a.shape[1:], dtype=np.complex128)
    for k in range(n - 1, 0, -1):
        b[k - 1] = b[k + 1] + 2.0 * k * a[k]
    b[0] /= 2.0
    return series.replace(np.moveaxis(b[: n - 1], 0, axis))


def integrate(series: CoeffSeries, axis: int = 0, value_at_left: complex = 0.0) -> CoeffSeries:
    """
    Antiderivative along one axis.

    Chebyshev: output has one more coefficient and vanishes at x = -1 (or
    takes ``value_at_left`` there). Fourier: c_k / (i pi k) with zero mean;
    a nonzero mean has no periodic antiderivative and is rejected.
    """
    basis = series.bases[axis]
    if basis is Basis.FOURIER:
        centered = not series.real_signal
        moved = np.moveaxis(series.coeffs, axis, 0)
        zero = (moved.shape[0] - 1) // 2 if centered else 0
        scale = max(1.0, float(np.max(np.abs(series.coeffs))))
        if np.max(np.abs(moved[zero])) > 1e-12 * scale:
            raise SpectralError("non-periodic antiderivative: Fourier series has nonzero mean")
        k = _k_along(series.shape, axis, centered)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(k == 0, 0.0, series.coeffs / (1j * np.pi * np.where(k == 0, 1.0, k)))
        return series.replace(out)
    a = np.moveaxis(series.coeffs, axis, 0)
    n = a.shape[0]
    ext = np.zeros((n + 2,) + a.shape[1:], dtype=np.complex128)
    ext[:n] = a
    b = np.zeros((n + 1,) + a.shape[1:], dtype=np.complex128)
    b[1] = ext[0] - ext[2] / 2.0
    for k in range(2, n + 1):
        b[k] = (ext[k - 1] - ext[k + 1]) / (2.0 * k)
    signs = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0).reshape((-1,) + (1,) * (b.ndim - 1))
    b[0] = value_at_left - np.sum(signs[1:] * b[1:], axis=0)
    return series.replace(np.moveaxis(b, 0, axis))


def shift(series: CoeffSeries, delta: float, axis: int = 0) -> CoeffSeries:
    """f(x) -> f(x + delta) with period-2 wraparound (Fourier axes only)."""
    if series.bases[axis] is not Basis.FOURIER:
        raise BasisMismatchError("shift undefined for Chebyshev")
    k = _k_along(series.shape, axis, centered=not series.real_signal)
    return series.replace(series.coeffs * np.exp(1j * np.pi * k * delta))


def _product_tensor(basis: Basis, na: int, nb: int) -> np.ndarray:
    """P[p, m, n] with f_m f_n = sum_p P[p, m, n] f_p (centered order for Fourier)."""
    if basis is Basis.CHEBYSHEV:
        P = np.zeros((na + nb - 1, na, nb))
        m, n = np.meshgrid(np.arange(na), np.arange(nb), indexing="ij")
        np.add.at(P, (m + n, m, n), 0.5)
        np.add.at(P, (np.abs(m - n), m, n), 0.5)
        return P
    Ka, Kb = (na - 1) // 2, (nb - 1) // 2
    P = np.zeros((2 * (Ka + Kb) + 1, na, nb))
    m, n = np.meshgrid(np.arange(na), np.arange(nb), indexing="ij")
    P[m + n, m, n] = 1.0
    return P


def multiply(a: CoeffSeries, b: CoeffSeries) -> CoeffSeries:
    """
    Exact product series.

    Chebyshev axes expand T_m T_n = (T_{m+n} + T_{|m-n|}) / 2; Fourier axes
    convolve coefficients. Per-axis output length is len_a + len_b - 1.
    """
    _check_same_bases(a, b)
    ca, cb = unpack(a), unpack(b)
    if a.dim == 1:
        if a.bases[0] is Basis.FOURIER:
            out = np.convolve(ca, cb)
        else:
            out = np.einsum("pmn,m,n->p", _product_tensor(Basis.CHEBYSHEV, ca.size, cb.size), ca, cb)
    else:
        letters_a = "abcdefgh"[: a.dim]
        letters_b = "ijklmnop"[: a.dim]
        letters_p = "qrstuvwx"[: a.dim]
        tensors = [_product_tensor(basis, p, q) for basis, p, q in zip(a.bases, ca.shape, cb.shape)]
        expr = ",".join(f"{p}{x}{y}" for p, x, y in zip(letters_p, letters_a, letters_b))
        expr += f",{letters_a},{letters_b}->{letters_p}"
        out = np.einsum(expr, *tensors, ca, cb)
    return _from_centered(a.bases, out, a.real_signal and b.real_signal)


# ---------------------------------------------------------------------------
# smoothing and norms


def chop(series: CoeffSeries, n) -> CoeffSeries:
    """
    Keep the first ``n`` coefficients per axis (Fourier: the lowest n harmonics,
    |k| <= n - 1 in complex mode).
    """
    ns = _as_tuple(n, series.dim)
    if any(v < 1 for v in ns):
        raise SpectralError("chop length must be >= 1")
    c = series.coeffs
    for axis, (v, centered) in enumerate(zip(ns, _centered_axes(series))):
        target = 2 * v - 1 if centered else v
        if target < c.shape[axis]:
            c = _resize_axis(c, axis, target, centered)
    return series.replace(c)


def pad(series: CoeffSeries, n) -> CoeffSeries:
    """Append zero coefficients up to ``n`` per axis (the inverse shape of :func:`chop`)."""
    ns = _as_tuple(n, series.dim)
    if any(v < 1 for v in ns):
        raise SpectralError("pad length must be >= 1")
    c = series.coeffs
    for axis, (v, centered) in enumerate(zip(ns, _centered_axes(series))):
        target = 2 * v - 1 if centered else v
        if target < c.shape[axis]:
            raise SpectralError(f"cannot pad axis {axis} of length {c.shape[axis]} down to {target}")
        c = _resize_axis(c, axis, target, centered)
    return series.replace(c)


def fit_length(series: CoeffSeries, n) -> CoeffSeries:
    """Chop or pad so every axis has exactly ``n`` harmonics/coefficients."""
    ns = _as_tuple(n, series.dim)
    return pad(chop(series, ns), ns)


def _axis_weights(basis: Basis, n: int, centered: bool) -> np.ndarray:
    if basis is Basis.CHEBYSHEV:
        w = np.full(n, np.pi / 2.0)
        w[0] = np.pi
        return w
    return np.full(n, 2.0)


def energy_weights(series: CoeffSeries) -> np.ndarray:
    """Weights w with ||f||^2 = sum w |c|^2 over the *unpacked* coefficient tensor."""
    c_shape = unpack(series).shape
    w = np.ones(c_shape)
    for axis, basis in enumerate(series.bases):
        wa = _axis_weights(basis, c_shape[axis], True)
        shape = [1] * len(c_shape)
        shape[axis] = -1
        w = w * wa.reshape(shape)
    return w


def norm_l2(series: CoeffSeries) -> float:
    """
    L2 norm on [-1, 1]^D: Chebyshev axes use the weight 1/sqrt(1 - x^2)
    (||T_i||^2 = pi / (2 - delta_i0)), Fourier axes the plain measure.
    """
    c = unpack(series)
    return float(np.sqrt(np.sum(energy_weights(series) * np.abs(c) ** 2)))


def analysis_matrix(grid: Grid, size: int, real_signal: bool = True) -> np.ndarray:
    """Matrix A with coeffs = A @ values for one axis."""
    eye = np.eye(size)
    if Grid(grid) is Grid.CHEBYSHEV:
        return _cheb_analysis_axis(eye.astype(np.complex128), 0)
    centered = _fourier_analysis_axis(eye.astype(np.complex128), 0)
    if real_signal:
        return centered[(centered.shape[0] - 1) // 2:]
    return centered


def synthesis_matrix(basis: Basis, n: int, grid: Grid, size: int, real_signal: bool = True) -> np.ndarray:
    """
    Matrix S with values = S @ coeffs for one axis.

    For real-signal Fourier packing the k >= 1 columns carry a factor 2, so
    ``Re(S @ c)`` gives the samples of the real function.
    """
    basis, grid = Basis(basis), Grid(grid)
    nodes = grid_nodes(grid, size)
    if basis is Basis.CHEBYSHEV:
        return basis_values(basis, n, nodes).astype(np.complex128)
    if real_signal:
        S = basis_values(basis, n, nodes, centered=False)
        S[:, 1:] *= 2.0
        return S
    return basis_values(basis, n, nodes)
