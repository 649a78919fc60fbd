"""
Closed-form solutions used as targets: a parametric ODE and three soliton
families (KdV single and double solitons, the Kuznetsov-Ma breather).

All field evaluations are vectorized over x and t and stay finite for the
parameter ranges the datasets draw from; hyperbolic functions are written
through sech/tanh so nothing overflows.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import SpectralError
from ..spectral.series import (
    CoeffSeries,
    Grid,
    GridFunction,
    analysis,
    cheb_points,
    chop,
    integrate,
    interpolate_to_grid,
)

logger = logging.getLogger(__name__)

ODE_OVERSAMPLE = 4


def sech(z):
    """1 / cosh(z) without overflow for large |z|."""
    a = np.exp(-np.abs(np.asarray(z, dtype=np.float64)))
    return 2.0 * a / (1.0 + a * a)


def parametric_ode_solution(f: CoeffSeries, n_out: int = 64, oversample: int = ODE_OVERSAMPLE) -> CoeffSeries:
    """
    Periodic solution of y' = f(t) y on [-1, 1] with y(0) = exp(F(0)).

    The closed form is y = exp(F) with F the zero-mean antiderivative of f.
    It is sampled on a uniform grid ``oversample`` times finer than the
    output band needs, analysed, and chopped to ``n_out`` packed harmonics.

    Raises:
        SpectralError: f has a nonzero mean (no periodic antiderivative)
    """
    F = integrate(f)
    m = oversample * (2 * n_out - 1)
    values = np.exp(interpolate_to_grid(F, m, Grid.UNIFORM).values.real)
    y = analysis(GridFunction((Grid.UNIFORM,), values), real_signal=True)
    return chop(y, n_out)


@dataclass(frozen=True)
class SolitonParams:
    a: float
    x0: float

    @classmethod
    def draw(cls, rng: np.random.Generator) -> "SolitonParams":
        return cls(a=float(rng.uniform(10.0, 25.0)), x0=float(rng.uniform(-1.0, 1.0)))


def kdv_soliton(params: SolitonParams, x, t):
    """u = 3 a^2 sech^2(a (x + x0) / 2 - a^3 t / 2), solving u_t + u u_x + u_xxx = 0."""
    a = params.a
    return 3.0 * a * a * sech(a * (np.asarray(x) + params.x0) / 2.0 - a ** 3 * np.asarray(t) / 2.0) ** 2


@dataclass(frozen=True)
class TwoSolitonParams:
    a1: float
    a2: float
    x01: float = -0.6
    x02: float = -0.5

    def __post_init__(self):
        if not self.a1 > self.a2 > 0:
            raise SpectralError(f"two-soliton needs a1 > a2 > 0, got a1={self.a1}, a2={self.a2}")

    @classmethod
    def draw(cls, rng: np.random.Generator) -> "TwoSolitonParams":
        a1 = float(rng.uniform(10.0, 25.0))
        chi = float(rng.uniform(0.5, 1.0))
        return cls(a1=a1, a2=chi * a1)


def kdv_two_soliton(params: TwoSolitonParams, x, t):
    """
    Interacting two-soliton of u_t + 6 u u_x + u_xxx = 0.

    With phi_i = a_i (x + x0_i) - 4 a_i^3 t the field is

        2 (a1^2 - a2^2) (a1^2 cosh^2 phi2 + a2^2 sinh^2 phi1)
        / (a1 cosh phi1 cosh phi2 - a2 sinh phi1 sinh phi2)^2,

    evaluated after dividing through by cosh^2 phi1 cosh^2 phi2.
    """
    a1, a2 = params.a1, params.a2
    x, t = np.asarray(x, dtype=np.float64), np.asarray(t, dtype=np.float64)
    phi1 = a1 * (x + params.x01) - 4.0 * a1 ** 3 * t
    phi2 = a2 * (x + params.x02) - 4.0 * a2 ** 3 * t
    s1, s2 = sech(phi1), sech(phi2)
    t1, t2 = np.tanh(phi1), np.tanh(phi2)
    num = 2.0 * (a1 * a1 - a2 * a2) * (a1 * a1 * s1 ** 2 + a2 * a2 * t1 ** 2 * s2 ** 2)
    return num / (a1 - a2 * t1 * t2) ** 2


@dataclass(frozen=True)
class BreatherParams:
    nu: float

    def __post_init__(self):
        if self.nu <= 1.0:
            raise SpectralError("Kuznetsov-Ma breather needs nu > 1")

    @property
    def p(self) -> float:
        return 2.0 * np.sqrt(self.nu ** 2 - 1.0)

    @property
    def omega(self) -> float:
        return self.p * self.nu

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    @classmethod
    def draw(cls, rng: np.random.Generator) -> "BreatherParams":
        return cls(nu=float(rng.uniform(1.5, 3.5)))


def km_breather_field(params: BreatherParams, x, t):
    """Complex NLS field psi of the Kuznetsov-Ma breather."""
    p, nu, w = params.p, params.nu, params.omega
    x, t = np.asarray(x, dtype=np.float64), np.asarray(t, dtype=np.float64)
    num = -p * p * np.cos(w * t) - 2j * p * nu * np.sin(w * t)
    den = 2.0 * np.cos(w * t) - 2.0 * nu * np.cosh(p * x / np.sqrt(2.0))
    return (num / den - 1.0) * np.exp(1j * t)


def km_breather(params: BreatherParams, x, t):
    """|psi|, the modulus used as the learning target."""
    return np.abs(km_breather_field(params, x, t))


def field_series(func, grids, sizes) -> CoeffSeries:
    """Sample a real field ``func(x[, t])`` on a tensor grid and analyse it."""
    g = GridFunction.from_callable(func, grids, sizes)
    return analysis(GridFunction(g.grids, np.real(g.values)), real_signal=True)


def time_axis(sizes_t: int, t_final: float) -> np.ndarray:
    """Chebyshev nodes on [-1, 1] mapped to times in [0, t_final] (descending)."""
    return t_final * (cheb_points(sizes_t - 1) + 1.0) / 2.0


def space_time_series(field, t_final: float, x_grid: Grid, n_x: int, n_t: int) -> CoeffSeries:
    """
    Expand u(x, t), t in [0, t_final], with the x basis of ``x_grid`` and
    Chebyshev along t (time rescaled to [-1, 1]).
    """
    return field_series(lambda x, s: field(x, t_final * (s + 1.0) / 2.0), (x_grid, Grid.CHEBYSHEV), (n_x, n_t))
