"""
Random band-limited input functions.

A draw from R(k_min, k_max, sigma) is

    f(x) = Re( sum_{k=k_min}^{k_max} d_k exp(i pi k x) ) / ||d||,

with the real and imaginary parts of every d_k iid N(0, sigma^2). Each sample
gets its own generator seeded by (seed, sample index), so any subset of the
family can be regenerated independently and in any order.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..spectral.series import Basis, CoeffSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandomFamilyParams:
    k_min: int = 0
    k_max: int = 10
    sigma: float = 2.0
    count: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.k_min <= self.k_max:
            raise ValueError(f"need 0 <= k_min <= k_max, got [{self.k_min}, {self.k_max}]")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.count < 0:
            raise ValueError("count must be non-negative")

    @property
    def n_harmonics(self) -> int:
        return self.k_max - self.k_min + 1


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Per-sample generator derived from (seed, index)."""
    return np.random.default_rng([seed, index])


def draw_coefficients(params: RandomFamilyParams, rng: np.random.Generator) -> np.ndarray:
    """Raw d_k, k = k_min..k_max, before normalization."""
    n = params.n_harmonics
    return params.sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def series_from_coefficients(d: np.ndarray, k_min: int) -> CoeffSeries:
    """Re(sum d_k e^{i pi k x}) / ||d|| as a packed real Fourier series."""
    d = np.asarray(d, dtype=np.complex128) / np.linalg.norm(d)
    k_max = k_min + len(d) - 1
    c = np.zeros(k_max + 1, dtype=np.complex128)
    c[k_min:] = d / 2.0
    if k_min == 0:
        c[0] = d[0].real
    return CoeffSeries((Basis.FOURIER,), c)


def sample_one(params: RandomFamilyParams, index: int) -> CoeffSeries:
    rng = sample_rng(params.seed, index)
    return series_from_coefficients(draw_coefficients(params, rng), params.k_min)


def sample_random_family(params: RandomFamilyParams) -> List[CoeffSeries]:
    """Draw ``params.count`` functions, deterministic per seed."""
    return [sample_one(params, j) for j in range(params.count)]
