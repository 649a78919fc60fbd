"""Shared helpers for the test suite."""
import numpy as np

from src.spectral.series import Basis, CoeffSeries


def complex_randn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def central_difference(loss, value, step=1e-6):
    """dL/dRe + i dL/dIm of a real loss by central differences."""
    fd = np.zeros_like(value)
    parts = (1.0, 1j) if np.iscomplexobj(value) else (1.0,)
    for idx in np.ndindex(value.shape):
        for unit in parts:
            plus, minus = value.copy(), value.copy()
            plus[idx] += unit * step
            minus[idx] -= unit * step
            fd[idx] += unit * (loss(plus) - loss(minus)) / (2 * step)
    return fd


def random_fourier(rng, band, dim=1, cheb_len=4):
    """Real-signal Fourier series with harmonics 0..band (times a Chebyshev axis in 2D)."""
    if dim == 1:
        c = complex_randn(rng, band + 1)
        c[0] = c[0].real
        return CoeffSeries((Basis.FOURIER,), c)
    c = complex_randn(rng, band + 1, cheb_len)
    c[0] = c[0].real
    return CoeffSeries((Basis.FOURIER, Basis.CHEBYSHEV), c)
