"""
Exact spectral operators used as targets (and as the Exact baseline model).
"""

from typing import Callable, Dict

from ..spectral.series import CoeffSeries, differentiate, integrate, multiply, shift


def target_integrate(f: CoeffSeries) -> CoeffSeries:
    """Antiderivative of a zero-mean periodic f (the mean of the result is 0)."""
    return integrate(f)


def target_shift_product(f: CoeffSeries) -> CoeffSeries:
    """f(x) f(x + 1); the band doubles."""
    return multiply(f, shift(f, 1.0))


def target_derivative(f: CoeffSeries) -> CoeffSeries:
    return differentiate(f)


def target_identity(f: CoeffSeries) -> CoeffSeries:
    return f


EXACT_RULES: Dict[str, Callable[[CoeffSeries], CoeffSeries]] = {
    "identity": target_identity,
    "integrate": target_integrate,
    "shift_product": target_shift_product,
    "differentiate": target_derivative,
}
