"""Tests for the exact target operators in src/problems/targets.py."""
import numpy as np
import pytest

from src.errors import SpectralError
from src.problems.random_family import RandomFamilyParams, sample_random_family
from src.problems.targets import EXACT_RULES, target_derivative, target_integrate, target_shift_product
from src.spectral.series import Basis, CoeffSeries, evaluate

COS = CoeffSeries((Basis.FOURIER,), [0.0, 0.5])
X = np.linspace(-1, 1, 41)


class TestTargets:
    """Test integrate, shift-product and derivative targets."""

    def test_cosine_closed_forms(self):
        np.testing.assert_allclose(evaluate(target_integrate(COS), X).real, np.sin(np.pi * X) / np.pi, atol=1e-14)
        np.testing.assert_allclose(evaluate(target_shift_product(COS), X).real, -np.cos(np.pi * X) ** 2, atol=1e-14)
        np.testing.assert_allclose(evaluate(target_derivative(COS), X).real, -np.pi * np.sin(np.pi * X), atol=1e-13)

    def test_derivative_inverts_integral(self):
        for f in sample_random_family(RandomFamilyParams(k_min=1, k_max=10, count=5)):
            np.testing.assert_allclose(target_derivative(target_integrate(f)).coeffs, f.coeffs, atol=1e-12)

    def test_shift_product_band_doubles(self):
        f = sample_random_family(RandomFamilyParams(k_min=0, k_max=7, count=1))[0]
        g = target_shift_product(f)
        assert g.bands() == (14,)
        assert abs(g.coeffs[14]) > 0

    def test_shift_product_pointwise(self):
        f = sample_random_family(RandomFamilyParams(k_min=0, k_max=15, count=1, seed=4))[0]
        x = np.linspace(-1, 0, 21)
        expected = evaluate(f, x) * evaluate(f, x + 1)
        np.testing.assert_allclose(evaluate(target_shift_product(f), x), expected, atol=1e-13)

    def test_integrate_rejects_mean(self):
        with pytest.raises(SpectralError):
            target_integrate(CoeffSeries((Basis.FOURIER,), [1.0, 0.5]))

    def test_rules_registered(self):
        assert set(EXACT_RULES) == {"identity", "integrate", "differentiate", "shift_product"}
        assert EXACT_RULES["identity"](COS) is COS
