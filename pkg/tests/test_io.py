"""Tests for .specf series files."""
import json

import numpy as np
import pytest

from src.errors import SpectralError
from src.spectral.io import load_one, load_series, save_series
from src.spectral.series import Basis, CoeffSeries


class TestSpecf:
    """Test writing and reading .specf files."""

    def test_single_series(self, tmp_path):
        s = CoeffSeries((Basis.CHEBYSHEV,), [1.0, -2.5 + 1j, 3j])
        path = save_series(tmp_path / "one", s)
        assert path.suffix == ".specf"
        back = load_one(path)
        assert back.bases == s.bases and back.real_signal
        np.testing.assert_array_equal(back.coeffs, s.coeffs)

    def test_stack_2d(self, tmp_path):
        rng = np.random.default_rng(0)
        bases = (Basis.FOURIER, Basis.CHEBYSHEV)
        items = [CoeffSeries(bases, rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))) for _ in range(5)]
        path = save_series(tmp_path / "stack.specf", items)
        back = load_series(path)
        assert len(back) == 5
        for a, b in zip(items, back):
            np.testing.assert_array_equal(a.coeffs, b.coeffs)

    def test_header(self, tmp_path):
        """Test the JSON header line and little-endian interleaved blob."""
        s = CoeffSeries((Basis.FOURIER,), [1.0, 2.0 + 3.0j, 0.0], real_signal=False)
        path = save_series(tmp_path / "h.specf", s)
        raw = path.read_bytes()
        header_line, blob = raw.split(b"\n", 1)
        header = json.loads(header_line)
        assert header == {"basis": ["fourier"], "shape": [3], "real_signal": False, "dtype": "f64", "count": 1}
        np.testing.assert_array_equal(np.frombuffer(blob, dtype="<f8"), [1, 0, 2, 3, 0, 0])

    def test_deterministic_bytes(self, tmp_path):
        s = CoeffSeries((Basis.CHEBYSHEV,), [0.5, 0.25])
        a = save_series(tmp_path / "a.specf", s).read_bytes()
        b = save_series(tmp_path / "b.specf", s).read_bytes()
        assert a == b

    def test_mixed_shapes_rejected(self, tmp_path):
        items = [CoeffSeries((Basis.CHEBYSHEV,), [1.0]), CoeffSeries((Basis.CHEBYSHEV,), [1.0, 2.0])]
        with pytest.raises(SpectralError):
            save_series(tmp_path / "bad.specf", items)

    def test_truncated_blob(self, tmp_path):
        path = save_series(tmp_path / "t.specf", CoeffSeries((Basis.CHEBYSHEV,), [1.0, 2.0]))
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(SpectralError):
            load_series(path)
