"""
.specf series files.

Layout: one line of JSON header, a newline, then the coefficients of
``count`` same-shape series as little-endian float64 (re, im) pairs in
row-major order.
"""

import json
import logging
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np

from ..errors import SpectralError
from .series import Basis, CoeffSeries

logger = logging.getLogger(__name__)

SPECF_SUFFIX = ".specf"
_DTYPE = np.dtype("<c16")


def save_series(path: Union[str, Path], series: Union[CoeffSeries, Sequence[CoeffSeries]]) -> Path:
    """
    Write one series or a stack of same-shape series.

    Args:
        path: output file (``.specf`` appended if missing)
        series: a CoeffSeries or a non-empty list of them

    Returns:
        Path that was written
    """
    items = [series] if isinstance(series, CoeffSeries) else list(series)
    if not items:
        raise SpectralError("nothing to save")
    first = items[0]
    for s in items[1:]:
        if s.bases != first.bases or s.shape != first.shape or s.real_signal != first.real_signal:
            raise SpectralError("all series in one .specf file must share basis, shape and packing")

    path = Path(path)
    if path.suffix != SPECF_SUFFIX:
        path = path.with_suffix(SPECF_SUFFIX)
    path.parent.mkdir(parents=True, exist_ok=True)

    header = {
        "basis": [b.value for b in first.bases],
        "shape": list(first.shape),
        "real_signal": first.real_signal,
        "dtype": "f64",
        "count": len(items),
    }
    blob = np.stack([s.coeffs for s in items]).astype(_DTYPE, copy=False).tobytes(order="C")
    with open(path, "wb") as f:
        f.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        f.write(b"\n")
        f.write(blob)
    logger.debug(f"wrote {len(items)} series of shape {first.shape} to {path}")
    return path


def load_series(path: Union[str, Path]) -> List[CoeffSeries]:
    """Read every series stored in a ``.specf`` file."""
    raw = Path(path).read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise SpectralError(f"{path}: missing header")
    try:
        header = json.loads(raw[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SpectralError(f"{path}: unreadable header ({e})") from e
    if header.get("dtype") != "f64":
        raise SpectralError(f"{path}: unsupported dtype {header.get('dtype')!r}")

    bases = tuple(Basis(b) for b in header["basis"])
    shape = tuple(int(n) for n in header["shape"])
    count = int(header.get("count", 1))
    data = np.frombuffer(raw[newline + 1:], dtype=_DTYPE)
    expected = count * int(np.prod(shape))
    if data.size != expected:
        raise SpectralError(f"{path}: expected {expected} coefficients, found {data.size}")
    stack = data.reshape((count,) + shape)
    return [CoeffSeries(bases, stack[i], bool(header["real_signal"])) for i in range(count)]


def load_one(path: Union[str, Path]) -> CoeffSeries:
    items = load_series(path)
    if len(items) != 1:
        raise SpectralError(f"{path}: expected a single series, found {len(items)}")
    return items[0]
