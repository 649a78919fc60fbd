"""
.sno checkpoints: one line of JSON manifest (model spec, train config,
epoch, seed, parameter layout), a newline, then the parameters in declared
order as little-endian float64 (complex tensors as interleaved re, im).
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from ..errors import SpectralError
from .models import Model, ModelSpec, build_model
from .training import TrainConfig

logger = logging.getLogger(__name__)

SNO_SUFFIX = ".sno"


@dataclass
class Checkpoint:
    spec: ModelSpec
    params: Dict[str, np.ndarray]
    train_config: Optional[TrainConfig]
    epoch: int
    seed: int

    def model(self) -> Model:
        return build_model(self.spec)


def save_checkpoint(
    path: Union[str, Path],
    model: Model,
    params: Dict[str, np.ndarray],
    train_config: Optional[TrainConfig] = None,
    epoch: int = 0,
    seed: int = 0,
) -> Path:
    path = Path(path)
    if path.suffix != SNO_SUFFIX:
        path = path.with_suffix(SNO_SUFFIX)
    path.parent.mkdir(parents=True, exist_ok=True)

    layout = []
    chunks = []
    for p in model.parameters():
        value = np.asarray(params[p.name])
        if value.shape != p.shape:
            raise SpectralError(f"parameter {p.name} has shape {value.shape}, expected {p.shape}")
        layout.append({"name": p.name, "shape": list(p.shape), "complex": p.complex})
        dtype = "<c16" if p.complex else "<f8"
        chunks.append(value.astype(dtype).tobytes(order="C"))

    manifest = {
        "model": model.spec.to_dict(),
        "train": train_config.to_dict() if train_config is not None else None,
        "epoch": epoch,
        "seed": seed,
        "params": layout,
        "dtype": "f64",
    }
    with open(path, "wb") as f:
        f.write(json.dumps(manifest, sort_keys=True).encode("utf-8"))
        f.write(b"\n")
        for chunk in chunks:
            f.write(chunk)
    logger.info(f"Saved checkpoint to {path}")
    return path


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    raw = Path(path).read_bytes()
    try:
        header, blob = raw.split(b"\n", 1)
        manifest = json.loads(header)
    except ValueError as e:
        raise SpectralError(f"{path}: not a .sno checkpoint") from e
    if manifest.get("dtype") != "f64":
        raise SpectralError(f"{path}: unsupported dtype {manifest.get('dtype')!r}")

    params = {}
    offset = 0
    for entry in manifest["params"]:
        dtype = np.dtype("<c16" if entry["complex"] else "<f8")
        count = int(np.prod(entry["shape"]))
        size = count * dtype.itemsize
        if offset + size > len(blob):
            raise SpectralError(f"{path}: truncated parameter blob at {entry['name']}")
        params[entry["name"]] = np.frombuffer(blob, dtype=dtype, count=count, offset=offset).reshape(entry["shape"]).copy()
        offset += size
    if offset != len(blob):
        raise SpectralError(f"{path}: {len(blob) - offset} trailing bytes")

    train = manifest.get("train")
    return Checkpoint(
        spec=ModelSpec.from_dict(manifest["model"]),
        params=params,
        train_config=TrainConfig(**train) if train is not None else None,
        epoch=manifest["epoch"],
        seed=manifest["seed"],
    )
