"""Autodiff engine, spectral neural operator layers, baselines and training."""

from .autodiff import DiffTensor, einsum
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .layers import activation_apply, n1_layer, n2_layer
from .models import (
    Architecture,
    Model,
    ModelSpec,
    build_model,
    deeponet_forward,
    fno_forward,
    init_params,
    prepare_targets,
    sno_forward,
    xcsno_forward,
)
from .training import TrainConfig, adam_step, gradient_check, relative_l2_loss, train_loop

__all__ = [
    "Architecture",
    "Checkpoint",
    "DiffTensor",
    "Model",
    "ModelSpec",
    "TrainConfig",
    "activation_apply",
    "adam_step",
    "build_model",
    "deeponet_forward",
    "einsum",
    "fno_forward",
    "gradient_check",
    "init_params",
    "load_checkpoint",
    "n1_layer",
    "n2_layer",
    "prepare_targets",
    "relative_l2_loss",
    "save_checkpoint",
    "sno_forward",
    "train_loop",
    "xcsno_forward",
]
