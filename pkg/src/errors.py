"""
Exception hierarchy shared by the library and the experiment workflow.
"""


class SpectralError(ValueError):
    """Base class for invalid input to a spectral operation."""


class BasisMismatchError(SpectralError):
    """Operands use different bases (or a basis the operation does not support)."""


class GridError(SpectralError):
    """Grid kind or size does not fit the operation."""


class DomainError(SpectralError):
    """Evaluation point outside [-1, 1]."""


class SolverError(SpectralError):
    """A reference solver failed (singular system, blow-up, size guard)."""


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


class TrainingDivergedError(RuntimeError):
    """Loss became NaN/inf during training."""

    def __init__(self, epoch: int, loss: float, param_norms: dict):
        self.epoch = epoch
        self.loss = loss
        self.param_norms = dict(param_norms)
        norms = ", ".join(f"{k}={v:.3e}" for k, v in self.param_norms.items())
        super().__init__(f"training diverged at epoch {epoch} (loss={loss}); parameter norms: {norms}")
