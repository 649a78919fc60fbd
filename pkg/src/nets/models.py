"""
Neural operator architectures.

Every model maps a batch of input functions to values on a common uniform
evaluation grid, which is where losses and test errors are computed:

    model = build_model(spec)
    params = model.init_params(seed)
    x = model.prepare(input_series)              # model-specific representation
    y = model.forward(as_leaves(params), x)      # DiffTensor (batch, *eval_grid)

SNO variants work on Chebyshev / Fourier coefficients, xSNO on grid values,
xcSNO mixes both, FNO and DeepONet are the usual grid baselines and Exact
applies the exact spectral rule of a problem.
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BasisMismatchError, GridError
from ..problems.targets import EXACT_RULES
from ..spectral.aliasing import Activation
from ..spectral.series import (
    Basis,
    CoeffSeries,
    Grid,
    GridFunction,
    analysis,
    analysis_matrix,
    grid_nodes,
    interpolate_to_grid,
    synthesis,
    synthesis_matrix,
    to_basis,
    uniform_points,
)
from .autodiff import DiffTensor, einsum
from .layers import activation_apply, axis_linear, dense, n1_layer, n2_layer

logger = logging.getLogger(__name__)


class Architecture(str, Enum):
    SNO_CH = "SNO_Ch"
    SNO_F = "SNO_F"
    XSNO_CH = "xSNO_Ch"
    XSNO_F = "xSNO_F"
    XCSNO_CH = "xcSNO_Ch"
    XCSNO_F = "xcSNO_F"
    FNO = "FNO"
    DEEPONET = "DeepONet"
    EXACT = "Exact"


SNO_FAMILY = {Architecture.SNO_CH, Architecture.SNO_F, Architecture.XSNO_CH, Architecture.XSNO_F}
XCSNO_FAMILY = {Architecture.XCSNO_CH, Architecture.XCSNO_F}
FOURIER_VARIANTS = {Architecture.SNO_F, Architecture.XSNO_F, Architecture.XCSNO_F}

DEFAULT_ACTIVATION = {
    Architecture.FNO: Activation.RELU,
    Architecture.DEEPONET: Activation.TANH,
}


@dataclass(frozen=True)
class ModelSpec:
    """Architecture and sizes. Defaults are the full-size 1D settings."""

    architecture: Architecture = Architecture.SNO_F
    dim: int = 1
    n_coeffs: int = 100
    width: int = 100
    width_fourier: int = 51
    features: int = 20
    n1_layers: int = 1
    n2_layers: int = 3
    grid_size: int = 101
    modes: int = 16
    fno_width: int = 64
    fno_layers: int = 4
    branch_width: int = 100
    branch_layers: int = 4
    trunk_width: int = 100
    trunk_layers: int = 4
    activation: Optional[Activation] = None
    real_weights: bool = False
    eval_size: int = 100
    exact_rule: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "architecture", Architecture(self.architecture))
        if self.activation is not None:
            object.__setattr__(self, "activation", Activation(self.activation))
        if self.dim not in (1, 2):
            raise ValueError("models support D = 1 or D = 2")

    @classmethod
    def default(cls, architecture, dim: int = 1, **overrides) -> "ModelSpec":
        """Full-size defaults; 2D FNO uses 32 features and 12 modes."""
        base = {"architecture": Architecture(architecture), "dim": dim}
        if Architecture(architecture) is Architecture.FNO and dim == 2:
            base.update(fno_width=32, modes=12)
        base.update(overrides)
        return cls(**base)

    @property
    def resolved_activation(self) -> Activation:
        if self.activation is not None:
            return self.activation
        return DEFAULT_ACTIVATION.get(self.architecture, Activation.SOFTPLUS)

    def bases(self) -> Tuple[Basis, ...]:
        """Per-axis basis of the SNO family: Fourier variants use Fourier along x only."""
        if self.architecture in FOURIER_VARIANTS:
            return (Basis.FOURIER,) + (Basis.CHEBYSHEV,) * (self.dim - 1)
        return (Basis.CHEBYSHEV,) * self.dim

    def grids(self) -> Tuple[Grid, ...]:
        return tuple(Grid.UNIFORM if b is Basis.FOURIER else Grid.CHEBYSHEV for b in self.bases())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["architecture"] = self.architecture.value
        d["activation"] = self.activation.value if self.activation is not None else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        return cls(**d)


@dataclass(frozen=True)
class ParamSpec:
    name: str
    shape: Tuple[int, ...]
    fan_in: Optional[int]  # None marks a bias
    complex: bool


def as_leaves(params: Dict[str, np.ndarray]) -> Dict[str, DiffTensor]:
    return {k: DiffTensor(v, name=k) for k, v in params.items()}


def uniform_interpolation_matrix(n: int, m: int) -> np.ndarray:
    """Real m x n matrix taking uniform samples to Fourier-interpolated uniform samples."""
    if n == m:
        return np.eye(n)
    S = synthesis_matrix(Basis.FOURIER, n // 2 + 1, Grid.UNIFORM, m, real_signal=True)
    return (S @ analysis_matrix(Grid.UNIFORM, n, real_signal=True)).real


def chebyshev_to_uniform_matrix(n: int, m: int) -> np.ndarray:
    """Real m x n matrix taking samples on n Chebyshev nodes to the polynomial interpolant on m uniform nodes."""
    S = synthesis_matrix(Basis.CHEBYSHEV, n, Grid.UNIFORM, m)
    return (S @ analysis_matrix(Grid.CHEBYSHEV, n)).real


def grid_to_uniform_matrix(grid: Grid, n: int, m: int) -> np.ndarray:
    if Grid(grid) is Grid.CHEBYSHEV:
        return chebyshev_to_uniform_matrix(n, m)
    return uniform_interpolation_matrix(n, m)


def project_to_eval(out, mats: Sequence[np.ndarray]) -> DiffTensor:
    """Apply one (m, n) matrix per spatial axis of (batch, *axes) and keep the real part."""
    if len(mats) == 1:
        y = einsum("qx,bx->bq", mats[0], out)
    else:
        y = einsum("qx,ry,bxy->bqr", mats[0], mats[1], out)
    return y.real() if y.is_complex else y


def prepare_targets(targets: Sequence[CoeffSeries], eval_size: int) -> np.ndarray:
    """Target functions sampled on the common uniform evaluation grid."""
    rows = []
    for t in targets:
        sizes = (eval_size,) * t.dim
        rows.append(interpolate_to_grid(t, sizes, (Grid.UNIFORM,) * t.dim).values.real)
    return np.stack(rows)


class Model:
    """Base class: parameter declarations, initialization, prediction."""

    def __init__(self, spec: ModelSpec):
        self.spec = spec

    def parameters(self) -> List[ParamSpec]:
        raise NotImplementedError

    def prepare(self, inputs: Sequence[CoeffSeries]) -> np.ndarray:
        raise NotImplementedError

    def forward(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        raise NotImplementedError

    def init_params(self, seed: int) -> Dict[str, np.ndarray]:
        """Weights N(0,1) / fan_in, biases N(0,1); complex tensors draw both parts."""
        rng = np.random.default_rng(seed)
        params = {}
        for p in self.parameters():
            scale = 1.0 / p.fan_in if p.fan_in else 1.0
            value = rng.standard_normal(p.shape) * scale
            if p.complex:
                value = value + 1j * rng.standard_normal(p.shape) * scale
            params[p.name] = value
        return params

    def predict(self, params: Dict[str, np.ndarray], x: np.ndarray) -> np.ndarray:
        return self.forward(as_leaves(params), x).value

    def n_params(self) -> int:
        return int(sum(np.prod(p.shape) * (2 if p.complex else 1) for p in self.parameters()))

    def _check_dim(self, inputs: Sequence[CoeffSeries]) -> None:
        for s in inputs:
            if s.dim != self.spec.dim:
                raise BasisMismatchError(f"{self.spec.architecture.value} expects D={self.spec.dim} inputs, got D={s.dim}")

    def _eval_mats(self, grids: Sequence[Grid], sizes: Sequence[int]) -> List[np.ndarray]:
        return [grid_to_uniform_matrix(g, n, self.spec.eval_size) for g, n in zip(grids, sizes)]


class SNOModel(Model):
    """
    SNO: N1 -> N2 -> N3 on coefficient matrices (SNO_Ch, SNO_F), or on grid
    values (xSNO_Ch, xSNO_F) where the N2 operators are square grid-to-grid
    matrices and biases add constants at every node.
    """

    def __init__(self, spec: ModelSpec):
        super().__init__(spec)
        self.grid_space = spec.architecture in (Architecture.XSNO_CH, Architecture.XSNO_F)
        self.bases = spec.bases()
        if self.grid_space:
            self.in_sizes = (spec.grid_size,) * spec.dim
            self.out_sizes = self.in_sizes
            self._eval = self._eval_mats(spec.grids(), self.out_sizes)
        else:
            self.in_sizes = (spec.n_coeffs,) * spec.dim
            self.out_sizes = tuple(spec.width_fourier if b is Basis.FOURIER else spec.width for b in self.bases)
            self._eval = [
                synthesis_matrix(b, r, Grid.UNIFORM, spec.eval_size, real_signal=True)
                for b, r in zip(self.bases, self.out_sizes)
            ]

    def parameters(self) -> List[ParamSpec]:
        s = self.spec
        cplx = not s.real_weights
        out = []
        f_in = 1
        for i in range(s.n1_layers):
            out.append(ParamSpec(f"n1.{i}.A", (f_in, s.features), f_in, cplx))
            out.append(ParamSpec(f"n1.{i}.b", (s.features,), None, cplx))
            f_in = s.features
        k = self.in_sizes
        for i in range(s.n2_layers):
            r = self.out_sizes
            for d in range(s.dim):
                out.append(ParamSpec(f"n2.{i}.B{d}", (r[d], k[d]), k[d], cplx))
            out.append(ParamSpec(f"n2.{i}.A", (f_in, s.features), f_in, cplx))
            out.append(ParamSpec(f"n2.{i}.b", tuple(r) + (s.features,), None, cplx))
            f_in, k = s.features, r
        out.append(ParamSpec("n3.A", (f_in, 1), f_in, cplx))
        out.append(ParamSpec("n3.b", (1,), None, cplx))
        return out

    def prepare(self, inputs: Sequence[CoeffSeries]) -> np.ndarray:
        self._check_dim(inputs)
        if self.grid_space:
            grids = self.spec.grids()
            return np.stack([interpolate_to_grid(s, self.in_sizes, grids).values.real for s in inputs])
        return np.stack([to_basis(s, self.bases, self.in_sizes).coeffs for s in inputs])

    def features(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        """Output function matrix (batch, *out_sizes) before projection to the evaluation grid."""
        s = self.spec
        act = s.resolved_activation
        U = DiffTensor(np.asarray(x)[..., None])
        for i in range(s.n1_layers):
            U = n1_layer(U, params[f"n1.{i}.A"], params[f"n1.{i}.b"], act, self.grid_space)
        for i in range(s.n2_layers):
            Bs = [params[f"n2.{i}.B{d}"] for d in range(s.dim)]
            U = n2_layer(U, Bs, params[f"n2.{i}.A"], params[f"n2.{i}.b"], act)
        W = n1_layer(U, params["n3.A"], params["n3.b"], Activation.IDENTITY, self.grid_space)
        return W.reshape(W.shape[:-1])

    def forward(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        return project_to_eval(self.features(params, x), self._eval)


class XCSNOModel(Model):
    """
    xcSNO: two-layer grid N2 blocks around a residual coefficient block,
    U -N2-> V -F-> Vc -N3-> Yc -F^-1-> Y -N2-> W with N3(Vc) = N2(Vc) + Vc.
    The output block ends in a linear layer down to one feature.

    F is the DCT-I matrix (Chebyshev) or the centered DFT (Fourier).
    """

    def __init__(self, spec: ModelSpec):
        super().__init__(spec)
        if spec.dim != 1:
            raise ValueError("xcSNO is implemented for D = 1")
        n = spec.grid_size
        self.grid = spec.grids()[0]
        if self.grid is Grid.CHEBYSHEV:
            self.F = analysis_matrix(Grid.CHEBYSHEV, n)
            self.Finv = synthesis_matrix(Basis.CHEBYSHEV, n, Grid.CHEBYSHEV, n)
        else:
            self.F = analysis_matrix(Grid.UNIFORM, n, real_signal=False)
            self.Finv = synthesis_matrix(Basis.FOURIER, self.F.shape[0], Grid.UNIFORM, n, real_signal=False)
        self.nc = self.F.shape[0]
        self._eval = self._eval_mats((self.grid,), (n,))

    def parameters(self) -> List[ParamSpec]:
        s = self.spec
        n, f, cplx = s.grid_size, s.features, not s.real_weights
        out = []
        for i, f_in in enumerate((1, f)):
            out += [
                ParamSpec(f"in.{i}.B", (n, n), n, cplx),
                ParamSpec(f"in.{i}.A", (f_in, f), f_in, cplx),
                ParamSpec(f"in.{i}.b", (n, f), None, cplx),
            ]
        for i in range(s.n2_layers):
            out += [
                ParamSpec(f"res.{i}.B", (self.nc, self.nc), self.nc, cplx),
                ParamSpec(f"res.{i}.A", (f, f), f, cplx),
                ParamSpec(f"res.{i}.b", (self.nc, f), None, cplx),
            ]
        for i, f_out in enumerate((f, 1)):
            out += [
                ParamSpec(f"out.{i}.B", (n, n), n, cplx),
                ParamSpec(f"out.{i}.A", (f, f_out), f, cplx),
                ParamSpec(f"out.{i}.b", (n, f_out), None, cplx),
            ]
        return out

    def prepare(self, inputs: Sequence[CoeffSeries]) -> np.ndarray:
        self._check_dim(inputs)
        n = self.spec.grid_size
        return np.stack([interpolate_to_grid(s, n, self.grid).values.real for s in inputs])

    def features(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        s = self.spec
        act = s.resolved_activation
        U = DiffTensor(np.asarray(x)[..., None])
        for i in range(2):
            U = n2_layer(U, [params[f"in.{i}.B"]], params[f"in.{i}.A"], params[f"in.{i}.b"], act)
        Vc = axis_linear(U, self.F, 0)
        Y = Vc
        for i in range(s.n2_layers):
            last = i == s.n2_layers - 1
            Y = n2_layer(
                Y,
                [params[f"res.{i}.B"]],
                params[f"res.{i}.A"],
                params[f"res.{i}.b"],
                Activation.IDENTITY if last else act,
            )
        Yc = Y + Vc
        V = axis_linear(Yc, self.Finv, 0)
        W = n2_layer(V, [params["out.0.B"]], params["out.0.A"], params["out.0.b"], act)
        W = n2_layer(W, [params["out.1.B"]], params["out.1.A"], params["out.1.b"], Activation.IDENTITY)
        return W.reshape(W.shape[:-1])

    def forward(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        return project_to_eval(self.features(params, x), self._eval)


class FNOModel(Model):
    """
    FNO on a uniform grid: lift (f, coordinates) -> spectral layers
    sigma(K v + W v + b) -> project. K keeps the lowest ``modes`` harmonics
    (centered on the first axis and k >= 0 on the last axis in 2D).
    """

    def parameters(self) -> List[ParamSpec]:
        s = self.spec
        w = s.fno_width
        out = [ParamSpec("lift.W", (s.dim + 1, w), s.dim + 1, False), ParamSpec("lift.b", (w,), None, False)]
        mode_shape = (s.modes,) if s.dim == 1 else (2 * s.modes - 1, s.modes)
        for l in range(s.fno_layers):
            out += [
                ParamSpec(f"spec.{l}.R", mode_shape + (w, w), w, True),
                ParamSpec(f"skip.{l}.W", (w, w), w, False),
                ParamSpec(f"skip.{l}.b", (w,), None, False),
            ]
        out += [ParamSpec("proj.W", (w, 1), w, False), ParamSpec("proj.b", (1,), None, False)]
        return out

    def prepare(self, inputs: Sequence[CoeffSeries]) -> np.ndarray:
        self._check_dim(inputs)
        sizes = (self.spec.grid_size,) * self.spec.dim
        return np.stack([interpolate_to_grid(s, sizes, (Grid.UNIFORM,) * s.dim).values.real for s in inputs])

    def _mode_matrices(self, shape: Tuple[int, ...]):
        m = self.spec.modes
        for n in shape:
            if n < 2 * m + 1:
                raise GridError(f"FNO with {m} modes needs at least {2 * m + 1} grid points, got {n}")
        if len(shape) == 1:
            (n,) = shape
            F = analysis_matrix(Grid.UNIFORM, n, real_signal=True)[:m]
            G = synthesis_matrix(Basis.FOURIER, m, Grid.UNIFORM, n, real_signal=True)
            return [F], [G]
        n0, n1 = shape
        centered = analysis_matrix(Grid.UNIFORM, n0, real_signal=False)
        K0 = (centered.shape[0] - 1) // 2
        F0 = centered[K0 - (m - 1): K0 + m]
        G0 = synthesis_matrix(Basis.FOURIER, 2 * m - 1, Grid.UNIFORM, n0, real_signal=False)
        F1 = analysis_matrix(Grid.UNIFORM, n1, real_signal=True)[:m]
        G1 = synthesis_matrix(Basis.FOURIER, m, Grid.UNIFORM, n1, real_signal=True)
        return [F0, F1], [G0, G1]

    def spectral_conv(self, v: DiffTensor, R, Fs, Gs) -> DiffTensor:
        if len(Fs) == 1:
            vh = einsum("kx,bxc->bkc", Fs[0], v)
            wh = einsum("kco,bkc->bko", R, vh)
            return einsum("xk,bko->bxo", Gs[0], wh).real()
        vh = einsum("kx,ly,bxyc->bklc", Fs[0], Fs[1], v)
        wh = einsum("klco,bklc->bklo", R, vh)
        return einsum("xk,yl,bklo->bxyo", Gs[0], Gs[1], wh).real()

    def grid_apply(self, params: Dict[str, DiffTensor], values: np.ndarray) -> DiffTensor:
        """Run on samples of any uniform grid at least 2 modes + 1 wide; output on the same grid."""
        values = np.asarray(values, dtype=np.float64)
        shape = values.shape[1:]
        Fs, Gs = self._mode_matrices(shape)
        coords = np.meshgrid(*[uniform_points(n) for n in shape], indexing="ij")
        channels = [values] + [np.broadcast_to(c, values.shape) for c in coords]
        X = np.stack(channels, axis=-1)
        act = self.spec.resolved_activation
        v = dense(DiffTensor(X), params["lift.W"], params["lift.b"])
        for l in range(self.spec.fno_layers):
            k = self.spectral_conv(v, params[f"spec.{l}.R"], Fs, Gs)
            v = activation_apply(k + dense(v, params[f"skip.{l}.W"], params[f"skip.{l}.b"]), act)
        out = dense(v, params["proj.W"], params["proj.b"])
        return out.reshape(out.shape[:-1])

    def forward(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        out = self.grid_apply(params, x)
        mats = [uniform_interpolation_matrix(n, self.spec.eval_size) for n in out.shape[1:]]
        return project_to_eval(out, mats)


class DeepONetModel(Model):
    """
    DeepONet: output(y) = sum_p branch_p(sensors) trunk_p(y) + bias, with
    tanh dense stacks; the branch's last layer is linear.
    """

    def __init__(self, spec: ModelSpec):
        super().__init__(spec)
        self.n_sensors = spec.grid_size ** spec.dim
        axes = [uniform_points(spec.eval_size)] * spec.dim
        mesh = np.meshgrid(*axes, indexing="ij")
        self.query = np.stack([m.ravel() for m in mesh], axis=-1)

    def parameters(self) -> List[ParamSpec]:
        s = self.spec
        out = []
        sizes = [self.n_sensors] + [s.branch_width] * (s.branch_layers - 1) + [s.trunk_width]
        for i in range(s.branch_layers):
            out += [
                ParamSpec(f"branch.{i}.W", (sizes[i], sizes[i + 1]), sizes[i], False),
                ParamSpec(f"branch.{i}.b", (sizes[i + 1],), None, False),
            ]
        sizes = [s.dim] + [s.trunk_width] * s.trunk_layers
        for i in range(s.trunk_layers):
            out += [
                ParamSpec(f"trunk.{i}.W", (sizes[i], sizes[i + 1]), sizes[i], False),
                ParamSpec(f"trunk.{i}.b", (sizes[i + 1],), None, False),
            ]
        out.append(ParamSpec("bias", (1,), None, False))
        return out

    def sensor_values(self, g: GridFunction) -> np.ndarray:
        """Input samples on the sensor grid; other uniform grids are spectrally interpolated."""
        if g.shape == (self.spec.grid_size,) * self.spec.dim:
            return np.asarray(g.values.real).ravel()
        if any(gr is not Grid.UNIFORM for gr in g.grids):
            raise GridError(f"sensor grid mismatch: expected {self.spec.grid_size} uniform points per axis")
        series = analysis(g, real_signal=len(g.grids) == 1)
        sizes = (self.spec.grid_size,) * self.spec.dim
        return interpolate_to_grid(series, sizes).values.real.ravel()

    def prepare(self, inputs: Sequence[CoeffSeries]) -> np.ndarray:
        self._check_dim(inputs)
        sizes = (self.spec.grid_size,) * self.spec.dim
        return np.stack([interpolate_to_grid(s, sizes, (Grid.UNIFORM,) * s.dim).values.real.ravel() for s in inputs])

    def branch(self, params, sensors: np.ndarray) -> DiffTensor:
        if sensors.shape[-1] != self.n_sensors:
            raise GridError(f"DeepONet expects {self.n_sensors} sensors, got {sensors.shape[-1]}")
        h = DiffTensor(sensors)
        last = self.spec.branch_layers - 1
        for i in range(self.spec.branch_layers):
            h = dense(h, params[f"branch.{i}.W"], params[f"branch.{i}.b"], Activation.TANH if i < last else None)
        return h

    def trunk(self, params, points: np.ndarray) -> DiffTensor:
        t = DiffTensor(np.asarray(points, dtype=np.float64).reshape(-1, self.spec.dim))
        for i in range(self.spec.trunk_layers):
            t = dense(t, params[f"trunk.{i}.W"], params[f"trunk.{i}.b"], Activation.TANH)
        return t

    def forward(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        out = deeponet_combine(self.branch(params, x), self.trunk(params, self.query), params["bias"])
        return out.reshape((x.shape[0],) + (self.spec.eval_size,) * self.spec.dim)


def deeponet_combine(branch, trunk, bias=None) -> DiffTensor:
    """sum_p branch[b, p] trunk[q, p] (+ bias)."""
    out = einsum("bp,qp->bq", branch, trunk)
    return out + bias if bias is not None else out


class ExactModel(Model):
    """The exact spectral rule of a problem; no parameters, used as a baseline."""

    def parameters(self) -> List[ParamSpec]:
        return []

    def apply_rule(self, series: CoeffSeries) -> CoeffSeries:
        try:
            rule = EXACT_RULES[self.spec.exact_rule]
        except KeyError as e:
            raise ValueError(f"unknown exact rule {self.spec.exact_rule!r}") from e
        return rule(series)

    def prepare(self, inputs: Sequence[CoeffSeries]) -> np.ndarray:
        return prepare_targets([self.apply_rule(s) for s in inputs], self.spec.eval_size)

    def forward(self, params: Dict[str, DiffTensor], x: np.ndarray) -> DiffTensor:
        return DiffTensor(np.asarray(x))


def build_model(spec: ModelSpec) -> Model:
    arch = spec.architecture
    if arch in SNO_FAMILY:
        return SNOModel(spec)
    if arch in XCSNO_FAMILY:
        return XCSNOModel(spec)
    if arch is Architecture.FNO:
        return FNOModel(spec)
    if arch is Architecture.DEEPONET:
        return DeepONetModel(spec)
    return ExactModel(spec)


def init_params(spec: ModelSpec, seed: int) -> Dict[str, np.ndarray]:
    return build_model(spec).init_params(seed)


# ---------------------------------------------------------------------------
# function-level interfaces


def sno_forward(model: SNOModel, params: Dict[str, np.ndarray], series: CoeffSeries) -> CoeffSeries:
    """
    Coefficient-space SNO: the input is chopped/padded to the model's size and
    the output is a series of fixed shape in the model's bases.
    """
    if model.grid_space:
        raise BasisMismatchError("sno_forward needs a coefficient-space SNO")
    if series.dim != model.spec.dim:
        raise BasisMismatchError("input dimension does not match the model")
    x = model.prepare([series])
    out = model.features(as_leaves(params), x).value[0]
    return CoeffSeries(model.bases, out, real_signal=True)


def grid_forward(model: Model, params: Dict[str, np.ndarray], g: GridFunction) -> GridFunction:
    """
    Grid-space forward of xSNO / xcSNO / FNO: output values on the model grid.

    The input must be sampled on the model's own grid (any uniform grid for FNO).
    """
    leaves = as_leaves(params)
    values = np.asarray(g.values.real)[None]
    if isinstance(model, FNOModel):
        if any(gr is not Grid.UNIFORM for gr in g.grids):
            raise GridError("FNO needs a uniform grid")
        return GridFunction(g.grids, model.grid_apply(leaves, values).value[0])
    if isinstance(model, (SNOModel, XCSNOModel)):
        expected = model.spec.grids()
        if isinstance(model, SNOModel) and not model.grid_space:
            raise BasisMismatchError("use sno_forward for coefficient-space SNO")
        if g.grids != expected or g.shape != (model.spec.grid_size,) * model.spec.dim:
            raise GridError(f"input must live on the model grid {[x.value for x in expected]} of size {model.spec.grid_size}")
        return GridFunction(g.grids, model.features(leaves, values).value[0])
    raise BasisMismatchError(f"{model.spec.architecture.value} has no grid-space forward")


def xcsno_forward(model: XCSNOModel, params: Dict[str, np.ndarray], g: GridFunction) -> GridFunction:
    return grid_forward(model, params, g)


def fno_forward(model: FNOModel, params: Dict[str, np.ndarray], g: GridFunction) -> GridFunction:
    return grid_forward(model, params, g)


def deeponet_forward(model: DeepONetModel, params: Dict[str, np.ndarray], g: GridFunction, query) -> np.ndarray:
    """Values of the DeepONet output at arbitrary query points (shape (Q,) or (Q, D))."""
    leaves = as_leaves(params)
    sensors = model.sensor_values(g)[None]
    out = deeponet_combine(model.branch(leaves, sensors), model.trunk(leaves, query), leaves["bias"])
    return out.value[0]


def series_operator(model: Model, params: Dict[str, np.ndarray]):
    """
    The model as a grid-to-grid operator on uniform grids, for grid-discrepancy studies.

    SNO variants go through their series interface (analysis -> model ->
    synthesis on the same grid); FNO runs natively on the grid; DeepONet reads
    its sensors by interpolation and queries the trunk at the grid nodes.
    """
    leaves = as_leaves(params)

    def apply(g: GridFunction) -> GridFunction:
        if isinstance(model, FNOModel):
            return GridFunction(g.grids, model.grid_apply(leaves, np.asarray(g.values.real)[None]).value[0])
        if isinstance(model, DeepONetModel):
            nodes = np.meshgrid(*g.nodes(), indexing="ij")
            query = np.stack([n.ravel() for n in nodes], axis=-1)
            values = deeponet_forward(model, params, g, query)
            return GridFunction(g.grids, values.reshape(g.shape))
        series = analysis(g, real_signal=True)
        if isinstance(model, SNOModel) and not model.grid_space:
            out = sno_forward(model, params, series)
        else:
            grid_in = interpolate_to_grid(series, (model.spec.grid_size,) * model.spec.dim, model.spec.grids())
            out = analysis(grid_forward(model, params, grid_in), real_signal=True)
        return GridFunction(g.grids, interpolate_to_grid(out, g.shape, g.grids).values.real)

    return apply
