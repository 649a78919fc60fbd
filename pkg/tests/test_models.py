"""Tests for the architectures in src/nets/models.py."""
import numpy as np
import pytest

from src.errors import BasisMismatchError, GridError
from src.nets.autodiff import DiffTensor, einsum
from src.nets.layers import n2_layer
from src.nets.models import (
    Architecture,
    ModelSpec,
    as_leaves,
    build_model,
    deeponet_combine,
    deeponet_forward,
    fno_forward,
    grid_forward,
    init_params,
    prepare_targets,
    sno_forward,
    xcsno_forward,
)
from src.nets.training import gradient_check
from src.spectral.aliasing import Activation
from src.spectral.series import (
    Basis,
    CoeffSeries,
    Grid,
    GridFunction,
    analysis,
    analysis_matrix,
    chop,
    fit_length,
    interpolate_to_grid,
    synthesis,
)
from tests.helpers import central_difference, random_fourier

TOY = {
    Architecture.SNO_CH: dict(n_coeffs=4, width=3, features=2, n2_layers=2),
    Architecture.SNO_F: dict(n_coeffs=4, width_fourier=3, features=2, n2_layers=2),
    Architecture.XSNO_CH: dict(grid_size=5, features=2, n2_layers=2),
    Architecture.XSNO_F: dict(grid_size=5, features=2, n2_layers=2),
    Architecture.XCSNO_CH: dict(grid_size=5, features=2, n2_layers=1),
    Architecture.XCSNO_F: dict(grid_size=5, features=2, n2_layers=1),
    Architecture.FNO: dict(grid_size=17, modes=8, fno_width=4, fno_layers=2, activation=Activation.TANH),
    Architecture.DEEPONET: dict(grid_size=5, branch_width=4, branch_layers=2, trunk_width=4, trunk_layers=2),
}


def toy_spec(arch, dim=1, **extra):
    kwargs = dict(TOY[arch], eval_size=8)
    kwargs.update(extra)
    return ModelSpec(architecture=arch, dim=dim, **kwargs)


def toy_inputs(count=2, band=3, dim=1, seed=0):
    rng = np.random.default_rng(seed)
    return [random_fourier(rng, band, dim=dim) for _ in range(count)]


class TestModelSpec:
    """Test defaults and serialization."""

    def test_full_size_defaults(self):
        spec = ModelSpec()
        assert (spec.n2_layers, spec.width, spec.width_fourier, spec.features) == (3, 100, 51, 20)
        assert (spec.fno_width, spec.fno_layers, spec.modes) == (64, 4, 16)
        assert (spec.branch_layers, spec.branch_width, spec.trunk_layers, spec.trunk_width) == (4, 100, 4, 100)

    def test_fno_2d_defaults(self):
        spec = ModelSpec.default(Architecture.FNO, dim=2)
        assert spec.fno_width == 32 and spec.modes == 12

    def test_default_activations(self):
        assert ModelSpec(architecture="FNO").resolved_activation is Activation.RELU
        assert ModelSpec(architecture="DeepONet").resolved_activation is Activation.TANH
        assert ModelSpec(architecture="SNO_Ch").resolved_activation is Activation.SOFTPLUS

    def test_dict_roundtrip(self):
        spec = toy_spec(Architecture.FNO)
        assert ModelSpec.from_dict(spec.to_dict()) == spec

    def test_bases(self):
        assert ModelSpec(architecture="SNO_F", dim=2).bases() == (Basis.FOURIER, Basis.CHEBYSHEV)
        assert ModelSpec(architecture="xSNO_Ch").grids() == (Grid.CHEBYSHEV,)


class TestInitialization:
    """Test parameter initialization."""

    def test_deterministic(self):
        spec = toy_spec(Architecture.SNO_F)
        a, b = init_params(spec, 7), init_params(spec, 7)
        assert list(a) == list(b)
        for k in a:
            np.testing.assert_array_equal(a[k], b[k])

    def test_seed_changes_params(self):
        spec = toy_spec(Architecture.SNO_F)
        assert not np.array_equal(init_params(spec, 1)["n3.A"], init_params(spec, 2)["n3.A"])

    def test_weight_scale(self):
        """Test entries of a fan-in-100 tensor have std 1/100."""
        spec = ModelSpec(architecture="SNO_Ch", n_coeffs=100, width=100)
        B = init_params(spec, 0)["n2.0.B0"]
        assert B.shape == (100, 100)
        assert np.std(B.real) == pytest.approx(0.01, rel=0.2)
        assert np.std(B.imag) == pytest.approx(0.01, rel=0.2)

    def test_bias_scale(self):
        spec = ModelSpec(architecture="SNO_Ch", n_coeffs=100, width=100)
        params = init_params(spec, 0)
        biases = np.concatenate([params[f"n2.{i}.b"].ravel() for i in range(3)])
        samples = np.concatenate([biases.real, biases.imag])
        assert samples.size >= 10 ** 4
        assert np.std(samples) == pytest.approx(1.0, rel=0.1)

    def test_real_weights_flag(self):
        params = init_params(toy_spec(Architecture.SNO_CH, real_weights=True), 0)
        assert not any(np.iscomplexobj(v) for v in params.values())


def identity_sno(arch, n):
    spec = ModelSpec(
        architecture=arch, n_coeffs=n, width=n, width_fourier=n, features=1,
        n1_layers=1, n2_layers=1, activation=Activation.IDENTITY, eval_size=16,
    )
    params = {
        "n1.0.A": np.ones((1, 1), dtype=complex), "n1.0.b": np.zeros(1, dtype=complex),
        "n2.0.B0": np.eye(n, dtype=complex), "n2.0.A": np.ones((1, 1), dtype=complex),
        "n2.0.b": np.zeros((n, 1), dtype=complex),
        "n3.A": np.ones((1, 1), dtype=complex), "n3.b": np.zeros(1, dtype=complex),
    }
    return build_model(spec), params


class TestSNO:
    """Test coefficient- and grid-space SNO."""

    @pytest.mark.parametrize("arch", [Architecture.SNO_CH, Architecture.SNO_F])
    def test_identity_assembly(self, arch):
        model, params = identity_sno(arch, 6)
        if arch is Architecture.SNO_F:
            f = toy_inputs(1, band=4)[0]
        else:
            f = CoeffSeries((Basis.CHEBYSHEV,), np.random.default_rng(1).standard_normal(5))
        out = sno_forward(model, params, f)
        np.testing.assert_allclose(out.coeffs, fit_length(f, 6).coeffs, atol=1e-14)
        x = model.prepare([f])
        np.testing.assert_allclose(model.predict(params, x)[0], prepare_targets([f], 16)[0], atol=1e-10)

    def test_zero_final_layer(self):
        model = build_model(toy_spec(Architecture.SNO_F))
        params = model.init_params(0)
        params["n3.A"] = np.zeros_like(params["n3.A"])
        params["n3.b"] = np.zeros_like(params["n3.b"])
        out = sno_forward(model, params, toy_inputs(1)[0])
        assert np.max(np.abs(out.coeffs)) == 0.0

    def test_fixed_output_shape(self):
        """Test the output shape does not depend on the input band."""
        model = build_model(toy_spec(Architecture.SNO_F))
        params = model.init_params(0)
        for band in (1, 3, 12):
            out = sno_forward(model, params, toy_inputs(1, band=band)[0])
            assert out.shape == (3,) and out.bases == (Basis.FOURIER,)

    def test_deterministic(self):
        model = build_model(toy_spec(Architecture.SNO_CH))
        params = model.init_params(3)
        x = model.prepare(toy_inputs(3))
        np.testing.assert_array_equal(model.predict(params, x), model.predict(params, x))

    def test_dimension_mismatch(self):
        model = build_model(toy_spec(Architecture.SNO_F))
        with pytest.raises(BasisMismatchError):
            sno_forward(model, model.init_params(0), toy_inputs(1, dim=2)[0])

    def test_two_dimensional_shapes(self):
        spec = toy_spec(Architecture.SNO_F, dim=2, n_coeffs=3, width=3)
        model = build_model(spec)
        params = model.init_params(0)
        assert params["n2.0.B0"].shape == (3, 3) and params["n2.0.B1"].shape == (3, 3)
        y = model.predict(params, model.prepare(toy_inputs(2, dim=2)))
        assert y.shape == (2, 8, 8) and np.isrealobj(y)

    def test_xsno_grid_forward(self):
        model = build_model(toy_spec(Architecture.XSNO_CH))
        params = model.init_params(0)
        g = interpolate_to_grid(toy_inputs(1)[0], 5, Grid.CHEBYSHEV)
        out = grid_forward(model, params, g)
        assert out.grids == (Grid.CHEBYSHEV,) and out.shape == (5,)
        with pytest.raises(GridError):
            grid_forward(model, params, interpolate_to_grid(toy_inputs(1)[0], 6, Grid.CHEBYSHEV))


def identity_xcsno(arch, n):
    spec = ModelSpec(
        architecture=arch, grid_size=n, features=1, n2_layers=1, activation=Activation.IDENTITY, eval_size=n
    )
    model = build_model(spec)
    params = {k: np.zeros_like(v) for k, v in model.init_params(0).items()}
    for name in ("in.0", "in.1", "out.0", "out.1"):
        params[f"{name}.B"] = np.eye(n, dtype=complex)
        params[f"{name}.A"] = np.ones((1, 1), dtype=complex)
    return model, params


class TestXCSNO:
    """Test the mixed grid/coefficient architecture."""

    @pytest.mark.parametrize("arch, grid", [(Architecture.XCSNO_CH, Grid.CHEBYSHEV), (Architecture.XCSNO_F, Grid.UNIFORM)])
    def test_identity_blocks(self, arch, grid):
        model, params = identity_xcsno(arch, 9)
        values = np.random.default_rng(0).standard_normal(9)
        out = xcsno_forward(model, params, GridFunction(grid, values))
        np.testing.assert_allclose(out.values, values, atol=1e-12)

    def test_block_layers(self):
        spec = toy_spec(Architecture.XCSNO_F, n2_layers=2)
        shapes = {p.name: p.shape for p in build_model(spec).parameters()}
        blocks = {}
        for name in shapes:
            block, layer = name.split(".")[:2]
            blocks.setdefault(block, set()).add(layer)
        assert blocks == {"in": {"0", "1"}, "res": {"0", "1"}, "out": {"0", "1"}}
        assert shapes["out.0.A"] == (2, 2) and shapes["out.1.A"] == (2, 1)
        assert shapes["out.0.b"] == (5, 2) and shapes["out.1.b"] == (5, 1)

    def test_residual_block_identity(self):
        """Test zero residual weights reduce the coefficient block to the identity."""
        spec = toy_spec(Architecture.XCSNO_CH, activation=Activation.TANH)
        model = build_model(spec)
        params = model.init_params(1)
        for k in params:
            if k.startswith("res."):
                params[k] = np.zeros_like(params[k])
        x = model.prepare(toy_inputs(2))
        out = model.features(as_leaves(params), x).value

        U = DiffTensor(x[..., None])
        for i in range(2):
            U = n2_layer(U, [params[f"in.{i}.B"]], params[f"in.{i}.A"], params[f"in.{i}.b"], Activation.TANH)
        W = n2_layer(U, [params["out.0.B"]], params["out.0.A"], params["out.0.b"], Activation.TANH)
        W = n2_layer(W, [params["out.1.B"]], params["out.1.A"], params["out.1.b"])
        np.testing.assert_allclose(out, W.value[..., 0], atol=1e-12)

    def test_gradient_through_transform(self):
        F = analysis_matrix(Grid.CHEBYSHEV, 6)
        x0 = np.random.default_rng(2).standard_normal((1, 6))
        x = DiffTensor(x0)
        einsum("kx,bx->bk", F, x).sum_squares().backward()

        def loss(v):
            return float(np.sum(np.abs(np.einsum("kx,bx->bk", F, v)) ** 2))

        fd = central_difference(loss, x0)
        np.testing.assert_allclose(x.grad, fd, atol=1e-6)

    def test_two_dimensional_rejected(self):
        with pytest.raises(ValueError):
            build_model(toy_spec(Architecture.XCSNO_F, dim=2))


class TestFNO:
    """Test the Fourier neural operator baseline."""

    def test_zero_weights_give_constant(self):
        model = build_model(toy_spec(Architecture.FNO, activation=Activation.RELU))
        params = model.init_params(0)
        for k in params:
            if k.startswith(("spec.", "skip.")) and not k.endswith(".b"):
                params[k] = np.zeros_like(params[k])
        g = interpolate_to_grid(toy_inputs(1)[0], 17, Grid.UNIFORM)
        out = fno_forward(model, params, g).values
        assert np.ptp(out) < 1e-12

    def test_identity_modes_are_chop(self):
        spec = toy_spec(Architecture.FNO, modes=8, fno_width=1)
        model = build_model(spec)
        f = toy_inputs(1, band=20)[0]
        g = synthesis(f, 41)
        Fs, Gs = model._mode_matrices((41,))
        R = np.ones((8, 1, 1), dtype=complex)
        out = model.spectral_conv(DiffTensor(np.asarray(g.values.real)[None, :, None]), R, Fs, Gs).value[0, :, 0]
        expected = synthesis(chop(f, 8), 41).values.real
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_band_confinement(self):
        """Test output without skip paths or nonlinearity stays within the retained modes."""
        spec = toy_spec(Architecture.FNO, activation=Activation.IDENTITY, modes=4)
        model = build_model(spec)
        params = model.init_params(0)
        for k in params:
            if k.startswith("skip.") and k.endswith(".W"):
                params[k] = np.zeros_like(params[k])
        g = interpolate_to_grid(toy_inputs(1, band=12)[0], 64, Grid.UNIFORM)
        out = fno_forward(model, params, g)
        c = analysis(out).coeffs
        assert np.max(np.abs(c[4:])) < 1e-12 * np.max(np.abs(c))

    def test_grid_too_small(self):
        model = build_model(toy_spec(Architecture.FNO, grid_size=10))
        with pytest.raises(GridError):
            model.predict(model.init_params(0), model.prepare(toy_inputs(1)))

    def test_any_grid_size(self):
        model = build_model(toy_spec(Architecture.FNO))
        params = model.init_params(0)
        for n in (17, 32, 64):
            out = fno_forward(model, params, interpolate_to_grid(toy_inputs(1)[0], n, Grid.UNIFORM))
            assert out.shape == (n,)

    def test_two_dimensional(self):
        spec = ModelSpec(architecture="FNO", dim=2, modes=2, fno_width=3, fno_layers=1, grid_size=6, eval_size=6)
        model = build_model(spec)
        params = model.init_params(0)
        assert params["spec.0.R"].shape == (3, 2, 3, 3)
        assert model.predict(params, model.prepare(toy_inputs(2, dim=2))).shape == (2, 6, 6)


class TestDeepONet:
    """Test the branch/trunk baseline."""

    def test_zero_branch(self):
        model = build_model(toy_spec(Architecture.DEEPONET))
        params = model.init_params(0)
        params["branch.1.W"] = np.zeros_like(params["branch.1.W"])
        params["branch.1.b"] = np.zeros_like(params["branch.1.b"])
        params["bias"] = np.zeros(1)
        g = interpolate_to_grid(toy_inputs(1)[0], 5, Grid.UNIFORM)
        values = deeponet_forward(model, params, g, np.linspace(-1, 1, 7))
        np.testing.assert_array_equal(values, np.zeros(7))

    def test_single_basis_combination(self):
        y = np.linspace(-1, 1, 9)
        trunk = np.stack([y, np.cos(y), np.ones_like(y)], axis=1)
        out = deeponet_combine(np.array([[1.0, 0.0, 0.0]]), trunk).value
        np.testing.assert_allclose(out[0], y)

    def test_sensor_mismatch(self):
        model = build_model(toy_spec(Architecture.DEEPONET))
        params = model.init_params(0)
        g = GridFunction(Grid.CHEBYSHEV, np.ones(7))
        with pytest.raises(GridError):
            deeponet_forward(model, params, g, np.zeros(3))
        with pytest.raises(GridError):
            model.predict(params, np.ones((1, 6)))

    def test_resampled_sensors(self):
        model = build_model(toy_spec(Architecture.DEEPONET))
        params = model.init_params(0)
        f = toy_inputs(1, band=2)[0]
        coarse = deeponet_forward(model, params, interpolate_to_grid(f, 5, Grid.UNIFORM), [0.1, 0.4])
        fine = deeponet_forward(model, params, interpolate_to_grid(f, 20, Grid.UNIFORM), [0.1, 0.4])
        np.testing.assert_allclose(coarse, fine, atol=1e-12)


class TestExact:
    """Test the exact-rule oracle."""

    def test_identity_rule(self):
        model = build_model(ModelSpec(architecture="Exact", eval_size=32))
        inputs = toy_inputs(3)
        y = model.predict({}, model.prepare(inputs))
        np.testing.assert_allclose(y, prepare_targets(inputs, 32), atol=1e-14)

    def test_unknown_rule(self):
        model = build_model(ModelSpec(architecture="Exact", exact_rule="nope"))
        with pytest.raises(ValueError):
            model.prepare(toy_inputs(1))


class TestGradients:
    """Test reverse-mode gradients of every architecture against central differences."""

    @pytest.mark.parametrize("arch", list(TOY))
    def test_gradient_check_1d(self, arch):
        model = build_model(toy_spec(arch))
        params = model.init_params(11)
        x = model.prepare(toy_inputs(2))
        assert gradient_check(model, params, x) < 1e-5

    @pytest.mark.parametrize("arch", [Architecture.SNO_F, Architecture.XSNO_CH])
    def test_gradient_check_2d(self, arch):
        model = build_model(toy_spec(arch, dim=2, n_coeffs=3, width=3, width_fourier=3, grid_size=4, n2_layers=1))
        params = model.init_params(12)
        x = model.prepare(toy_inputs(2, dim=2))
        assert gradient_check(model, params, x) < 1e-5
