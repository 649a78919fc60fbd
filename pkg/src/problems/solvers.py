"""
Reference solvers producing training targets.

* Chebyshev collocation for -div(k grad u) = f with homogeneous Dirichlet
  data, in one and two dimensions; boundary unknowns are eliminated and the
  interior system is solved by dense LU (scipy).
* Viscous Burgers u_t + (u^2 / 2)_x = nu u_xx on the periodic [-1, 1],
  stepped with integrating-factor RK4 in Fourier space; the quadratic term
  is dealiased with the 3/2 rule.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..errors import SolverError
from ..spectral.series import (
    Basis,
    CoeffSeries,
    Grid,
    GridFunction,
    cheb_points,
    fit_length,
    interpolate_to_grid,
    norm_l2,
)

logger = logging.getLogger(__name__)

MAX_ELLIPTIC_2D_N = 48
BLOWUP_THRESHOLD = 1e3
BLOWUP_CHECK_STEPS = 100


def cheb_diff_matrix(n: int) -> np.ndarray:
    """
    First-derivative collocation matrix on cheb_points(n), shape (n+1, n+1).

    Diagonal entries come from the negative-sum trick (rows of D annihilate
    constants), which is more accurate than the closed-form diagonal.
    """
    if n < 1:
        raise SolverError("differentiation matrix needs n >= 1")
    x = cheb_points(n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dX = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dX + np.eye(n + 1))
    return D - np.diag(D.sum(axis=1))


def _coefficient_on_nodes(k: Union[CoeffSeries, np.ndarray, float], n: int) -> np.ndarray:
    if isinstance(k, CoeffSeries):
        values = interpolate_to_grid(k, n + 1, Grid.CHEBYSHEV).values
    else:
        values = np.broadcast_to(np.asarray(k, dtype=np.complex128), (n + 1,))
    if np.max(np.abs(values.imag)) > 1e-10 * max(1.0, np.max(np.abs(values))):
        raise SolverError("diffusion coefficient must be real")
    values = values.real
    if np.min(values) <= 0:
        raise SolverError(f"diffusion coefficient must be positive, min is {np.min(values):.3g}")
    return values


def _forcing_on(forcing, shape) -> np.ndarray:
    if callable(forcing):
        axes = [cheb_points(m - 1) for m in shape]
        return np.asarray(forcing(*np.meshgrid(*axes, indexing="ij")), dtype=np.float64)
    return np.broadcast_to(np.asarray(forcing, dtype=np.float64), shape).copy()


def _lu_solve(L: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        lu = linalg.lu_factor(L, check_finite=True)
        u = linalg.lu_solve(lu, rhs)
    except (linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"collocation system could not be solved: {e}") from e
    if not np.all(np.isfinite(u)):
        raise SolverError("collocation system is singular")
    return u


def elliptic_solve_1d(k, n: int = 64, forcing=1.0) -> GridFunction:
    """
    Solve -(k u')' = f on [-1, 1] with u(+-1) = 0.

    Args:
        k: diffusion coefficient, a CoeffSeries (evaluated on the nodes) or node values
        n: polynomial degree; the solution lives on cheb_points(n)
        forcing: constant, callable f(x) or node values

    Returns:
        u on the Chebyshev grid of size n + 1
    """
    if n < 2:
        raise SolverError("elliptic solve needs n >= 2 (no interior nodes otherwise)")
    kv = _coefficient_on_nodes(k, n)
    D = cheb_diff_matrix(n)
    L = -D @ (kv[:, None] * D)
    rhs = _forcing_on(forcing, (n + 1,))
    u = np.zeros(n + 1)
    u[1:n] = _lu_solve(L[1:n, 1:n], rhs[1:n])
    return GridFunction((Grid.CHEBYSHEV,), u)


def elliptic_solve_2d(kx, ky, n: int = 24, forcing=1.0) -> GridFunction:
    """
    Solve -div(k(x) k(y) grad u) = f on [-1, 1]^2 with u = 0 on the boundary.

    The operator is assembled with Kronecker products on the (n+1)^2 tensor
    grid, so memory grows like n^4; degrees above MAX_ELLIPTIC_2D_N are refused.

    Returns:
        u on the (n+1) x (n+1) Chebyshev grid, axis 0 = x
    """
    if n < 2:
        raise SolverError("elliptic solve needs n >= 2 (no interior nodes otherwise)")
    if n > MAX_ELLIPTIC_2D_N:
        raise SolverError(f"2D collocation limited to n <= {MAX_ELLIPTIC_2D_N}, got {n}")
    kxv, kyv = _coefficient_on_nodes(kx, n), _coefficient_on_nodes(ky, n)
    D = cheb_diff_matrix(n)
    eye = np.eye(n + 1)
    Dx, Dy = np.kron(D, eye), np.kron(eye, D)
    K = np.outer(kxv, kyv).ravel()
    L = -(Dx @ (K[:, None] * Dx) + Dy @ (K[:, None] * Dy))
    rhs = _forcing_on(forcing, (n + 1, n + 1)).ravel()
    interior = np.zeros((n + 1, n + 1), dtype=bool)
    interior[1:n, 1:n] = True
    inner = np.flatnonzero(interior.ravel())
    logger.debug(f"2D elliptic system with {inner.size} unknowns")
    u = np.zeros((n + 1) ** 2)
    u[inner] = _lu_solve(L[np.ix_(inner, inner)], rhs[inner])
    u = u.reshape(n + 1, n + 1)
    return GridFunction((Grid.CHEBYSHEV, Grid.CHEBYSHEV), u)


# ---------------------------------------------------------------------------
# Burgers


@dataclass
class BurgersTrajectory:
    """Solution snapshots (packed real Fourier series) at the requested times."""

    times: np.ndarray
    snapshots: List[List[CoeffSeries]]
    energy: np.ndarray = field(default=None)

    def final(self) -> List[CoeffSeries]:
        return [s[-1] for s in self.snapshots]


def _dealias_size(n_packed: int) -> int:
    m = 3 * n_packed
    return m + (m % 2)


def _to_grid(c: np.ndarray, m: int) -> np.ndarray:
    """Packed coefficients (batch, K+1) -> samples on uniform_points(m)."""
    sign = (-1.0) ** np.arange(c.shape[-1])
    X = np.zeros(c.shape[:-1] + (m // 2 + 1,), dtype=np.complex128)
    X[..., : c.shape[-1]] = m * sign * c
    return np.fft.irfft(X, m, axis=-1)


def _from_grid(u: np.ndarray, n_packed: int) -> np.ndarray:
    sign = (-1.0) ** np.arange(n_packed)
    return sign * np.fft.rfft(u, axis=-1)[..., :n_packed] / u.shape[-1]


class BurgersStepper:
    """Integrating-factor RK4 for the packed Fourier coefficients of a batch of solutions."""

    def __init__(self, nu: float, n_packed: int):
        if nu < 0:
            raise SolverError("viscosity must be non-negative")
        self.nu = nu
        self.n_packed = n_packed
        self.m = _dealias_size(n_packed)
        self.wavenumbers = np.pi * np.arange(n_packed)

    def nonlinear(self, c: np.ndarray) -> np.ndarray:
        u = _to_grid(c, self.m)
        return -0.5j * self.wavenumbers * _from_grid(u * u, self.n_packed)

    def step(self, c: np.ndarray, dt: float) -> np.ndarray:
        E = np.exp(-self.nu * self.wavenumbers ** 2 * dt / 2.0)
        E2 = E * E
        a = dt * self.nonlinear(c)
        b = dt * self.nonlinear(E * (c + a / 2.0))
        cc = dt * self.nonlinear(E * c + b / 2.0)
        d = dt * self.nonlinear(E2 * c + E * cc)
        return E2 * c + (E2 * a + 2.0 * E * (b + cc) + d) / 6.0


def _check_bounded(c: np.ndarray, m: int, t: float) -> None:
    if not np.all(np.isfinite(c)) or np.max(np.abs(_to_grid(c, m))) > BLOWUP_THRESHOLD:
        raise SolverError(f"Burgers solution blew up by t={t:g}")


def burgers_solve(
    initial: Union[CoeffSeries, Sequence[CoeffSeries]],
    nu: float,
    times: Optional[Sequence[float]] = None,
    dt: float = 1e-4,
    n_harmonics: int = 100,
) -> BurgersTrajectory:
    """
    Integrate viscous Burgers from one or several periodic initial conditions.

    Args:
        initial: packed real Fourier series (a single one or a batch)
        nu: viscosity
        times: output times (default [1.0]); steps are shrunk so each is hit exactly
        dt: maximum time step
        n_harmonics: resolved band is n_harmonics // 2 packed harmonics

    Returns:
        trajectory with one list of snapshots per initial condition

    Raises:
        SolverError: the solution leaves the bound BLOWUP_THRESHOLD
    """
    batch = [initial] if isinstance(initial, CoeffSeries) else list(initial)
    for f in batch:
        if f.bases != (Basis.FOURIER,) or not f.real_signal:
            raise SolverError("Burgers initial data must be a packed 1D Fourier series")
    n_packed = n_harmonics // 2 + 1
    c = np.stack([fit_length(f, n_packed).coeffs for f in batch])
    times = np.asarray([1.0] if times is None else times, dtype=np.float64)
    if np.any(times < 0):
        raise SolverError("output times must be non-negative")
    stepper = BurgersStepper(nu, n_packed)

    order = np.argsort(times, kind="stable")
    out = np.zeros((len(times),) + c.shape, dtype=np.complex128)
    t_now = 0.0
    for j in order:
        span = times[j] - t_now
        n_steps = int(np.ceil(span / dt - 1e-12)) if span > 0 else 0
        for step in range(1, n_steps + 1):
            c = stepper.step(c, span / n_steps)
            if step % BLOWUP_CHECK_STEPS == 0:
                _check_bounded(c, stepper.m, t_now + step * span / n_steps)
        _check_bounded(c, stepper.m, times[j])
        t_now = times[j]
        out[j] = c

    snapshots = [
        [CoeffSeries((Basis.FOURIER,), out[j, b]) for j in range(len(times))] for b in range(len(batch))
    ]
    energy = np.array([[0.5 * norm_l2(s) ** 2 for s in row] for row in snapshots])
    logger.debug(f"Burgers: {len(batch)} solutions, nu={nu}, {len(times)} output times")
    return BurgersTrajectory(times=times, snapshots=snapshots, energy=energy)
