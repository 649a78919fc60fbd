"""
Algebra of coefficient sequences with an implicit tail of zeros.

Sequences of different lengths add after zero extension, and a matrix with
k columns acts on any sequence by zero-extending or truncating it to k
entries. Read back in function space, a matrix acting on coefficients is a
low-rank integral operator; :func:`kernel_eval` gives its kernel.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import BasisMismatchError, DomainError
from .series import Basis, CoeffSeries, basis_values

logger = logging.getLogger(__name__)


def _extend(v: np.ndarray, n: int) -> np.ndarray:
    """Zero-extend (or truncate) the last axis to length n."""
    cur = v.shape[-1]
    if cur >= n:
        return v[..., :n]
    out = np.zeros(v.shape[:-1] + (n,), dtype=np.complex128)
    out[..., :cur] = v
    return out


@dataclass(frozen=True, eq=False)
class Seq:
    """Finite prefix of a zero-tailed coefficient sequence."""

    entries: np.ndarray
    basis: Basis = Basis.CHEBYSHEV

    def __post_init__(self):
        entries = np.atleast_1d(np.array(self.entries, dtype=np.complex128))
        if entries.ndim != 1:
            raise ValueError("Seq entries must be one-dimensional")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "basis", Basis(self.basis))

    def __len__(self) -> int:
        return self.entries.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Seq):
            return NotImplemented
        if self.basis != other.basis:
            return False
        n = max(len(self), len(other))
        return bool(np.array_equal(_extend(self.entries, n), _extend(other.entries, n)))

    __hash__ = None

    def canonical(self) -> "Seq":
        """Same sequence with explicit trailing zeros removed."""
        nz = np.nonzero(self.entries)[0]
        n = int(nz[-1]) + 1 if nz.size else 0
        return Seq(self.entries[:n], self.basis)

    def __add__(self, other: "Seq") -> "Seq":
        return seq_add(self, other)

    @classmethod
    def from_series(cls, series: CoeffSeries) -> "Seq":
        if series.dim != 1:
            raise BasisMismatchError("only one-dimensional series map to a Seq")
        return cls(series.coeffs, series.bases[0])

    def to_series(self, real_signal: bool = True) -> CoeffSeries:
        entries = self.entries if len(self) else np.zeros(1)
        return CoeffSeries((self.basis,), entries, real_signal=real_signal)


@dataclass(frozen=True)
class SeqOperator:
    """r x k matrix that only sees the first k coefficients of its input."""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.ndim != 2:
            raise ValueError("SeqOperator needs a 2-D matrix")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def __matmul__(self, psi: Seq) -> Seq:
        return seq_matvec(self, psi)


def seq_add(a: Seq, b: Seq) -> Seq:
    """Entrywise sum after zero extension to the longer length."""
    if a.basis != b.basis:
        raise BasisMismatchError(f"cannot add {a.basis.value} and {b.basis.value} sequences")
    n = max(len(a), len(b))
    return Seq(_extend(a.entries, n) + _extend(b.entries, n), a.basis)


def seq_matvec(B: Union[SeqOperator, np.ndarray], psi: Seq) -> Seq:
    """B applied to psi zero-extended or truncated to B's column count."""
    if not isinstance(B, SeqOperator):
        B = SeqOperator(B)
    return Seq(B.matrix @ _extend(psi.entries, B.cols), psi.basis)


def seq_inner(chi: Seq, psi: Seq) -> complex:
    """sum conj(chi_i) psi_i over the common zero-extended index set."""
    if chi.basis != psi.basis:
        raise BasisMismatchError(f"cannot pair {chi.basis.value} with {psi.basis.value}")
    n = min(len(chi), len(psi))
    return complex(np.vdot(chi.entries[:n], psi.entries[:n]))


def bias_broadcast_add(U: np.ndarray, b: Union[Seq, np.ndarray]) -> np.ndarray:
    """
    Add the row sequence b to every row of U.

    Args:
        U: k x l matrix whose rows are coefficient sequences
        b: row of length m

    Returns:
        k x max(l, m) matrix, row i equal to seq_add(U[i], b)
    """
    U = np.atleast_2d(np.asarray(U, dtype=np.complex128))
    entries = b.entries if isinstance(b, Seq) else np.asarray(b, dtype=np.complex128).ravel()
    n = max(U.shape[1], entries.size)
    return _extend(U, n) + _extend(entries, n)[None, :]


def dual_weights(basis: Basis, n: int) -> np.ndarray:
    """
    w_j = 1 / ||g_j||^2 under the orthogonality measure of the basis.

    Fourier: plain measure on [-1, 1], ||e^{i pi j y}||^2 = 2.
    Chebyshev: dy / sqrt(1 - y^2), ||T_j||^2 = pi / (2 - delta_j0).
    """
    basis = Basis(basis)
    if basis is Basis.FOURIER:
        return np.full(n, 0.5)
    w = np.full(n, 2.0 / np.pi)
    w[0] = 1.0 / np.pi
    return w


def kernel_eval(
    B: Union[SeqOperator, np.ndarray], x, y, basis: Basis, centered: bool = False
) -> Union[complex, np.ndarray]:
    """
    Kernel K(x, y) = sum_ij B_ij g_i(x) conj(g_j(y)) w_j of the integral operator
    that B represents in coefficient space.

    Fourier harmonics are g_j = e^{i pi j y} with j >= 0, so the kernel only
    sees the nonnegative harmonics of its argument: the identity maps cos(pi y)
    to e^{i pi x} / 2. With ``centered`` rows and columns run over j = -K..K
    (odd sizes), matching :func:`unpack`, and real functions are reproduced whole.

    x and y broadcast against each other.
    """
    if not isinstance(B, SeqOperator):
        B = SeqOperator(B)
    basis = Basis(basis)
    if centered and basis is Basis.FOURIER and (B.rows % 2 == 0 or B.cols % 2 == 0):
        raise ValueError(f"centered Fourier kernels need odd sizes, got {B.rows}x{B.cols}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.any(np.abs(x) > 1.0 + 1e-12) or np.any(np.abs(y) > 1.0 + 1e-12):
        raise DomainError("kernel arguments must satisfy |x|, |y| <= 1")
    x, y = np.broadcast_arrays(x, y)
    gx = basis_values(basis, B.rows, x, centered=centered)
    gy = np.conj(basis_values(basis, B.cols, y, centered=centered)) * dual_weights(basis, B.cols)
    out = np.einsum("...i,ij,...j->...", gx, B.matrix, gy)
    return complex(out) if out.ndim == 0 else out
