"""Dense complex linear algebra for small bipartite systems.

Basis ordering throughout the package is |x> (x) |y> with the X index major,
i.e. the composite index is ``x * dim_y + y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
MAX_DIM = 64


class InvalidStateError(ValueError):
    """Raised when a matrix violates the density-matrix invariants."""


class NotHermitianError(InvalidStateError):
    pass


class DomainError(ValueError):
    """A matrix function is undefined somewhere on the spectrum."""


def hermiticity_violation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Bipartite density matrix on X (x) Y.

    The constructor validates Hermiticity, unit trace and positivity; use
    ``DensityMatrix.unchecked`` for intermediate operators that are already
    known to be valid.
    """

    matrix: np.ndarray
    dim_x: int
    dim_y: int

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        n = self.dim_x * self.dim_y
        if self.dim_x < 1 or self.dim_y < 1:
            raise InvalidStateError("factor dimensions must be positive")
        if n > MAX_DIM:
            raise InvalidStateError(
                f"total dimension {n} exceeds supported maximum {MAX_DIM}"
            )
        if m.shape != (n, n):
            raise InvalidStateError(
                f"matrix shape {m.shape} does not match dims {self.dim_x}x{self.dim_y}"
            )
        validate_density(m)

    @classmethod
    def unchecked(cls, matrix: np.ndarray, dim_x: int, dim_y: int) -> "DensityMatrix":
        obj = object.__new__(cls)
        m = np.array(matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(obj, "matrix", m)
        object.__setattr__(obj, "dim_x", dim_x)
        object.__setattr__(obj, "dim_y", dim_y)
        return obj

    @classmethod
    def from_pure(cls, psi: np.ndarray, dim_x: int, dim_y: int) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        return cls(np.outer(psi, psi.conj()), dim_x, dim_y)

    @property
    def dim(self) -> int:
        return self.dim_x * self.dim_y

    def reduced(self, keep: str) -> "DensityMatrix":
        """Marginal state on ``keep`` ('X' or 'Y') as a single-factor state."""
        r = partial_trace(self, "Y" if keep == "X" else "X")
        d = r.shape[0]
        return DensityMatrix.unchecked(r, d, 1)

    def swapped(self) -> "DensityMatrix":
        """Same state with the roles of X and Y exchanged."""
        return DensityMatrix.unchecked(
            swap_subsystems(self.matrix, self.dim_x, self.dim_y), self.dim_y, self.dim_x
        )

    def eigenvalues(self) -> np.ndarray:
        return clip_spectrum(np.linalg.eigvalsh(self.matrix))


def validate_density(m: np.ndarray) -> None:
    herm = hermiticity_violation(m)
    if herm > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian: max |M - M^dag| = {herm:.3e}")
    tr = np.trace(m)
    if abs(tr - 1) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr.real:.15g}, expected 1")
    lmin = float(np.linalg.eigvalsh(m)[0])
    if lmin < -PSD_TOL:
        raise InvalidStateError(f"matrix is not positive semidefinite: min eigenvalue {lmin:.3e}")


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def partial_trace(rho: DensityMatrix | np.ndarray, side: str, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Trace out subsystem ``side`` ('X' or 'Y') and return the other marginal."""
    if isinstance(rho, DensityMatrix):
        m, (dx, dy) = rho.matrix, (rho.dim_x, rho.dim_y)
    else:
        if dims is None:
            raise ValueError("dims are required for a raw matrix")
        m, (dx, dy) = np.asarray(rho), dims
    r = m.reshape(dx, dy, dx, dy)
    if side == "Y":
        return np.einsum("ayby->ab", r)
    if side == "X":
        return np.einsum("xaxb->ab", r)
    raise ValueError(f"side must be 'X' or 'Y', got {side!r}")


def swap_subsystems(m: np.ndarray, dim_x: int, dim_y: int) -> np.ndarray:
    n = dim_x * dim_y
    return m.reshape(dim_x, dim_y, dim_x, dim_y).transpose(1, 0, 3, 2).reshape(n, n)


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def spectral_decompose(m: np.ndarray) -> Spectrum:
    m = np.asarray(m, dtype=complex)
    herm = hermiticity_violation(m)
    if herm > HERMITIAN_TOL:
        raise NotHermitianError(f"cannot decompose non-Hermitian matrix: max |M - M^dag| = {herm:.3e}")
    # eigh returns ascending eigenvalues, the ordering used by the Bell-diagonal forms
    w, v = np.linalg.eigh(m)
    return Spectrum(w, v)


def clip_spectrum(w: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Clip round-off negatives in [-tol, 0) to zero; reject anything below."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise InvalidStateError(f"eigenvalue {w.min():.3e} below PSD tolerance")
    return np.where(w < 0, 0.0, w)


def matrix_function(m: np.ndarray, f: Callable[[np.ndarray], np.ndarray], clip: bool = False) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    With ``clip`` the eigenvalues first go through :func:`clip_spectrum`,
    as required for fractional powers of density matrices.
    """
    spec = spectral_decompose(m)
    w = clip_spectrum(spec.eigenvalues) if clip else spec.eigenvalues
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = w[~np.isfinite(fw)]
        raise DomainError(f"function undefined at eigenvalue(s) {bad}")
    v = spec.eigenvectors
    return (v * fw) @ v.conj().T


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
