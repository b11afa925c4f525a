"""Local projective measurements on subsystem Y and their unread channels."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .linalg import DensityMatrix

UNITARITY_TOL = 1e-12
# outcomes at or below this probability get a placeholder conditional state
ZERO_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Rank-1 von Neumann measurement given by the columns of a unitary."""

    vectors: np.ndarray
    parameters: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        v = np.array(self.vectors, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        d = v.shape[0]
        if v.shape != (d, d):
            raise ValueError(f"basis vectors must form a square matrix, got {v.shape}")
        err = np.max(np.abs(v.conj().T @ v - np.eye(d)))
        if err > UNITARITY_TOL:
            raise ValueError(f"basis vectors are not orthonormal (error {err:.3e})")
        object.__setattr__(self, "parameters", tuple(float(p) for p in self.parameters))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def projectors(self) -> np.ndarray:
        """Array of shape (d, d, d); ``projectors[y]`` is |y><y|."""
        v = self.vectors
        return np.einsum("iy,jy->yij", v, v.conj())

    def permuted(self, order) -> "MeasurementBasis":
        return MeasurementBasis(self.vectors[:, list(order)], self.parameters)


def qubit_vectors(theta, phi) -> np.ndarray:
    """Batched qubit bases; columns are |y0> and its orthogonal complement."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s, e = np.cos(theta / 2), np.sin(theta / 2), np.exp(1j * phi)
    u = np.empty(np.broadcast(theta, phi).shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 0] = e * s
    u[..., 0, 1] = -np.conj(e) * s
    u[..., 1, 1] = c
    return u


def qubit_basis(theta: float, phi: float) -> MeasurementBasis:
    return MeasurementBasis(qubit_vectors(theta, phi), (theta, phi))


def n_basis_params(dim: int) -> int:
    """Angle count of the Givens parameterisation: one (theta, phi) pair per level pair."""
    return dim * (dim - 1)


def givens_vectors(params: np.ndarray, dim: int) -> np.ndarray:
    """Batched unitaries built as a product of two-level rotations.

    ``params[..., 2k]`` and ``params[..., 2k+1]`` are (theta, phi) for the
    k-th level pair in lexicographic order. For dim = 2 this coincides with
    :func:`qubit_vectors`.
    """
    params = np.asarray(params, dtype=float)
    k = n_basis_params(dim)
    if params.shape[-1] != k:
        raise ValueError(f"dimension {dim} needs {k} basis parameters, got {params.shape[-1]}")
    batch = params.shape[:-1]
    u = np.broadcast_to(np.eye(dim, dtype=complex), batch + (dim, dim)).copy()
    for n, (i, j) in enumerate(combinations(range(dim), 2)):
        g = qubit_vectors(params[..., 2 * n], params[..., 2 * n + 1])
        # right-multiply by the rotation embedded on levels (i, j)
        ci, cj = u[..., :, i].copy(), u[..., :, j].copy()
        u[..., :, i] = ci * g[..., None, 0, 0] + cj * g[..., None, 1, 0]
        u[..., :, j] = ci * g[..., None, 0, 1] + cj * g[..., None, 1, 1]
    return u


def general_basis(params, dim_y: int) -> MeasurementBasis:
    params = np.asarray(params, dtype=float).ravel()
    if params.size == 0:
        params = np.zeros(n_basis_params(dim_y))
    return MeasurementBasis(givens_vectors(params, dim_y), tuple(params))


def computational_basis(dim: int) -> MeasurementBasis:
    return MeasurementBasis(np.eye(dim), tuple(np.zeros(n_basis_params(dim))))


def eigenbasis(m: np.ndarray) -> MeasurementBasis:
    _, v = np.linalg.eigh(m)
    return MeasurementBasis(v)


def _check_dims(rho: DensityMatrix, basis: MeasurementBasis) -> None:
    if basis.dim != rho.dim_y:
        raise ValueError(f"basis acts on dimension {basis.dim} but subsystem Y has dimension {rho.dim_y}")


def _oriented(rho: DensityMatrix, side: str) -> DensityMatrix:
    if side == "Y":
        return rho
    if side == "X":
        return rho.swapped()
    raise ValueError(f"side must be 'X' or 'Y', got {side!r}")


def measure_channel(rho: DensityMatrix, basis: MeasurementBasis, side: str = "Y") -> DensityMatrix:
    """Unread local measurement sum_y (1 (x) P_y) rho (1 (x) P_y)."""
    r = _oriented(rho, side)
    _check_dims(r, basis)
    eye_x = np.eye(r.dim_x)
    out = np.zeros_like(r.matrix)
    for p in basis.projectors:
        big = np.kron(eye_x, p)
        out += big @ r.matrix @ big
    res = DensityMatrix.unchecked(out, r.dim_x, r.dim_y)
    return res if side == "Y" else res.swapped()


def measured_blocks(m: np.ndarray, dim_x: int, dim_y: int, vectors: np.ndarray) -> np.ndarray:
    """Blocks <y|rho|y> (operators on X) for batches of bases.

    ``vectors`` has shape (..., dim_y, dim_y); the result has shape
    (..., dim_y, dim_x, dim_x) and the blocks equal p_y rho_{X|y}.
    """
    r = np.asarray(m).reshape(dim_x, dim_y, dim_x, dim_y)
    v = np.asarray(vectors)
    half = np.einsum("aybz,...zk->...aybk", r, v)
    return np.einsum("...yk,...aybk->...kab", v.conj(), half)


@dataclass(frozen=True)
class ConditionalEnsemble:
    probabilities: np.ndarray
    conditionals: list[DensityMatrix]
    placeholder: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def average(self) -> np.ndarray:
        return sum(p * c.matrix for p, c in zip(self.probabilities, self.conditionals))


def conditional_ensemble(rho: DensityMatrix, basis: MeasurementBasis, side: str = "Y") -> ConditionalEnsemble:
    """Outcome probabilities p_y and conditional states rho_{X|y}."""
    r = _oriented(rho, side)
    _check_dims(r, basis)
    blocks = measured_blocks(r.matrix, r.dim_x, r.dim_y, basis.vectors)
    probs = np.real(np.einsum("kaa->k", blocks))
    conds, flags = [], []
    for p, b in zip(probs, blocks):
        if p > ZERO_PROB:
            conds.append(DensityMatrix.unchecked(b / p, r.dim_x, 1))
            flags.append(False)
        else:
            conds.append(DensityMatrix.unchecked(np.eye(r.dim_x) / r.dim_x, r.dim_x, 1))
            flags.append(True)
    return ConditionalEnsemble(probs, conds, np.array(flags))


def joint_channel(rho: DensityMatrix, basis_x: MeasurementBasis, basis_y: MeasurementBasis) -> DensityMatrix:
    """Unread product measurement sum_{x,y} P_xy rho P_xy with P_xy = P_x (x) P_y."""
    if basis_x.dim != rho.dim_x or basis_y.dim != rho.dim_y:
        raise ValueError("basis dimensions do not match the bipartition")
    out = np.zeros_like(rho.matrix)
    for px in basis_x.projectors:
        for py in basis_y.projectors:
            p = np.kron(px, py)
            out += p @ rho.matrix @ p
    return DensityMatrix.unchecked(out, rho.dim_x, rho.dim_y)


def joint_vectors(vx: np.ndarray, vy: np.ndarray) -> np.ndarray:
    """Batched Kronecker product of basis unitaries, shape (..., dx*dy, dx*dy)."""
    dx, dy = vx.shape[-1], vy.shape[-1]
    u = np.einsum("...ab,...cd->...acbd", vx, vy)
    return u.reshape(u.shape[:-4] + (dx * dy, dx * dy))
