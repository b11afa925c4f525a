"""Bayesian correlation measures and their q-entropy specialisations.

For a convex f the deviation from Bayes' rule at a measurement basis is
Tr f(rho) - Tr f(Pi_Y[rho]); minimised over bases it gives Delta B. With
f_q(x) = (x^q - x)/(q - 1) one has Tr f_q(rho) = -S_q(rho), so the same
code computes the q-discord D_q, whose q = 1 and q = 2 members are the
entropic and geometric discords.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .entropy import ZERO_EIGENVALUE, EntropicIndex, as_index, power_trace, shannon_sum, tsallis_entropy, tsallis_from_eigenvalues
from .linalg import DensityMatrix, DomainError, clip_spectrum, matrix_function, partial_trace
from .measurement import (
    MeasurementBasis,
    joint_channel,
    joint_vectors,
    measure_channel,
    conditional_ensemble,
    measured_blocks,
)
from .optimizer import OptimizationResult, ProductBasisSpace, SearchConfig, SingleBasisSpace, minimize
from .states import BlochCorrelation, bell_diagonal, bell_diagonal_eigenvalues

# zero eigenvalues are floored here before evaluating a divergent derivative
EIGEN_FLOOR = 1e-300


@dataclass(frozen=True)
class ConvexFunction:
    """Scalar convex function with its derivative, applied elementwise to spectra."""

    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    strict: bool = True
    name: str = "f"

    def __post_init__(self) -> None:
        a, b = np.meshgrid(np.linspace(0, 1, 21), np.linspace(0, 1, 21))
        with np.errstate(all="ignore"):
            lhs = self.value((a + b) / 2)
            rhs = (self.value(a) + self.value(b)) / 2
        if np.any(lhs > rhs + 1e-12):
            raise ValueError(f"{self.name} is not convex on [0, 1]")

    def trace(self, w: np.ndarray) -> np.ndarray:
        """Tr f over spectra stored along the last axis."""
        with np.errstate(all="ignore"):
            out = np.sum(self.value(np.asarray(w, dtype=float)), axis=-1)
        if not np.all(np.isfinite(out)):
            raise DomainError(f"{self.name} is undefined on the spectrum")
        return out


def q_convex_function(q: float | EntropicIndex) -> ConvexFunction:
    """f_q(x) = (x^q - x)/(q - 1), or x ln x at q = 1, so that Tr f_q = -S_q."""
    idx = as_index(q)
    qv = idx.q
    if idx.is_von_neumann:
        def value(x):
            x = np.asarray(x, dtype=float)
            pos = x > ZERO_EIGENVALUE
            safe = np.where(pos, x, 1.0)
            return np.where(pos, safe * np.log(safe), 0.0)

        def derivative(x):
            return np.log(np.maximum(x, EIGEN_FLOOR)) + 1.0

        return ConvexFunction(value, derivative, True, "x ln x")

    def value(x):
        x = np.asarray(x, dtype=float)
        pos = x > ZERO_EIGENVALUE
        xq = np.where(pos, np.power(np.where(pos, x, 1.0), qv), 0.0)
        return (xq - np.where(pos, x, 0.0)) / (qv - 1.0)

    def derivative(x):
        x = np.asarray(x, dtype=float)
        if qv < 1:
            x = np.maximum(x, EIGEN_FLOOR)
        return (qv * np.power(x, qv - 1.0) - 1.0) / (qv - 1.0)

    return ConvexFunction(value, derivative, True, f"(x^{qv:g} - x)/({qv:g} - 1)")


def square() -> ConvexFunction:
    return ConvexFunction(lambda x: np.asarray(x, dtype=float) ** 2, lambda x: 2 * np.asarray(x, dtype=float), True, "x^2")


@dataclass
class DiscordResult:
    value: float
    upper_bound: float
    optimal_basis: object
    evaluations: int
    converged: bool
    upper_bound_basis: object = None
    grid_value: float = math.nan

    @property
    def angles(self) -> tuple[float, ...]:
        b = self.optimal_basis
        if isinstance(b, tuple):
            return b[0].parameters + b[1].parameters
        return b.parameters


def _oriented(rho: DensityMatrix, side: str) -> DensityMatrix:
    if side == "Y":
        return rho
    if side == "X":
        return rho.swapped()
    raise ValueError(f"side must be 'X' or 'Y', got {side!r}")


def _clip(w: np.ndarray) -> np.ndarray:
    return np.maximum(w, 0.0)


# ---------------------------------------------------------------------------
# single-basis evaluations

def delta_B_at_basis(rho: DensityMatrix, basis: MeasurementBasis, f: ConvexFunction) -> float:
    """Tr f(rho) - Tr f(Pi_Y[rho]) at one basis, through the full channel."""
    post = measure_channel(rho, basis)
    return float(f.trace(rho.eigenvalues()) - f.trace(clip_spectrum(np.linalg.eigvalsh(post.matrix))))


def upper_bound_at_basis(rho: DensityMatrix, basis: MeasurementBasis, f: ConvexFunction) -> float:
    """Tr[(rho - Pi_Y[rho]) f'(rho)] at one basis."""
    fp = matrix_function(rho.matrix, f.derivative, clip=True)
    post = measure_channel(rho, basis)
    return float(np.real(np.trace((rho.matrix - post.matrix) @ fp)))


def q_conditional_form(rho: DensityMatrix, q: float | EntropicIndex, basis: MeasurementBasis) -> float:
    """S_q(Pi_Y[rho_Y]) + sum_y p_y^q S_q(rho_{X|y}) - S_q(rho)."""
    idx = as_index(q)
    ens = conditional_ensemble(rho, basis)
    p = _clip(ens.probabilities)
    marginal_term = float(tsallis_from_eigenvalues(p, idx))
    cond = 0.0
    for py, c, flagged in zip(p, ens.conditionals, ens.placeholder):
        if flagged:
            continue
        # the von Neumann branch pairs with weight p_y
        weight = py if idx.is_von_neumann else py ** idx.q
        cond += weight * tsallis_entropy(c, idx)
    return marginal_term + cond - tsallis_entropy(rho, idx)


def hilbert_schmidt_disturbance(rho: DensityMatrix, basis: MeasurementBasis) -> float:
    """||rho - Pi_Y[rho]||^2 in the Hilbert-Schmidt norm."""
    diff = rho.matrix - measure_channel(rho, basis).matrix
    return float(np.real(np.vdot(diff, diff)))


# ---------------------------------------------------------------------------
# batched objectives for the optimizer

class ChannelObjective:
    """Tr f(rho) - Tr f(Pi_Y[rho]) for batches of Y bases.

    Pi_Y[rho] is block diagonal with blocks <y|rho|y> = p_y rho_{X|y}, so its
    spectrum is the union of the block spectra.
    """

    def __init__(self, rho: DensityMatrix, f: ConvexFunction):
        self.rho = rho
        self.f = f
        self.base = float(f.trace(rho.eigenvalues()))

    def batch(self, vectors: np.ndarray) -> np.ndarray:
        r = self.rho
        blocks = measured_blocks(r.matrix, r.dim_x, r.dim_y, vectors)
        w = np.linalg.eigvalsh(blocks).reshape(blocks.shape[:-3] + (-1,))
        return self.base - self.f.trace(_clip(w))


class BoundObjective:
    """Tr[(rho - Pi_Y[rho]) F] with F = f'(rho) fixed."""

    def __init__(self, rho: DensityMatrix, f: ConvexFunction):
        self.rho = rho
        self.fp = matrix_function(rho.matrix, f.derivative, clip=True)
        self.base = float(np.real(np.trace(rho.matrix @ self.fp)))

    def batch(self, vectors: np.ndarray) -> np.ndarray:
        r = self.rho
        br = measured_blocks(r.matrix, r.dim_x, r.dim_y, vectors)
        bf = measured_blocks(self.fp, r.dim_x, r.dim_y, vectors)
        return self.base - np.real(np.einsum("...kab,...kba->...", br, bf))


class GeometricObjective:
    """||rho - Pi_Y[rho]||^2 with the channel applied explicitly."""

    def __init__(self, rho: DensityMatrix):
        self.rho = rho

    def batch(self, vectors: np.ndarray) -> np.ndarray:
        r = self.rho
        dx, dy = r.dim_x, r.dim_y
        proj = np.einsum("...iy,...jy->...yij", vectors, vectors.conj())
        t = r.matrix.reshape(dx, dy, dx, dy)
        post = np.einsum("...kim,ambn,...knl->...aibl", proj, t, proj)
        diff = t - post
        return np.real(np.einsum("...aibj,...aibj->...", diff, diff.conj()))


class JointObjective:
    """Tr f(rho) - Tr f(Pi[rho]) over product bases; Pi[rho] is diagonal."""

    def __init__(self, rho: DensityMatrix, f: ConvexFunction):
        self.rho = rho
        self.f = f
        self.base = float(f.trace(rho.eigenvalues()))

    def diagonal(self, vectors) -> np.ndarray:
        w = joint_vectors(*vectors)
        return np.real(np.einsum("...ia,ij,...ja->...a", w.conj(), self.rho.matrix, w))

    def batch(self, vectors) -> np.ndarray:
        return self.base - self.f.trace(_clip(self.diagonal(vectors)))


class JointBoundObjective:
    def __init__(self, rho: DensityMatrix, f: ConvexFunction):
        self.rho = rho
        self.fp = matrix_function(rho.matrix, f.derivative, clip=True)
        self.base = float(np.real(np.trace(rho.matrix @ self.fp)))

    def batch(self, vectors) -> np.ndarray:
        w = joint_vectors(*vectors)
        d_rho = np.einsum("...ia,ij,...ja->...a", w.conj(), self.rho.matrix, w)
        d_fp = np.einsum("...ia,ij,...ja->...a", w.conj(), self.fp, w)
        return self.base - np.real(np.sum(d_rho * d_fp, axis=-1))


def _search(cfg: SearchConfig | None) -> SearchConfig:
    return cfg if cfg is not None else SearchConfig()


def _result(value: OptimizationResult, bound: OptimizationResult | None) -> DiscordResult:
    return DiscordResult(
        value=value.value,
        upper_bound=bound.value if bound else math.nan,
        optimal_basis=value.basis,
        evaluations=value.evaluations + (bound.evaluations if bound else 0),
        converged=value.converged,
        upper_bound_basis=bound.basis if bound else None,
        grid_value=value.grid_value,
    )


# ---------------------------------------------------------------------------
# minimised measures

def delta_B(rho: DensityMatrix, f: ConvexFunction, search: SearchConfig | None = None,
            side: str = "Y", with_bound: bool = True) -> DiscordResult:
    """Least deviation from Bayes' rule under local measurements on ``side``.

    With ``with_bound=False`` the upper bound is skipped and reported as nan.
    """
    r = _oriented(rho, side)
    cfg = _search(search)
    space = SingleBasisSpace(r.dim_y)
    value = minimize(ChannelObjective(r, f), space, cfg)
    bound = minimize(BoundObjective(r, f), space, cfg) if with_bound else None
    return _result(value, bound)


def delta_B_upper_bound(rho: DensityMatrix, f: ConvexFunction, search: SearchConfig | None = None,
                        side: str = "Y") -> float:
    r = _oriented(rho, side)
    return minimize(BoundObjective(r, f), SingleBasisSpace(r.dim_y), _search(search)).value


def q_discord(rho: DensityMatrix, q: float | EntropicIndex, search: SearchConfig | None = None,
              side: str = "Y", with_bound: bool = True) -> DiscordResult:
    """D_q = min over bases of S_q(Pi_Y[rho]) - S_q(rho), with its upper bound.

    At q = 1 the bound is the limit Tr[(rho - Pi_Y[rho])(ln rho + 1)] with
    zero eigenvalues floored at 1e-300; for rank-deficient states it is
    large and only informational. The same floor applies for q < 1.
    """
    return delta_B(rho, q_convex_function(q), search, side, with_bound)


def entropic_discord(rho: DensityMatrix, search: SearchConfig | None = None, side: str = "Y") -> DiscordResult:
    return q_discord(rho, 1.0, search, side)


def geometric_discord(rho: DensityMatrix, search: SearchConfig | None = None, side: str = "Y") -> DiscordResult:
    """min ||rho - Pi_Y[rho]||^2, minimised directly in the Hilbert-Schmidt norm.

    The reported upper bound is the q = 2 bound.
    """
    r = _oriented(rho, side)
    cfg = _search(search)
    space = SingleBasisSpace(r.dim_y)
    value = minimize(GeometricObjective(r), space, cfg)
    bound = minimize(BoundObjective(r, q_convex_function(2.0)), space, cfg)
    return _result(value, bound)


def joint_disturbance(rho: DensityMatrix, f: ConvexFunction, search: SearchConfig | None = None) -> DiscordResult:
    """delta B: deviation under unread product measurements on X and Y."""
    cfg = _search(search)
    space = ProductBasisSpace(rho.dim_x, rho.dim_y)
    value = minimize(JointObjective(rho, f), space, cfg)
    bound = minimize(JointBoundObjective(rho, f), space, cfg)
    return _result(value, bound)


def joint_disturbance_at_bases(rho: DensityMatrix, basis_x: MeasurementBasis, basis_y: MeasurementBasis,
                               f: ConvexFunction) -> float:
    post = joint_channel(rho, basis_x, basis_y)
    return float(f.trace(rho.eigenvalues()) - f.trace(clip_spectrum(np.linalg.eigvalsh(post.matrix))))


# ---------------------------------------------------------------------------
# closed forms

def bell_diagonal_q_discord(c: BlochCorrelation, q: float | EntropicIndex) -> tuple[float, float]:
    """Closed-form (D_q, D_q upper bound) for a Bell-diagonal two-qubit state.

    Eigenvalues come from a numerical decomposition, ascending. The bound is
    the published expression with the c_3 / Lambda term taken as printed;
    see :func:`bell_diagonal_upper_bound_axes` for the minimum over the
    three measurement axes.
    """
    if not isinstance(c, BlochCorrelation):
        c = BlochCorrelation(*map(float, c))
    idx = as_index(q)
    qv = idx.q
    lam = np.sort(clip_spectrum(np.linalg.eigvalsh(bell_diagonal(c).matrix)))
    cm = c.c_max
    if idx.is_von_neumann:
        post = np.array([1 + cm, 1 + cm, 1 - cm, 1 - cm]) / 4
        value = float(shannon_sum(post) - shannon_sum(lam))
        ln = np.log(np.maximum(lam, EIGEN_FLOOR))
        lam_term = ln[3] + ln[2] - ln[1] - ln[0]
        bound = float(np.sum((lam - 0.25) * ln) - c.c3 / 4 * lam_term)
        return value, bound
    value = (power_trace(lam, qv) - ((1 + cm) ** qv + (1 - cm) ** qv) / 2 ** (2 * qv - 1)) / (qv - 1)
    pw = _pow_floor(lam, qv - 1)
    lam_term = pw[3] + pw[2] - (pw[1] + pw[0])
    bound = qv / (qv - 1) * (np.sum((lam - 0.25) * pw) - c.c3 / 4 * lam_term)
    return float(value), float(bound)


def _pow_floor(lam: np.ndarray, e: float) -> np.ndarray:
    if e >= 0:
        return np.where(lam > 0, np.power(np.where(lam > 0, lam, 1.0), e), 0.0 if e > 0 else 1.0)
    return np.power(np.maximum(lam, EIGEN_FLOOR), e)


# Pauli correlation signs t_k(B) for the Bell states Phi+, Phi-, Psi+, Psi-
_BELL_SIGNS = np.array([[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]], dtype=float)


def bell_diagonal_upper_bound_axes(c: BlochCorrelation, q: float | EntropicIndex) -> float:
    """Minimum of the q bound over the three Pauli measurement axes.

    Measuring Y along unit vector n gives a bound linear in (n_1^2, n_2^2,
    n_3^2), so its minimum over the sphere sits on a coordinate axis.
    """
    if not isinstance(c, BlochCorrelation):
        c = BlochCorrelation(*map(float, c))
    idx = as_index(q)
    cv = c.as_array()
    lam = (1 + _BELL_SIGNS @ cv) / 4
    lam = np.maximum(lam, 0.0)
    if idx.is_von_neumann:
        g = np.log(np.maximum(lam, EIGEN_FLOOR))
        pref = 1.0
    else:
        g = _pow_floor(lam, idx.q - 1)
        pref = idx.q / (idx.q - 1)
    base = np.sum((lam - 0.25) * g)
    per_axis = [pref * (base - cv[k] / 4 * np.sum(_BELL_SIGNS[:, k] * g)) for k in range(3)]
    return float(min(per_axis))


def max_entangled_q_discord(d: int, q: float | EntropicIndex) -> tuple[float, float]:
    """(D_q, bound) for the maximally entangled state of two qudits."""
    idx = as_index(q)
    if idx.is_von_neumann:
        return math.log(d), math.inf
    return (1 - d ** (1 - idx.q)) / (idx.q - 1), idx.q * (d - 1) / (d * (idx.q - 1))


def pure_state_q_discord(psi: np.ndarray, q: float | EntropicIndex, dim_x: int, dim_y: int) -> float:
    """D_q of a pure state, equal to S_q of its Y marginal."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise ValueError(f"state vector is not normalised (norm {norm:.12g})")
    if psi.size != dim_x * dim_y:
        raise ValueError(f"vector length {psi.size} does not match {dim_x}x{dim_y}")
    rho_y = partial_trace(np.outer(psi, psi.conj()), "X", (dim_x, dim_y))
    return tsallis_entropy(rho_y, q)


def pure_state_upper_bound(psi: np.ndarray, q: float | EntropicIndex, dim_x: int, dim_y: int) -> float:
    """q/(q-1) S_2(rho_Y); only meaningful for q > 1."""
    qv = as_index(q).q
    return qv / (qv - 1) * pure_state_q_discord(psi, 2.0, dim_x, dim_y)
