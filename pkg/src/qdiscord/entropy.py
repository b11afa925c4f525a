"""Tsallis q-entropy and the information functional built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, clip_spectrum

# |q - 1| below this routes to the von Neumann formula
Q_ONE_BAND = 1e-6
# eigenvalues at or below this are round-off zeros; they would otherwise
# contribute eps**q, which is large for small q
ZERO_EIGENVALUE = 1e-14


@dataclass(frozen=True)
class EntropicIndex:
    q: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.q) or self.q <= 0:
            raise ValueError(f"entropic index must satisfy q > 0, got {self.q}")

    @property
    def is_von_neumann(self) -> bool:
        return abs(self.q - 1.0) < Q_ONE_BAND

    def __float__(self) -> float:
        return float(self.q)


def as_index(q: float | EntropicIndex) -> EntropicIndex:
    return q if isinstance(q, EntropicIndex) else EntropicIndex(float(q))


def _spectrum_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.eigenvalues()
    return clip_spectrum(np.linalg.eigvalsh(np.asarray(rho)))


def power_trace(w: np.ndarray, q: float) -> np.ndarray:
    """Sum of lambda**q over the last axis with 0**q = 0 for q > 0."""
    w = np.asarray(w, dtype=float)
    pos = w > ZERO_EIGENVALUE
    return np.sum(np.where(pos, np.power(np.where(pos, w, 1.0), q), 0.0), axis=-1)


def shannon_sum(w: np.ndarray) -> np.ndarray:
    """-sum lambda ln lambda over the last axis, with 0 ln 0 = 0."""
    w = np.asarray(w, dtype=float)
    pos = w > ZERO_EIGENVALUE
    safe = np.where(pos, w, 1.0)
    return -np.sum(np.where(pos, safe * np.log(safe), 0.0), axis=-1)


def tsallis_from_eigenvalues(w: np.ndarray, q: float | EntropicIndex) -> np.ndarray:
    """Tsallis entropy of (batches of) spectra along the last axis."""
    idx = as_index(q)
    if idx.is_von_neumann:
        return shannon_sum(w)
    return (1.0 - power_trace(w, idx.q)) / (idx.q - 1.0)


def tsallis_entropy(rho, q: float | EntropicIndex) -> float:
    """S_q(rho) = (1 - Tr rho^q)/(q - 1); von Neumann entropy near q = 1."""
    return float(tsallis_from_eigenvalues(_spectrum_of(rho), q))


def von_neumann_entropy(rho) -> float:
    return float(shannon_sum(_spectrum_of(rho)))


def linear_entropy(rho) -> float:
    w = _spectrum_of(rho)
    return float(1.0 - np.sum(w * w))


def max_entropy(dim: int, q: float | EntropicIndex) -> float:
    """Entropy of the maximally mixed state I_d/d."""
    idx = as_index(q)
    if idx.is_von_neumann:
        return float(np.log(dim))
    return (1.0 - dim ** (1.0 - idx.q)) / (idx.q - 1.0)


@dataclass(frozen=True)
class InformationFunctional:
    """I(rho) = S_max - S_q(rho) for states of a fixed dimension.

    The dimension is explicit: joint states use dim_x * dim_y, marginals
    use their own factor dimension.
    """

    index: EntropicIndex
    dim: int

    @property
    def s_max(self) -> float:
        return max_entropy(self.dim, self.index)

    def __call__(self, rho) -> float:
        return self.s_max - tsallis_entropy(rho, self.index)


def information(rho, q: float | EntropicIndex, dim: int | None = None) -> float:
    if dim is None:
        if isinstance(rho, DensityMatrix):
            dim = rho.dim
        else:
            dim = np.asarray(rho).shape[0]
    return InformationFunctional(as_index(q), dim)(rho)
