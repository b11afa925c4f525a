"""Minimisation over local measurement bases.

A coarse exhaustive grid over the basis angles seeds a Nelder-Mead
refinement, and a fixed number of reproducible random restarts guards
against local minima. Objectives are evaluated on batches of basis
unitaries so the grid stage is a handful of vectorised numpy calls.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Protocol, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .measurement import MeasurementBasis, givens_vectors, n_basis_params, qubit_vectors


class GridTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    grid_resolution: int = 64
    refine_iterations: int = 500
    tolerance: float = 1e-9
    seed_count: int = 8
    deterministic_seed: int = 0
    # exhaustive grid is refused above this many points
    max_grid_points: int = 65536

    def __post_init__(self) -> None:
        if self.grid_resolution < 8:
            raise ValueError("grid_resolution must be at least 8")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.refine_iterations < 1 or self.seed_count < 0:
            raise ValueError("refine_iterations must be >= 1 and seed_count >= 0")

    def with_overrides(self, **kw) -> "SearchConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


class BasisSpace(Protocol):
    n_params: int

    def grid_axes(self, resolution: int) -> list[np.ndarray]: ...
    def sample(self, rng: np.random.Generator) -> np.ndarray: ...
    def vectors(self, params: np.ndarray): ...
    def basis(self, params: np.ndarray): ...


@dataclass(frozen=True)
class SingleBasisSpace:
    """Bases of one subsystem of dimension ``dim``.

    For qubits theta in [0, pi] and phi in [0, pi) already cover every
    basis set, since (theta, phi + pi) is the antipode of (pi - theta, phi).
    """

    dim: int

    @property
    def n_params(self) -> int:
        return n_basis_params(self.dim)

    def _ranges(self) -> list[tuple[float, float, bool]]:
        phi_hi = math.pi if self.dim == 2 else 2 * math.pi
        # (lo, hi, closed) per angle
        return [(0.0, math.pi, True), (0.0, phi_hi, False)] * (self.n_params // 2)

    def grid_axes(self, resolution: int) -> list[np.ndarray]:
        axes = []
        for lo, hi, closed in self._ranges():
            if closed:
                axes.append(np.linspace(lo, hi, resolution))
            else:
                axes.append(lo + (hi - lo) * np.arange(resolution) / resolution)
        return axes

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return np.array([rng.uniform(lo, hi) for lo, hi, _ in self._ranges()])

    def vectors(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if self.dim == 2:
            return qubit_vectors(params[..., 0], params[..., 1])
        return givens_vectors(params, self.dim)

    def basis(self, params: np.ndarray) -> MeasurementBasis:
        return MeasurementBasis(self.vectors(params), tuple(np.asarray(params, dtype=float)))


@dataclass(frozen=True)
class ProductBasisSpace:
    """Independent bases on X and Y; parameters are X angles then Y angles."""

    dim_x: int
    dim_y: int

    @property
    def parts(self) -> tuple[SingleBasisSpace, SingleBasisSpace]:
        return SingleBasisSpace(self.dim_x), SingleBasisSpace(self.dim_y)

    @property
    def n_params(self) -> int:
        return sum(p.n_params for p in self.parts)

    def _split(self, params):
        params = np.asarray(params, dtype=float)
        k = self.parts[0].n_params
        return params[..., :k], params[..., k:]

    def grid_axes(self, resolution: int) -> list[np.ndarray]:
        return [a for p in self.parts for a in p.grid_axes(resolution)]

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return np.concatenate([p.sample(rng) for p in self.parts])

    def vectors(self, params):
        px, py = self._split(params)
        sx, sy = self.parts
        return sx.vectors(px), sy.vectors(py)

    def basis(self, params):
        px, py = self._split(params)
        sx, sy = self.parts
        return sx.basis(px), sy.basis(py)


class BatchObjective(Protocol):
    def batch(self, vectors) -> np.ndarray: ...


class CallableObjective:
    """Adapter for a plain ``basis -> float`` callable."""

    def __init__(self, fn: Callable, space: BasisSpace):
        self.fn = fn
        self.space = space

    def batch(self, vectors) -> np.ndarray:
        if isinstance(vectors, tuple):
            vx, vy = vectors
            flat = zip(vx.reshape(-1, *vx.shape[-2:]), vy.reshape(-1, *vy.shape[-2:]))
            out = [self.fn((MeasurementBasis(a), MeasurementBasis(b))) for a, b in flat]
            return np.array(out).reshape(vx.shape[:-2])
        flat = vectors.reshape(-1, *vectors.shape[-2:])
        return np.array([self.fn(MeasurementBasis(v)) for v in flat]).reshape(vectors.shape[:-2])


def _as_space(space) -> BasisSpace:
    return SingleBasisSpace(space) if isinstance(space, (int, np.integer)) else space


def _as_objective(objective, space) -> BatchObjective:
    return objective if hasattr(objective, "batch") else CallableObjective(objective, space)


class _Counter:
    def __init__(self, objective: BatchObjective, space: BasisSpace):
        self.objective = objective
        self.space = space
        self.count = 0

    def many(self, params: np.ndarray) -> np.ndarray:
        self.count += params.shape[0]
        return np.asarray(self.objective.batch(self.space.vectors(params)), dtype=float)

    def one(self, params: np.ndarray) -> float:
        return float(self.many(np.asarray(params, dtype=float)[None, :])[0])


@dataclass
class GridResult:
    value: float
    params: np.ndarray
    basis: object
    evaluations: int


def grid_minimize(objective, space, cfg: SearchConfig = SearchConfig(),
                  resolution: int | None = None) -> GridResult:
    """Exhaustive minimum over the angle grid.

    Ties resolve to the lexicographically smallest angle tuple, which is the
    earliest point in the row-major grid enumeration.
    """
    space = _as_space(space)
    objective = _as_objective(objective, space)
    res = resolution or cfg.grid_resolution
    k = space.n_params
    if res ** k > cfg.max_grid_points:
        raise GridTooLargeError(
            f"grid of {res}^{k} points exceeds max_grid_points={cfg.max_grid_points}; "
            "lower grid_resolution or use refine_minimize from explicit starts"
        )
    counter = _Counter(objective, space)
    mesh = np.stack(np.meshgrid(*space.grid_axes(res), indexing="ij"), axis=-1).reshape(-1, k)
    values = np.concatenate([counter.many(chunk) for chunk in np.array_split(mesh, max(1, len(mesh) // 8192))])
    i = int(np.argmin(values))
    return GridResult(float(values[i]), mesh[i], space.basis(mesh[i]), counter.count)


@dataclass
class RefineResult:
    value: float
    params: np.ndarray
    basis: object
    converged: bool
    evaluations: int
    trace: list[float] = field(default_factory=list)


def _simplex_diameter(sim: np.ndarray) -> float:
    return max((float(np.linalg.norm(a - b)) for a, b in itertools.combinations(sim, 2)), default=0.0)


def refine_minimize(objective, start, cfg: SearchConfig = SearchConfig(), space=None,
                    step: float | None = None) -> RefineResult:
    """Nelder-Mead descent on the basis angles from ``start``.

    ``start`` is a parameter vector or a MeasurementBasis carrying its
    generating angles. Converged means the final simplex diameter dropped
    below ``cfg.tolerance`` within ``cfg.refine_iterations`` iterations.
    """
    if isinstance(start, MeasurementBasis):
        if space is None:
            space = SingleBasisSpace(start.dim)
        x0 = np.asarray(start.parameters, dtype=float)
    else:
        x0 = np.asarray(start, dtype=float)
    if space is None:
        raise ValueError("space is required when start is a parameter vector")
    space = _as_space(space)
    objective = _as_objective(objective, space)
    counter = _Counter(objective, space)
    k = space.n_params
    if x0.shape != (k,):
        raise ValueError(f"start has {x0.size} parameters, expected {k}")

    f0 = counter.one(x0)
    h = step if step is not None else math.pi / cfg.grid_resolution
    simplex = np.vstack([x0, x0 + h * np.eye(k)])
    trace = [f0]

    def record(intermediate_result):
        trace.append(float(intermediate_result.fun))

    out = _scipy_minimize(
        counter.one, x0, method="Nelder-Mead", callback=record,
        options={
            "initial_simplex": simplex,
            "maxiter": cfg.refine_iterations,
            "maxfev": 10 * cfg.refine_iterations * (k + 1),
            "xatol": cfg.tolerance / (2 * math.sqrt(k)),
            "fatol": 1e-15,
        },
    )
    converged = _simplex_diameter(out.final_simplex[0]) < cfg.tolerance
    x, f = np.asarray(out.x, dtype=float), float(out.fun)
    if not f <= f0 + 1e-12:
        x, f = x0, f0
    return RefineResult(f, x, space.basis(x), bool(converged), counter.count, trace)


@dataclass
class OptimizationResult:
    value: float
    params: np.ndarray
    basis: object
    converged: bool
    evaluations: int
    grid_value: float = math.nan


def feasible_resolution(cfg: SearchConfig, k: int) -> int:
    if cfg.grid_resolution ** k <= cfg.max_grid_points:
        return cfg.grid_resolution
    return max(2, int(math.floor(cfg.max_grid_points ** (1.0 / k) + 1e-9)))


def minimize(objective, space, cfg: SearchConfig = SearchConfig()) -> OptimizationResult:
    """Grid search, refinement of the best grid point, and random restarts.

    When the full grid is too large the grid stage runs at the coarsest
    resolution that fits ``max_grid_points``. Candidates are reduced by the
    total order on (value, angle tuple), so the result is deterministic.
    """
    space = _as_space(space)
    objective = _as_objective(objective, space)
    k = space.n_params
    res = feasible_resolution(cfg, k)
    grid = grid_minimize(objective, space, cfg, resolution=res)
    evaluations = grid.evaluations

    candidates = [(grid.value, tuple(grid.params), False, grid.params)]
    runs = [refine_minimize(objective, grid.params, cfg, space, step=math.pi / res)]
    rng = np.random.Generator(np.random.Philox(cfg.deterministic_seed))
    for _ in range(cfg.seed_count):
        runs.append(refine_minimize(objective, space.sample(rng), cfg, space, step=0.25))
    for r in runs:
        evaluations += r.evaluations
        candidates.append((r.value, tuple(r.params), r.converged, r.params))

    value, _, converged, params = min(candidates, key=lambda c: (c[0], c[1]))
    if not converged:
        # the grid point won (or tied); count it converged if a refinement
        # reached the same value to within the tolerance
        converged = any(r.converged and r.value <= value + cfg.tolerance for r in runs)
    return OptimizationResult(float(value), params, space.basis(params), bool(converged),
                              evaluations, grid.value)
