"""Seeded verification of the structural identities behind the measures.

Each check records the worst residual over a reproducible corpus, so two
runs with the same seed produce byte-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import states
from .discord import (
    ChannelObjective,
    delta_B_at_basis,
    hilbert_schmidt_disturbance,
    q_conditional_form,
    q_convex_function,
    upper_bound_at_basis,
)
from .entropy import ZERO_EIGENVALUE, power_trace, tsallis_entropy, tsallis_from_eigenvalues
from .linalg import DensityMatrix, matrix_function, partial_trace, random_unitary
from .measurement import MeasurementBasis, conditional_ensemble, measure_channel, measured_blocks
from .optimizer import SearchConfig, SingleBasisSpace, minimize

LEMMA_QS = (0.5, 1.5, 2.0, 3.0)
POSITIVITY_QS = (0.3, 0.7, 1.0, 1.5, 2.0, 3.0, 8.0)
IDENTITY_TOL = 1e-10

Channel = Callable[[DensityMatrix, MeasurementBasis], DensityMatrix]


@dataclass
class Check:
    name: str
    label: str
    tolerance: float
    # largest residual seen; one-sided checks record signed values
    worst: float = float("-inf")
    count: int = 0
    failures: int = 0

    def record(self, residual: float, ok: bool | None = None) -> None:
        self.count += 1
        self.worst = max(self.worst, float(residual))
        if ok is None:
            ok = residual <= self.tolerance
        if not ok:
            self.failures += 1

    @property
    def passed(self) -> bool:
        return self.count > 0 and self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<12} {self.label:<44} worst={self.worst:.3e}  "
                f"tol={self.tolerance:.0e}  n={self.count}  failed={self.failures}")


@dataclass
class Corpus:
    mixed: list[DensityMatrix] = field(default_factory=list)
    pure: list[DensityMatrix] = field(default_factory=list)
    product: list[DensityMatrix] = field(default_factory=list)

    @property
    def all(self) -> list[DensityMatrix]:
        return self.mixed + self.pure + self.product

    @property
    def two_qubit(self) -> list[DensityMatrix]:
        return [r for r in self.all if r.dim_x == 2 and r.dim_y == 2]


def build_corpus(seed: int, size: int = 200) -> Corpus:
    """Two-qubit, 2x3 and 3x3 states: random mixed of every rank, random pure,
    Bell-diagonal and product states, in a fixed seeded order."""
    rng = np.random.default_rng(seed)
    c = Corpus()
    dims = [(2, 2)] * 7 + [(2, 3), (3, 3)] + [(2, 2)]
    i = 0
    while len(c.all) < size:
        dx, dy = dims[i % len(dims)]
        kind = i % 5
        if kind == 0:
            c.pure.append(states.random_pure(dx, dy, rng))
        elif kind == 1 and (dx, dy) == (2, 2):
            c.mixed.append(states.bell_diagonal(states.random_bloch_correlation(rng)))
        elif kind == 2:
            c.product.append(states.random_product(dx, dy, rng))
        else:
            rank = int(rng.integers(1, dx * dy + 1))
            c.mixed.append(states.random_mixed(dx, dy, rank, rng))
        i += 1
    return c


def _random_basis(dim: int, rng: np.random.Generator) -> MeasurementBasis:
    return MeasurementBasis(random_unitary(dim, rng))


def faulty_channel(rho: DensityMatrix, basis: MeasurementBasis) -> DensityMatrix:
    """Dephasing channel with a deliberate coherent leak, for fault injection."""
    out = measure_channel(rho, basis)
    leak = 1e-3 * (rho.matrix - out.matrix)
    return DensityMatrix.unchecked(out.matrix + leak + 1e-3 * np.diag(np.arange(rho.dim) - (rho.dim - 1) / 2), rho.dim_x, rho.dim_y)


def _S(m: np.ndarray, q: float) -> float:
    return float(tsallis_from_eigenvalues(np.maximum(np.linalg.eigvalsh(m), 0.0), q))


def _trace_fn(m: np.ndarray, f) -> float:
    return float(np.sum(f(np.linalg.eigvalsh(m))))


def _mpow(m: np.ndarray, q: float) -> np.ndarray:
    return matrix_function(m, lambda w: np.where(w > ZERO_EIGENVALUE, np.abs(w) ** q, 0.0), clip=True)


def run_suite(seed: int = 42, size: int = 200, fault: bool = False,
              search: SearchConfig | None = None) -> list[Check]:
    channel: Channel = faulty_channel if fault else measure_channel
    rng = np.random.default_rng(seed + 1)
    corpus = build_corpus(seed, size)
    cfg = search or SearchConfig(grid_resolution=32, seed_count=4, deterministic_seed=seed)

    decomposition = Check("Decomp.", "Tr_X sum f(p_y rho_X|y) = Tr f(Pi_Y[rho])", IDENTITY_TOL)
    lemma1 = Check("Lemma 1", "Tr[rho g(Pi[rho])] = Tr[Pi[rho] g(Pi[rho])]", IDENTITY_TOL)
    lemma2 = Check("Lemma 2", "Tr Pi[rho]^q = sum p^q Tr rho_X|y^q", IDENTITY_TOL)
    lemma3 = Check("Lemma 3", "(Tr_Y P_y rho)^q = Tr_Y (P_y rho P_y)^q", IDENTITY_TOL)
    lemma4 = Check("Lemma 4", "sum p^q = Tr Pi[rho_Y]^q", IDENTITY_TOL)
    theorem1 = Check("Theorem 1", "q joint entropy theorem", IDENTITY_TOL)
    lemma5 = Check("Lemma 5", "pure: Tr Pi[rho]^q <= Tr rho_Y^q (q > 1)", IDENTITY_TOL)
    lemma5s = Check("Lemma 5 (S)", "pure: S_q(Pi[rho_Y]) >= S_q(rho_Y), all q", IDENTITY_TOL)
    geometric = Check("Geometric", "||rho - Pi[rho]||^2 = S_2(Pi[rho]) - S_2(rho)", 1e-12)
    prop1 = Check("Prop. 1", "Delta B >= 0 (probed bases and minimum)", 1e-9)
    prop2 = Check("Prop. 2", "Delta B <= upper bound", 1e-9)
    prop3 = Check("Prop. 3", "Delta B(rho_X x rho_Y) = 0", 1e-9)
    prop4 = Check("Prop. 4", "local-unitary invariance", 1e-6)
    prop5 = Check("Prop. 5", "continuity under mixing", 1e-7)

    for rho in corpus.all:
        basis = _random_basis(rho.dim_y, rng)
        post = channel(rho, basis)
        ens = conditional_ensemble(rho, basis)
        p = np.maximum(ens.probabilities, 0.0)
        blocks = measured_blocks(rho.matrix, rho.dim_x, rho.dim_y, basis.vectors)

        for f in (lambda w: w ** 2, lambda w: w ** 3):
            lhs = sum(_trace_fn(p_y * c.matrix, f) for p_y, c in zip(p, ens.conditionals))
            decomposition.record(abs(lhs - _trace_fn(post.matrix, f)))

        for g in (lambda w: w, lambda w: w ** 2):
            gp = matrix_function(post.matrix, g)
            lemma1.record(abs(np.trace(rho.matrix @ gp) - np.trace(post.matrix @ gp)))

        post_w = np.linalg.eigvalsh(post.matrix)
        rho_y = partial_trace(rho, "X")
        dephased_y = sum(P @ rho_y @ P for P in basis.projectors)
        for q in LEMMA_QS:
            tr_post = power_trace(np.maximum(post_w, 0.0), q)
            cond = sum(p_y ** q * power_trace(c.eigenvalues(), q)
                       for p_y, c, ph in zip(p, ens.conditionals, ens.placeholder) if not ph)
            lemma2.record(abs(tr_post - cond))
            lemma4.record(abs(power_trace(p, q) - power_trace(np.linalg.eigvalsh(dephased_y), q)))
            for y, P in enumerate(basis.projectors):
                big = np.kron(np.eye(rho.dim_x), P)
                rhs = partial_trace(_mpow(big @ rho.matrix @ big, q), "Y", (rho.dim_x, rho.dim_y))
                lemma3.record(float(np.max(np.abs(_mpow(blocks[y], q) - rhs))))

        for q in POSITIVITY_QS:
            theorem1.record(abs(q_conditional_form(rho, q, basis)
                                - (_S(post.matrix, q) - _S(rho.matrix, q))))
            f = q_convex_function(q)
            value = delta_B_at_basis(rho, basis, f)
            prop1.record(-value)
            prop2.record(value - upper_bound_at_basis(rho, basis, f))

        geometric.record(abs(hilbert_schmidt_disturbance(rho, basis)
                             - (_S(post.matrix, 2) - _S(rho.matrix, 2))))

    for rho in corpus.pure:
        basis = _random_basis(rho.dim_y, rng)
        post = channel(rho, basis)
        rho_y = DensityMatrix.unchecked(partial_trace(rho, "X"), rho.dim_y, 1)
        dephased_y = sum(P @ rho_y.matrix @ P for P in basis.projectors)
        for q in LEMMA_QS:
            if q > 1:
                excess = power_trace(np.maximum(np.linalg.eigvalsh(post.matrix), 0.0), q) - power_trace(rho_y.eigenvalues(), q)
                lemma5.record(excess)
            lemma5s.record(tsallis_entropy(rho_y, q) - tsallis_entropy(dephased_y, q))

    two_qubit = corpus.two_qubit
    space = SingleBasisSpace(2)
    for k, rho in enumerate(two_qubit):
        q = POSITIVITY_QS[k % len(POSITIVITY_QS)]
        f = q_convex_function(q)
        value = minimize(ChannelObjective(rho, f), space, cfg).value
        prop1.record(-value)
        u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        rotated = DensityMatrix.unchecked(u @ rho.matrix @ u.conj().T, 2, 2)
        prop4.record(abs(minimize(ChannelObjective(rotated, f), space, cfg).value - value))

    for rho in corpus.product:
        if (rho.dim_x, rho.dim_y) != (2, 2):
            continue
        for q in (1.0, 2.0):
            prop3.record(abs(minimize(ChannelObjective(rho, q_convex_function(q)), space, cfg).value))

    for rho in two_qubit[:12]:
        f = q_convex_function(2.0)
        tau = states.random_mixed(2, 2, seed=rng)
        base = minimize(ChannelObjective(rho, f), space, cfg).value
        gaps = []
        for eps in (1e-2, 1e-3, 1e-4):
            sigma = DensityMatrix.unchecked((1 - eps) * rho.matrix + eps * tau.matrix, 2, 2)
            gaps.append(abs(minimize(ChannelObjective(sigma, f), space, cfg).value - base))
        # the gap must shrink with eps, up to optimiser noise
        growth = max(gaps[1] - gaps[0], gaps[2] - gaps[1], 0.0)
        prop5.record(growth)

    return [decomposition, lemma1, lemma2, lemma3, lemma4, theorem1, lemma5, lemma5s,
            geometric, prop1, prop2, prop3, prop4, prop5]


def format_report(checks: list[Check], seed: int, size: int) -> str:
    lines = [f"qdiscord verify  seed={seed}  corpus={size}"]
    lines += [c.line() for c in checks]
    passed = sum(c.passed for c in checks)
    lines.append(f"RESULT: {'PASS' if passed == len(checks) else 'FAIL'} ({passed}/{len(checks)} checks)")
    return "\n".join(lines) + "\n"
