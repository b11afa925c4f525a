"""State families, random states, and the QDM text format."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import (
    HERMITIAN_TOL,
    PSD_TOL,
    TRACE_TOL,
    DensityMatrix,
    InvalidStateError,
    partial_trace,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _pauli_sum(c) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    for ci, s in zip(c, PAULI):
        m = m + ci * np.kron(s, s)
    return m / 4


def bell_diagonal_eigenvalues(c) -> np.ndarray:
    """Eigenvalues of the Bell-diagonal state, ascending.

    Bell states are common eigenvectors of s_i (x) s_i with eigenvalue
    signs (t1, t2, t3) in {(1,-1,1), (-1,1,1), (1,1,-1), (-1,-1,-1)}.
    """
    c1, c2, c3 = c
    lam = np.array([
        1 + c1 - c2 + c3,
        1 - c1 + c2 + c3,
        1 + c1 + c2 - c3,
        1 - c1 - c2 - c3,
    ]) / 4
    return np.sort(lam)


@dataclass(frozen=True)
class BlochCorrelation:
    """Correlation vector c of the state (1 + sum_i c_i s_i (x) s_i)/4."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        lam = bell_diagonal_eigenvalues(self.as_array())
        if lam[0] < -PSD_TOL:
            raise InvalidStateError(
                f"c = {self.as_array().tolist()} gives eigenvalue {lam[0]:.6g} < 0"
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    @property
    def c_max(self) -> float:
        return float(np.max(np.abs(self.as_array())))


def bell_diagonal(c) -> DensityMatrix:
    if not isinstance(c, BlochCorrelation):
        c = BlochCorrelation(*map(float, c))
    return DensityMatrix(_pauli_sum(c.as_array()), 2, 2)


def werner(v: float) -> DensityMatrix:
    """Werner state c = -v(1, 1, 1) for v in [0, 1]."""
    if not 0.0 <= v <= 1.0:
        raise InvalidStateError(f"Werner parameter v={v} outside [0, 1]")
    return bell_diagonal((-v, -v, -v))


def uv_correlation(u: float, v: float) -> BlochCorrelation:
    return BlochCorrelation(u, v, (u - v) / 2)


def uv_state(u: float, v: float) -> DensityMatrix:
    return bell_diagonal(uv_correlation(u, v))


def uv_entangled(u: float, v: float) -> bool:
    """Entanglement flag for the uv family: v > (2 - u)/3."""
    return v > (2 - u) / 3


def max_entangled_vector(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError(f"maximally entangled state needs d >= 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[[i * d + i for i in range(d)]] = 1 / math.sqrt(d)
    return psi


def max_entangled(d: int) -> DensityMatrix:
    return DensityMatrix.from_pure(max_entangled_vector(d), d, d)


def product_state(rho_x: np.ndarray, rho_y: np.ndarray) -> DensityMatrix:
    return DensityMatrix(np.kron(rho_x, rho_y), rho_x.shape[0], rho_y.shape[0])


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_pure_vector(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_pure(dim_x: int, dim_y: int, seed=None) -> DensityMatrix:
    return DensityMatrix.from_pure(random_pure_vector(dim_x * dim_y, seed), dim_x, dim_y)


def random_mixed(dim_x: int, dim_y: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Marginal of a random pure state on (X (x) Y) (x) ancilla of size ``rank``."""
    n = dim_x * dim_y
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise ValueError(f"rank must lie in [1, {n}], got {rank}")
    psi = random_pure_vector(n * rank, seed).reshape(n, rank)
    m = psi @ psi.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real, dim_x, dim_y)


def random_product(dim_x: int, dim_y: int, seed=None) -> DensityMatrix:
    rng = _rng(seed)
    a = random_mixed(dim_x, 1, seed=rng).matrix
    b = random_mixed(dim_y, 1, seed=rng).matrix
    return product_state(a, b)


def random_bloch_correlation(seed=None) -> BlochCorrelation:
    """Uniform sample from the tetrahedron of valid correlation vectors."""
    rng = _rng(seed)
    while True:
        c = rng.uniform(-1, 1, 3)
        if bell_diagonal_eigenvalues(c)[0] >= 0:
            return BlochCorrelation(*c)


# ---------------------------------------------------------------------------
# State specifications, as used on the command line: kind:key=value,...

STATE_KINDS = {
    "werner": ("v",),
    "uv": ("u", "v"),
    "bell-diag": ("c1", "c2", "c3"),
    "max-entangled": ("d",),
    "pure-random": ("dimX", "dimY", "seed"),
    "mixed-random": ("dimX", "dimY", "seed"),
    "file": (),
}


@dataclass(frozen=True)
class StateSpec:
    kind: str
    parameters: dict[str, float] = field(default_factory=dict)
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in STATE_KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}; choose from {', '.join(STATE_KINDS)}")
        missing = [k for k in STATE_KINDS[self.kind] if k not in self.parameters]
        if missing:
            raise ValueError(f"state kind {self.kind!r} is missing parameter(s): {', '.join(missing)}")
        if self.kind == "file" and not self.path:
            raise ValueError("file state needs a path, e.g. file:state.qdm")

    @classmethod
    def parse(cls, text: str) -> "StateSpec":
        kind, _, rest = text.partition(":")
        kind = kind.strip()
        if kind == "file":
            return cls(kind, {}, rest.strip())
        params: dict[str, float] = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"expected key=value in state spec, got {item!r}")
            try:
                params[key.strip()] = float(_parse_number(val.strip()))
            except ValueError:
                raise ValueError(f"bad number {val!r} for {key!r}") from None
        return cls(kind, params)

    def build(self) -> DensityMatrix:
        p = self.parameters
        if self.kind == "werner":
            return werner(p["v"])
        if self.kind == "uv":
            return uv_state(p["u"], p["v"])
        if self.kind == "bell-diag":
            return bell_diagonal((p["c1"], p["c2"], p["c3"]))
        if self.kind == "max-entangled":
            return max_entangled(_as_int(p["d"], "d"))
        if self.kind == "pure-random":
            return random_pure(_as_int(p["dimX"], "dimX"), _as_int(p["dimY"], "dimY"), _as_int(p["seed"], "seed"))
        if self.kind == "mixed-random":
            rank = _as_int(p["rank"], "rank") if "rank" in p else None
            return random_mixed(_as_int(p["dimX"], "dimX"), _as_int(p["dimY"], "dimY"), rank, _as_int(p["seed"], "seed"))
        return load_state(self.path)

    def bloch_correlation(self) -> BlochCorrelation | None:
        """Correlation vector when the state is Bell-diagonal by construction."""
        p = self.parameters
        if self.kind == "werner":
            return BlochCorrelation(-p["v"], -p["v"], -p["v"])
        if self.kind == "uv":
            return uv_correlation(p["u"], p["v"])
        if self.kind == "bell-diag":
            return BlochCorrelation(p["c1"], p["c2"], p["c3"])
        return None


def _parse_number(s: str) -> float:
    if "/" in s:
        num, den = s.split("/", 1)
        return float(num) / float(den)
    return float(s)


def _as_int(x: float, name: str) -> int:
    if x != int(x):
        raise ValueError(f"{name} must be an integer, got {x}")
    return int(x)


# ---------------------------------------------------------------------------
# QDM files

class StateFileError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.line = line


_HEADER = re.compile(r"^QDM\s+1\s+(\d+)\s+(\d+)\s*$")


def format_complex(z: complex) -> str:
    re_, im = float(z.real), float(z.imag)
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re_:.17g}{sign}{abs(im):.17g}i"


def parse_complex(tok: str) -> complex:
    if not tok.endswith("i"):
        raise ValueError(f"complex entry must end in 'i': {tok!r}")
    body = tok[:-1]
    # split at the last sign that is not part of an exponent or the leading sign
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return complex(float(body[:k]), float(body[k:]))
    raise ValueError(f"cannot parse complex entry {tok!r}")


def save_state(rho: DensityMatrix, path) -> None:
    n = rho.dim
    lines = [f"QDM 1 {rho.dim_x} {rho.dim_y}"]
    for i in range(n):
        lines.append(" ".join(format_complex(z) for z in rho.matrix[i]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_state(path) -> DensityMatrix:
    text = Path(path).read_text(encoding="utf-8")
    rows: list[tuple[int, list[complex]]] = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise StateFileError(path, lineno, f"malformed header {line!r}; expected 'QDM 1 <dimX> <dimY>'")
            header = (int(m.group(1)), int(m.group(2)), lineno)
            continue
        try:
            rows.append((lineno, [parse_complex(t) for t in line.split()]))
        except ValueError as exc:
            raise StateFileError(path, lineno, str(exc)) from None
    if header is None:
        raise StateFileError(path, None, "missing 'QDM 1 <dimX> <dimY>' header")
    dx, dy, hline = header
    n = dx * dy
    if n < 1:
        raise StateFileError(path, hline, "dimensions must be positive")
    if len(rows) != n:
        raise StateFileError(path, rows[-1][0] if rows else hline, f"expected {n} rows, found {len(rows)}")
    for lineno, vals in rows:
        if len(vals) != n:
            raise StateFileError(path, lineno, f"expected {n} entries, found {len(vals)}")
    m = np.array([v for _, v in rows], dtype=complex)

    diff = np.abs(m - m.conj().T)
    if diff.max() > HERMITIAN_TOL:
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        raise StateFileError(
            path, rows[i][0],
            f"not Hermitian: entry ({i},{j}) differs from conj of ({j},{i}) by {diff[i, j]:.3e}",
        )
    tr = np.trace(m).real
    if abs(tr - 1) > TRACE_TOL:
        raise StateFileError(path, None, f"trace violation: trace is {tr:.17g}, expected 1")
    lmin = np.linalg.eigvalsh(m)[0]
    if lmin < -PSD_TOL:
        raise StateFileError(path, None, f"not positive semidefinite: min eigenvalue {lmin:.3e}")
    return DensityMatrix(m, dx, dy)


def marginals(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    return partial_trace(rho, "Y"), partial_trace(rho, "X")
