"""Command-line interface: ``qdiscord {compute,sweep,fig1,verify}``.

States are given as ``kind:key=value,...``, for example ``werner:v=0.5``,
``uv:u=1/3,v=0.8``, ``bell-diag:c1=0.1,c2=-0.3,c3=0.2``,
``max-entangled:d=3``, ``mixed-random:dimX=2,dimY=3,seed=7`` or
``file:state.qdm``. Exit codes: 0 success, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .discord import (
    bell_diagonal_q_discord,
    geometric_discord,
    max_entangled_q_discord,
    pure_state_q_discord,
    q_discord,
)
from .linalg import InvalidStateError
from .optimizer import SearchConfig
from .states import BlochCorrelation, StateSpec, bell_diagonal, random_pure_vector, uv_correlation
from .thermo import dimensionless_excess
from .verify import format_report, run_suite

FIG1_LADDER = tuple(1 + n / 2 for n in range(21))


class UsageError(Exception):
    pass


@dataclass
class CommandRequest:
    command: str
    state: StateSpec | None = None
    q_list: list[float] = field(default_factory=list)
    output: str | None = None
    format: str = "csv"
    search: SearchConfig = field(default_factory=SearchConfig)
    family: str = "werner"
    u: float | None = None
    samples: int = 200
    numeric: bool = False
    seed: int = 42
    corpus: int = 200
    fault: bool = False

    def __post_init__(self) -> None:
        if self.command in ("compute", "sweep"):
            if not self.q_list:
                raise UsageError("--q needs at least one value")
            if self.state is None:
                raise UsageError("--state is required")
        if any(not q > 0 for q in self.q_list):
            raise UsageError("every q must be positive")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def thread_count() -> int:
    raw = os.environ.get("QDISCORD_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QDISCORD_THREADS must be an integer, got {raw!r}") from None
    return n if n > 0 else (os.cpu_count() or 1)


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Map in input order; results do not depend on completion order."""
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def write_table(header: Sequence[str], rows: Iterable[Sequence], fmt_kind: str, out) -> None:
    rows = [[fmt(v) for v in r] for r in rows]
    if fmt_kind == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    out.write("  ".join(h.ljust(wd) for h, wd in zip(header, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(v.ljust(wd) for v, wd in zip(r, widths)).rstrip() + "\n")


def closed_form_value(spec: StateSpec, q: float) -> float | None:
    """Closed-form D_q when the state family has one."""
    c = spec.bloch_correlation()
    if c is not None:
        return bell_diagonal_q_discord(c, q)[0]
    p = spec.parameters
    if spec.kind == "max-entangled":
        return max_entangled_q_discord(int(p["d"]), q)[0]
    if spec.kind == "pure-random":
        dx, dy = int(p["dimX"]), int(p["dimY"])
        psi = random_pure_vector(dx * dy, int(p["seed"]))
        return pure_state_q_discord(psi, q, dx, dy)
    return None


# ---------------------------------------------------------------------------

def cmd_compute(req: CommandRequest, out) -> int:
    rho = req.state.build()
    qs = list(req.q_list)
    results = parallel_map(lambda q: q_discord(rho, q, req.search), qs)
    header = ["measure", "q", "value", "upper_bound", "angles", "converged", "closed_form", "abs_diff"]
    rows = []

    def row(measure, q, res):
        cf = closed_form_value(req.state, q)
        angles = ";".join(f"{a:.17g}" for a in res.angles)
        diff = abs(res.value - cf) if cf is not None else ""
        rows.append([measure, q, res.value, res.upper_bound, angles, res.converged,
                     "" if cf is None else cf, diff])

    for q, res in zip(qs, results):
        row("D_q", q, res)
    if any(math.isclose(q, 1.0) for q in qs):
        row("D_E", 1.0, results[[math.isclose(q, 1.0) for q in qs].index(True)])
    if any(math.isclose(q, 2.0) for q in qs):
        row("D_G", 2.0, geometric_discord(rho, req.search))
    write_table(header, rows, req.format, out)
    return 0


def cmd_sweep(req: CommandRequest, out) -> int:
    rho = req.state.build()
    qs = sorted(req.q_list)
    results = parallel_map(lambda q: q_discord(rho, q, req.search), qs)
    rows = [[q, r.value, r.upper_bound, r.converged] for q, r in zip(qs, results)]
    write_table(["q", "D_q", "D_q_ub", "converged"], rows, req.format, out)
    return 0


def fig1_grid(family: str, u: float | None, samples: int) -> tuple[np.ndarray, Callable[[float], BlochCorrelation]]:
    if samples < 2:
        raise UsageError("--samples must be at least 2")
    if family == "werner":
        return np.linspace(0.0, 1.0, samples), lambda v: BlochCorrelation(-v, -v, -v)
    if family == "uv":
        if u is None:
            raise UsageError("the uv family needs --u")
        vs = np.linspace(0.0, u + 2.0 / 3.0, samples)
        try:
            for v in (vs[0], vs[-1]):
                uv_correlation(u, v)
        except InvalidStateError as exc:
            raise UsageError(f"uv family with u={u} leaves the state space: {exc}") from None
        return vs, lambda v: uv_correlation(u, v)
    raise UsageError(f"unknown family {family!r}; choose werner or uv")


def fig1_rows(req: CommandRequest) -> tuple[list[str], list[list[float]]]:
    vs, corr = fig1_grid(req.family, req.u, req.samples)
    qs = list(req.q_list) if req.q_list else list(FIG1_LADDER)
    header = ["v", "D_1"] + [f"Dq_{q:g}" for q in qs]

    def point(v: float) -> list[float]:
        c = corr(float(v))
        if req.numeric:
            rho = bell_diagonal(c)
            return [float(v), dimensionless_excess(rho, req.search)] + [q_discord(rho, q, req.search, with_bound=False).value for q in qs]
        return [float(v), bell_diagonal_q_discord(c, 1.0)[0]] + [bell_diagonal_q_discord(c, q)[0] for q in qs]

    return header, parallel_map(point, list(vs))


def cmd_fig1(req: CommandRequest, out) -> int:
    header, rows = fig1_rows(req)
    write_table(header, rows, req.format, out)
    return 0


def cmd_verify(req: CommandRequest, out) -> int:
    checks = run_suite(req.seed, req.corpus, fault=req.fault)
    out.write(format_report(checks, req.seed, req.corpus))
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {"compute": cmd_compute, "sweep": cmd_sweep, "fig1": cmd_fig1, "verify": cmd_verify}


# ---------------------------------------------------------------------------

def parse_q_list(text: str) -> list[float]:
    """Comma-separated values and/or start:stop:step ranges (stop inclusive)."""
    qs: list[float] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ":" in part:
            a, b, s = (float(x) for x in part.split(":"))
            if s <= 0:
                raise ValueError("range step must be positive")
            n = int(math.floor((b - a) / s + 1e-9))
            qs.extend(round(a + k * s, 12) for k in range(n + 1))
        else:
            qs.append(float(part))
    return qs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdiscord", description="Generalised Bayesian discord measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_state=True):
        if with_state:
            p.add_argument("--state", required=True, help="state spec kind:key=value,...")
            p.add_argument("--q", required=True, help="q values, e.g. 1,2 or 1:11:1")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        p.add_argument("--format", choices=("csv", "plain"), default="csv")
        p.add_argument("--grid", type=int, help="grid points per angle")
        p.add_argument("--iterations", type=int, help="Nelder-Mead iteration cap")
        p.add_argument("--tolerance", type=float, help="simplex diameter for convergence")
        p.add_argument("--restarts", type=int, help="random restarts")
        p.add_argument("--search-seed", type=int, help="seed of the restart generator")

    common(sub.add_parser("compute", help="D_q, bounds, D_E and D_G for one state"))
    common(sub.add_parser("sweep", help="D_q over a list of q as CSV"))
    f = sub.add_parser("fig1", help="q-discord versus excess work for the Werner or uv family")
    common(f, with_state=False)
    f.add_argument("--family", choices=("werner", "uv"), default="werner")
    f.add_argument("--u", type=str, help="u for the uv family (fractions allowed, e.g. 1/3)")
    f.add_argument("--samples", type=int, default=200)
    f.add_argument("--q", help="q values; default is the ladder 1 + n/2, n = 0..20")
    f.add_argument("--numeric", action="store_true", help="optimise numerically instead of the closed form")
    v = sub.add_parser("verify", help="run the seeded identity and property checks")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--corpus", type=int, default=200, help="number of states")
    v.add_argument("--output", "-o")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def _fraction(s: str | None) -> float | None:
    if s is None:
        return None
    if "/" in s:
        a, b = s.split("/", 1)
        return float(a) / float(b)
    return float(s)


def request_from_args(ns: argparse.Namespace) -> CommandRequest:
    search = SearchConfig()
    if ns.command != "verify":
        search = search.with_overrides(
            grid_resolution=ns.grid, refine_iterations=ns.iterations, tolerance=ns.tolerance,
            seed_count=ns.restarts, deterministic_seed=ns.search_seed,
        )
    kw = dict(command=ns.command, output=ns.output, search=search)
    if ns.command in ("compute", "sweep"):
        kw.update(state=StateSpec.parse(ns.state), q_list=parse_q_list(ns.q), format=ns.format)
    elif ns.command == "fig1":
        kw.update(family=ns.family, u=_fraction(ns.u), samples=ns.samples, numeric=ns.numeric,
                  q_list=parse_q_list(ns.q) if ns.q else [], format=ns.format)
        if ns.family == "uv" and kw["u"] is None:
            kw["u"] = 1.0 / 3.0
    else:
        kw.update(seed=ns.seed, corpus=ns.corpus, fault=ns.inject_fault)
    return CommandRequest(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        req = request_from_args(ns)
        buf = io.StringIO()
        code = COMMANDS[req.command](req, buf)
    except (UsageError, ValueError) as exc:
        print(f"qdiscord {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    if req.output:
        with open(req.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
