"""Work extraction by classical versus quantum demons.

Information I(rho) = S_max - S_q(rho) converts to work kT * I(rho). The
extra work available to a demon measuring globally, compared with the best
local measurement on Y, is kT times the q-discord.
"""

from __future__ import annotations

from dataclasses import dataclass

from .discord import DiscordResult, q_discord
from .entropy import EntropicIndex, as_index, information
from .linalg import DensityMatrix
from .measurement import MeasurementBasis, measure_channel
from .optimizer import SearchConfig


@dataclass(frozen=True)
class ThermoContext:
    kT: float = 1.0
    q: EntropicIndex = EntropicIndex(1.0)

    def __post_init__(self) -> None:
        if not self.kT > 0:
            raise ValueError(f"kT must be positive, got {self.kT}")
        object.__setattr__(self, "q", as_index(self.q))

    @property
    def beta(self) -> float:
        return 1.0 / self.kT

    @property
    def interpretable(self) -> bool:
        """Whether the work reading of D_q is claimed for this q, i.e. q in (0, 2)."""
        return 0 < self.q.q < 2


@dataclass(frozen=True)
class ExcessWork:
    value: float
    discord: DiscordResult
    interpretation_warning: bool

    def __float__(self) -> float:
        return self.value


def extractable_work(rho: DensityMatrix, ctx: ThermoContext) -> float:
    """kT * I(rho), with S_max taken for the joint dimension."""
    return ctx.kT * information(rho, ctx.q, rho.dim)


def demon_excess_work(rho: DensityMatrix, ctx: ThermoContext, search: SearchConfig | None = None) -> ExcessWork:
    res = q_discord(rho, ctx.q, search)
    return ExcessWork(ctx.kT * res.value, res, not ctx.interpretable)


def two_sided_excess(rho: DensityMatrix, ctx: ThermoContext, basis: MeasurementBasis) -> float:
    """W(rho) - W(Pi_Y[rho]) evaluated at one basis."""
    return extractable_work(rho, ctx) - extractable_work(measure_channel(rho, basis), ctx)


def dimensionless_excess(rho: DensityMatrix, search: SearchConfig | None = None) -> float:
    """beta * Delta W at q = 1, which is the entropic discord D_1."""
    return q_discord(rho, 1.0, search, with_bound=False).value
