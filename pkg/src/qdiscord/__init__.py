"""Generalised Bayesian quantum discord built on Tsallis q-entropies."""

from .discord import (
    DiscordResult,
    bell_diagonal_q_discord,
    bell_diagonal_upper_bound_axes,
    delta_B,
    delta_B_upper_bound,
    entropic_discord,
    geometric_discord,
    joint_disturbance,
    max_entangled_q_discord,
    pure_state_q_discord,
    q_convex_function,
    q_discord,
)
from .entropy import EntropicIndex, information, tsallis_entropy, von_neumann_entropy
from .linalg import DensityMatrix, InvalidStateError, NotHermitianError, partial_trace
from .measurement import MeasurementBasis, general_basis, measure_channel, qubit_basis
from .optimizer import SearchConfig
from .states import BlochCorrelation, StateSpec, bell_diagonal, load_state, save_state, uv_state, werner
from .thermo import ThermoContext, demon_excess_work, extractable_work

__all__ = [
    "BlochCorrelation", "DensityMatrix", "DiscordResult", "EntropicIndex", "InvalidStateError",
    "MeasurementBasis", "NotHermitianError", "SearchConfig", "StateSpec", "ThermoContext",
    "bell_diagonal", "bell_diagonal_q_discord", "bell_diagonal_upper_bound_axes", "delta_B",
    "delta_B_upper_bound", "demon_excess_work", "entropic_discord", "extractable_work",
    "general_basis", "geometric_discord", "information", "joint_disturbance", "load_state",
    "max_entangled_q_discord", "measure_channel", "partial_trace", "pure_state_q_discord",
    "q_convex_function", "q_discord", "qubit_basis", "save_state", "tsallis_entropy",
    "uv_state", "von_neumann_entropy", "werner",
]
