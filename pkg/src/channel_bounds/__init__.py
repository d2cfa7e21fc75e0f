"""Entanglement-measure bounds on assisted capacities of finite-dimensional quantum channels."""

from .bounds import (
    BoundReport,
    amortized_gap,
    bound_report,
    coherent_information_mes,
    neg_cb_entropy,
    qubit_channel_upper_bound,
    ska_upper_bound,
    twirled_np,
)
from .channels import (
    KrausChannel,
    amplitude_damping,
    apply,
    choi_state,
    depolarizing,
    mixed_channel_np,
    stinespring,
)
from .diamond import DiamondResult, diamond_distance
from .entmeasures import MeasureKind, MeasureResult, OptimizerConfig, SubsystemCut, e_ppt, measure, rains
from .entropy import g_func, h2, relative_entropy, von_neumann
from .twirl import UnitaryRep, named_rep, teleport_simulate_twirl, twirl_channel

__all__ = [
    "BoundReport", "DiamondResult", "KrausChannel", "MeasureKind", "MeasureResult", "OptimizerConfig",
    "SubsystemCut", "UnitaryRep", "amortized_gap", "amplitude_damping", "apply", "bound_report",
    "choi_state", "coherent_information_mes", "depolarizing", "diamond_distance", "e_ppt", "g_func", "h2",
    "measure", "mixed_channel_np", "named_rep", "neg_cb_entropy", "qubit_channel_upper_bound", "rains",
    "relative_entropy", "ska_upper_bound", "stinespring", "teleport_simulate_twirl", "twirl_channel",
    "twirled_np", "von_neumann",
]

__version__ = "0.1.0"
