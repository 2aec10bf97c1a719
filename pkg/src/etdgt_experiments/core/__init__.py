"""
Core ET-DGT functionality.

Graphs and mixing matrices, agent costs, triggering, the round engine,
the centralized oracle and the step-size bounds.
"""

from .config import RunConfig, load_run_config
from .engine import Algorithm, MetricsTrace, RoundMetrics, SimState, run, run_many
from .errors import ETDGTError
from .logging import RunEventHandler
from .network import DiGraph, NetworkModel, build_network
from .objective import CostBank, CostModel
from .oracle import OracleSolution, solve_centralized
from .scenario import Scenario, gen_large_scenario, load_scenario
from .stepsize import BoundInputs, bound_report
from .trigger import TriggerSchedule

__all__ = [
    "RunConfig",
    "load_run_config",
    "Algorithm",
    "MetricsTrace",
    "RoundMetrics",
    "SimState",
    "run",
    "run_many",
    "ETDGTError",
    "RunEventHandler",
    "DiGraph",
    "NetworkModel",
    "build_network",
    "CostBank",
    "CostModel",
    "OracleSolution",
    "solve_centralized",
    "Scenario",
    "gen_large_scenario",
    "load_scenario",
    "BoundInputs",
    "bound_report",
    "TriggerSchedule",
]
