"""
ET-DGT Experiments Package

Event-triggered dual gradient tracking for economic dispatch over
unbalanced directed networks, with a periodic baseline, a centralized
oracle and explicit step-size bounds.
"""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("etdgt-experiments")
except importlib.metadata.PackageNotFoundError:
    # Package is not installed, use development version
    __version__ = "0.1.0-dev"

__author__ = "ETDGT Team"
__email__ = "team@example.com"

# Import core modules for convenience
from . import analysis
from . import core
from . import utils

# Import key classes/functions for easy access
from .analysis.trace_analysis import TraceAnalyzer
from .core.engine import run, run_many
from .core.oracle import solve_centralized
from .core.scenario import gen_large_scenario, load_scenario
from .core.stepsize import bound_report

__all__ = [
    "__version__",
    "__author__",
    "__email__",
    "analysis",
    "core",
    "utils",
    "TraceAnalyzer",
    "run",
    "run_many",
    "solve_centralized",
    "gen_large_scenario",
    "load_scenario",
    "bound_report",
]
