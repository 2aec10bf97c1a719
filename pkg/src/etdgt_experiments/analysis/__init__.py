"""
Trace analysis.

Post-processing of simulation traces: rate fits, communication ratios and
run summaries.
"""

from .trace_analysis import TraceAnalyzer

__all__ = ["TraceAnalyzer"]
