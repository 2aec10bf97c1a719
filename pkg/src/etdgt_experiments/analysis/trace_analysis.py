"""Convergence and communication statistics of simulation traces."""

import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core.engine import MetricsTrace


class TraceAnalyzer:
    """Analyzer for convergence rates and communication savings of runs."""

    def __init__(self, fit_lo: float = 1e-6, fit_hi: float = 1e-1):
        """
        Initialize trace analyzer.

        Args:
            fit_lo: Smallest primal error included in rate fits
            fit_hi: Largest primal error included in rate fits
        """
        self.fit_lo = fit_lo
        self.fit_hi = fit_hi
        self.summary_history: List[Dict[str, Any]] = []

    def linear_rate_fit(
        self,
        trace: MetricsTrace,
        lo: Optional[float] = None,
        hi: Optional[float] = None,
        metric: str = "primal_err",
    ) -> Dict[str, float]:
        """
        Least-squares line through log10 of a metric against k.

        Only rounds whose metric lies inside [lo, hi] enter the fit.

        Args:
            trace: Simulation trace
            lo: Lower end of the fitting window
            hi: Upper end of the fitting window
            metric: Trace column to fit

        Returns:
            slope, intercept, r2 and the number of points; nan when fewer
            than three points fall in the window
        """
        lo = self.fit_lo if lo is None else lo
        hi = self.fit_hi if hi is None else hi
        k = trace.column("k")
        values = trace.column(metric)
        mask = np.isfinite(values) & (values >= lo) & (values <= hi)
        count = int(mask.sum())
        if count < 3:
            return {
                "slope": math.nan,
                "intercept": math.nan,
                "r2": math.nan,
                "count": count,
                "rate": math.nan,
            }

        x = k[mask]
        y = np.log10(values[mask])
        slope, intercept = np.polyfit(x, y, 1)
        residual = y - (slope * x + intercept)
        total = np.sum((y - y.mean()) ** 2)
        r2 = 1.0 - float(np.sum(residual**2) / total) if total > 0 else 1.0
        return {
            "slope": float(slope),
            "intercept": float(intercept),
            "r2": r2,
            "count": count,
            "rate": float(10.0**slope),
        }

    @staticmethod
    def running_grad_average(trace: MetricsTrace) -> np.ndarray:
        """(1/k) times the sum of squared gradient norms over t < k, for k >= 1."""
        squares = trace.column("grad_norm") ** 2
        cumulative = np.cumsum(squares)[:-1]
        return cumulative / np.arange(1, len(squares))

    @staticmethod
    def is_non_increasing(
        values: Sequence[float], start: int = 0, slack: float = 1e-12
    ) -> bool:
        """True when values[start:] never rises by more than slack."""
        tail = np.asarray(values, dtype=float)[start:]
        if tail.size < 2:
            return True
        return bool(np.all(np.diff(tail) <= slack))

    @staticmethod
    def comm_ratio(
        et_trace: MetricsTrace, dd_trace: MetricsTrace, upto: Optional[int] = None
    ) -> Dict[str, float]:
        """
        Communication of an event-triggered run relative to the periodic run.

        Args:
            et_trace: Event-triggered trace
            dd_trace: Periodic trace
            upto: Round at which to compare cumulative counts
                (default: last common round)

        Returns:
            events ratio (agent broadcasts) and links ratio
            (per-neighbor messages)
        """
        index = min(len(et_trace), len(dd_trace)) - 1 if upto is None else upto
        et, dd = et_trace.rows[index], dd_trace.rows[index]
        et_events = et.comm_w + et.comm_s
        dd_events = dd.comm_w + dd.comm_s
        et_links = et.link_w + et.link_s
        dd_links = dd.link_w + dd.link_s
        return {
            "k": et.k,
            "events_et": et_events,
            "events_dd": dd_events,
            "events": et_events / dd_events if dd_events else math.nan,
            "links": et_links / dd_links if dd_links else math.nan,
        }

    @staticmethod
    def warmup_gradient_sum(trace: MetricsTrace, k0: float) -> float:
        """Sum of squared gradient norms over rounds t <= k0."""
        squares = trace.column("grad_norm") ** 2
        upto = min(len(squares), int(math.floor(k0)) + 1)
        return float(np.sum(squares[:upto]))

    @staticmethod
    def reference_rate(rate: float, K: int) -> np.ndarray:
        """Reference curve rate**k for k = 0..K."""
        return rate ** np.arange(K + 1, dtype=float)

    def summarize(
        self, traces: Dict[str, MetricsTrace], oracle: Optional[Any] = None
    ) -> Dict[str, Any]:
        """
        Summary of one or more runs of the same scenario.

        Args:
            traces: Traces keyed by algorithm name
            oracle: Optional OracleSolution for relative primal errors

        Returns:
            Per-algorithm final metrics, communication ratio and rate fits
        """
        summary: Dict[str, Any] = {"algorithms": {}}
        for name, trace in traces.items():
            final = trace.final
            entry: Dict[str, Any] = {
                "K": final.k,
                "consensus_error": final.consensus_error,
                "tracking_error": final.tracking_error,
                "grad_norm": final.grad_norm,
                "primal_err": final.primal_err,
                "primal_residual": final.primal_residual,
                "supply_gap": final.supply_gap,
                "comm_w": final.comm_w,
                "comm_s": final.comm_s,
                "link_w": final.link_w,
                "link_s": final.link_s,
                "rate_fit": self.linear_rate_fit(trace),
            }
            if oracle is not None:
                scale = float(np.linalg.norm(oracle.W_star))
                relative = final.primal_err / scale if scale > 0 else math.nan
                entry["relative_primal_err"] = relative
                entry["opt_gap"] = final.opt_gap
            summary["algorithms"][name] = entry

        if "etdgt" in traces and "ddgt" in traces:
            summary["comm_ratio"] = self.comm_ratio(traces["etdgt"], traces["ddgt"])
        self.summary_history.append(summary)
        return summary

    @staticmethod
    def compare_algorithms(
        traces: Dict[str, MetricsTrace]
    ) -> Dict[str, Dict[str, float]]:
        """Final value of every CSV metric, side by side per algorithm."""
        metrics = (
            "consensus_error",
            "tracking_error",
            "grad_norm",
            "primal_err",
            "primal_residual",
            "supply_gap",
            "comm_w",
            "comm_s",
        )
        return {
            metric: {
                name: float(getattr(trace.final, metric))
                for name, trace in traces.items()
            }
            for metric in metrics
        }
