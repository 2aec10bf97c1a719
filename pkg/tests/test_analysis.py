"""Tests for trace statistics."""

import math

import numpy as np
import pytest

from etdgt_experiments.analysis.trace_analysis import TraceAnalyzer
from etdgt_experiments.core.engine import MetricsTrace, RoundMetrics


def synthetic_trace(values, algorithm="etdgt", comm=None):
    rows = []
    for k, value in enumerate(values):
        events = k + 1 if comm is None else comm[k]
        rows.append(RoundMetrics(
            k=k, consensus_error=value, tracking_error=value, grad_norm=value,
            primal_err=value, primal_residual=value, supply_gap=0.0,
            comm_w=events, comm_s=events, link_w=2 * events, link_s=2 * events,
        ))
    return MetricsTrace(algorithm=algorithm, rows=rows)


def test_linear_rate_fit_recovers_rate():
    values = 0.5 ** np.arange(40)
    fit = TraceAnalyzer().linear_rate_fit(synthetic_trace(values), lo=1e-9, hi=1.0)
    assert fit["rate"] == pytest.approx(0.5)
    assert fit["r2"] == pytest.approx(1.0)
    assert fit["count"] == 30


def test_linear_rate_fit_too_few_points():
    fit = TraceAnalyzer().linear_rate_fit(synthetic_trace([1.0, 2.0, 3.0]))
    assert fit["count"] == 0
    assert math.isnan(fit["slope"]) and math.isnan(fit["rate"])


def test_running_grad_average():
    trace = synthetic_trace([3.0, 1.0, 1.0, 0.0])
    averages = TraceAnalyzer.running_grad_average(trace)
    np.testing.assert_allclose(averages, [9.0, 5.0, 11.0 / 3.0])
    assert TraceAnalyzer.is_non_increasing(averages)
    assert not TraceAnalyzer.is_non_increasing([1.0, 2.0])


def test_comm_ratio_and_summary():
    et = synthetic_trace([1.0, 0.1], comm=[4, 5])
    dd = synthetic_trace([1.0, 0.1], algorithm="ddgt", comm=[4, 8])
    ratio = TraceAnalyzer.comm_ratio(et, dd)
    assert ratio["events"] == pytest.approx(10 / 16)
    assert ratio["links"] == pytest.approx(10 / 16)

    analyzer = TraceAnalyzer()
    summary = analyzer.summarize({"etdgt": et, "ddgt": dd})
    assert summary["comm_ratio"]["events_et"] == 10
    assert summary["algorithms"]["ddgt"]["comm_w"] == 8
    assert len(analyzer.summary_history) == 1
    side_by_side = TraceAnalyzer.compare_algorithms({"etdgt": et, "ddgt": dd})
    assert side_by_side["comm_s"] == {"etdgt": 5.0, "ddgt": 8.0}


def test_warmup_sum_and_reference_rate():
    trace = synthetic_trace([1.0, 2.0, 3.0])
    assert TraceAnalyzer.warmup_gradient_sum(trace, 1.7) == pytest.approx(5.0)
    assert TraceAnalyzer.warmup_gradient_sum(trace, 10) == pytest.approx(14.0)
    np.testing.assert_allclose(TraceAnalyzer.reference_rate(0.5, 2), [1.0, 0.5, 0.25])
