"""Tests for threshold schedules and broadcast bookkeeping."""

import numpy as np
import pytest

from etdgt_experiments.core.errors import OutOfOrder
from etdgt_experiments.core.trigger import (
    TriggerSchedule,
    TriggerState,
    evaluate_triggers,
    record_broadcast,
    should_trigger,
    threshold_at,
)


def test_threshold_schedule():
    schedule = TriggerSchedule(E=0.35, s=0.91)
    assert threshold_at(schedule, 0) == 0.35
    assert threshold_at(schedule, 1) == pytest.approx(0.3185)
    assert threshold_at(schedule, 10) < threshold_at(schedule, 9)
    assert schedule.total == pytest.approx(0.35 / 0.09)
    assert threshold_at(TriggerSchedule(E=0.0, s=0.5), 3) == 0.0


def test_schedule_validation():
    with pytest.raises(ValueError):
        TriggerSchedule(E=-1.0, s=0.5)
    with pytest.raises(ValueError):
        TriggerSchedule(E=1.0, s=1.0)
    with pytest.raises(ValueError):
        threshold_at(TriggerSchedule(E=1.0, s=0.5), -1)


def test_should_trigger_at_threshold():
    assert should_trigger(np.array([1.0]), np.array([0.0]), 1.0)
    assert not should_trigger(np.array([0.5]), np.array([0.0]), 1.0)


def _state(n=3):
    return TriggerState.fresh(n, 1, fanout_w=[2, 1, 0], fanout_s=[1, 1, 1])


def test_record_broadcast_counts_and_order():
    state = _state()
    record_broadcast(state, 0, "w", np.array([2.0]), 0)
    record_broadcast(state, 0, "w", np.array([3.0]), 4)
    assert state.w_instants[0] == [0, 4]
    assert state.last_w_broadcast[0, 0] == 3.0
    assert state.counts() == {"events_w": 2, "events_s": 0, "links_w": 4, "links_s": 0}
    with pytest.raises(OutOfOrder):
        record_broadcast(state, 0, "w", np.array([1.0]), 4)
    with pytest.raises(ValueError):
        record_broadcast(state, 0, "x", np.array([1.0]), 5)


def test_evaluate_triggers_fires_only_past_threshold():
    state = _state()
    current = np.array([[0.1], [2.0], [0.0]])
    fired, gap = evaluate_triggers(state, "s", current, threshold=1.0, k=1)
    assert fired == 1
    assert state.s_instants == [[], [1], []]
    assert gap == pytest.approx(0.1)

    fired, gap = evaluate_triggers(state, "s", current, threshold=1.0, k=2, force=True)
    assert fired == 3
    assert gap == 0.0
