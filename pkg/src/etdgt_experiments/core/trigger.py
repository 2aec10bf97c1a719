"""Event-triggered broadcasting: threshold schedules and last-broadcast caches."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .errors import OutOfOrder

VARIABLES = ("w", "s")


@dataclass(frozen=True)
class TriggerSchedule:
    """Geometric threshold sequence e_k = E * s**k.

    Attributes:
        E: Initial magnitude (0 means broadcast every round)
        s: Decay ratio in [0, 1)
    """

    E: float
    s: float

    def __post_init__(self) -> None:
        if not (self.E >= 0):
            raise ValueError(f"trigger magnitude E must be >= 0, got {self.E}")
        if not (0.0 <= self.s < 1.0):
            raise ValueError(f"trigger decay s must lie in [0, 1), got {self.s}")

    @property
    def total(self) -> float:
        """Sum of the whole sequence, E / (1 - s)."""
        return self.E / (1.0 - self.s)

    def to_dict(self) -> Dict[str, float]:
        return {"E": self.E, "s": self.s}


def threshold_at(schedule: TriggerSchedule, k: int) -> float:
    """Threshold e_k for iteration k >= 0."""
    if k < 0:
        raise ValueError(f"iteration must be non-negative, got {k}")
    if schedule.E == 0.0 or (schedule.s == 0.0 and k > 0):
        return 0.0
    if math.isinf(schedule.E):
        return math.inf
    return schedule.E * schedule.s**k


def should_trigger(current: np.ndarray, cached: np.ndarray, threshold: float) -> bool:
    """True when the deviation from the last broadcast reaches the threshold."""
    diff = np.asarray(current, dtype=float) - np.asarray(cached, dtype=float)
    deviation = float(np.linalg.norm(diff))
    return deviation >= threshold


@dataclass
class TriggerState:
    """Per-agent broadcast caches and triggering history for both variables.

    Counters follow two conventions: ``event_count_*`` counts one event per
    agent broadcast, ``link_count_*`` counts one message per receiving
    out-neighbor.
    """

    last_w_broadcast: np.ndarray
    last_s_broadcast: np.ndarray
    w_instants: List[List[int]]
    s_instants: List[List[int]]
    fanout_w: np.ndarray
    fanout_s: np.ndarray
    event_count_w: int = 0
    event_count_s: int = 0
    link_count_w: int = 0
    link_count_s: int = 0

    @classmethod
    def fresh(
        cls, n: int, m: int, fanout_w: np.ndarray, fanout_s: np.ndarray
    ) -> "TriggerState":
        """Empty state; caches are filled by the mandatory first broadcasts."""
        return cls(
            last_w_broadcast=np.zeros((n, m)),
            last_s_broadcast=np.zeros((n, m)),
            w_instants=[[] for _ in range(n)],
            s_instants=[[] for _ in range(n)],
            fanout_w=np.asarray(fanout_w, dtype=int),
            fanout_s=np.asarray(fanout_s, dtype=int),
        )

    def cache(self, which: str) -> np.ndarray:
        return self.last_w_broadcast if which == "w" else self.last_s_broadcast

    def instants(self, which: str) -> List[List[int]]:
        return self.w_instants if which == "w" else self.s_instants

    def counts(self) -> Dict[str, int]:
        return {
            "events_w": self.event_count_w,
            "events_s": self.event_count_s,
            "links_w": self.link_count_w,
            "links_s": self.link_count_s,
        }


def record_broadcast(
    state: TriggerState, agent: int, which: str, value: np.ndarray, k: int
) -> TriggerState:
    """
    Refresh one agent's cache after a broadcast at iteration k.

    Args:
        state: Trigger state, updated in place
        agent: Broadcasting agent
        which: "w" for the price estimate, "s" for the tracking variable
        value: Broadcast value
        k: Iteration of the broadcast

    Returns:
        The same state object

    Raises:
        OutOfOrder: k is not after the agent's previous instant for this variable
    """
    if which not in VARIABLES:
        raise ValueError(f"which must be 'w' or 's', got {which!r}")
    history = state.instants(which)[agent]
    if history and k <= history[-1]:
        raise OutOfOrder(
            f"agent {agent} broadcast of {which} at k={k} after instant {history[-1]}"
        )
    state.cache(which)[agent] = value
    history.append(k)
    if which == "w":
        state.event_count_w += 1
        state.link_count_w += int(state.fanout_w[agent])
    else:
        state.event_count_s += 1
        state.link_count_s += int(state.fanout_s[agent])
    return state


def evaluate_triggers(
    state: TriggerState,
    which: str,
    current: np.ndarray,
    threshold: float,
    k: int,
    force: bool = False,
) -> Tuple[int, float]:
    """
    Run the triggering law for every agent on one variable.

    Args:
        state: Trigger state, updated in place
        which: "w" or "s"
        current: n x m true values at iteration k
        threshold: e_k
        k: Iteration
        force: Broadcast every agent regardless of deviation

    Returns:
        (number of broadcasts, largest remaining cache deviation)
    """
    cached = state.cache(which)
    fired = 0
    for agent in range(current.shape[0]):
        if force or should_trigger(current[agent], cached[agent], threshold):
            record_broadcast(state, agent, which, current[agent], k)
            fired += 1
    gap = 0.0
    if len(current):
        gap = float(np.max(np.linalg.norm(current - cached, axis=1)))
    return fired, gap
