"""Shared fixtures for the ET-DGT test suite."""

import numpy as np
import pytest

from etdgt_experiments.core.network import DiGraph, build_network
from etdgt_experiments.core.objective import CostModel
from etdgt_experiments.core.oracle import solve_centralized
from etdgt_experiments.core.scenario import Scenario, load_scenario
from etdgt_experiments.core.trigger import TriggerSchedule

# Generator allocations of the bundled cases, in scenario order
CASE1_W_STAR = [76.7398, 85.6530, 59.1311, 68.9863, 70.4898]
CASE2_W_STAR = [74.4713, 76.9021, 67.5925, 70.0000, 72.0341]


def small_scenario(
    demands=(30.0, 20.0, 10.0),
    alpha: float = 0.05,
    E: float = 0.2,
    s: float = 0.9,
    K: int = 200,
) -> Scenario:
    """Three agents on a directed ring with a chord; agents 0 and 1 generate."""
    graph = DiGraph.from_edges(3, [(0, 2), (1, 0), (2, 1), (0, 1)])
    agents = (
        CostModel(a=0.05, b=2.0, box_lo=0.0, box_hi=60.0, demand=demands[0]),
        CostModel(a=0.08, b=1.5, box_lo=0.0, box_hi=50.0, demand=demands[1]),
        CostModel(a=1.0, b=0.0, box_lo=0.0, box_hi=0.0, demand=demands[2]),
    )
    return Scenario(
        name="small",
        graph_R=graph,
        graph_C=graph,
        agents=agents,
        alpha=alpha,
        schedule=TriggerSchedule(E=E, s=s),
        K=K,
    )


@pytest.fixture(scope="session")
def case1():
    return load_scenario("case1")


@pytest.fixture(scope="session")
def case2():
    return load_scenario("case2")


@pytest.fixture(scope="session")
def case1_network(case1):
    return build_network(case1.graph_R, case1.graph_C)


@pytest.fixture(scope="session")
def case1_oracle(case1):
    return solve_centralized(case1)


@pytest.fixture(scope="session")
def case2_oracle(case2):
    return solve_centralized(case2)


@pytest.fixture
def small():
    return small_scenario()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
