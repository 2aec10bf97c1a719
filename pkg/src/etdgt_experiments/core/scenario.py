"""Scenario definition, JSON persistence, validation and synthetic generation."""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import InvalidCostModel, InvalidScenario, ScenarioParseError
from .network import (
    DiGraph,
    build_col_stochastic,
    build_row_stochastic,
    check_spanning_trees,
)
from .objective import CostModel
from .trigger import TriggerSchedule

logger = logging.getLogger(__name__)

BUNDLED_PACKAGE = "etdgt_experiments.scenarios"
STOCHASTIC_TOL = 1e-12

# Case 3 recipe: 118 buses, 54 of them dispatchable
CASE3_N = 118
CASE3_GEN_FRACTION = 54 / 118
CASE3_SEED = 7


@dataclass(frozen=True)
class Scenario:
    """One experiment: graphs, agents, step size, trigger schedule, horizon."""

    name: str
    graph_R: DiGraph
    graph_C: DiGraph
    agents: Tuple[CostModel, ...]
    alpha: float
    schedule: TriggerSchedule
    K: int = 2000
    seed: Optional[int] = None
    m: int = 1

    @property
    def n(self) -> int:
        return self.graph_R.n

    @property
    def same_graph(self) -> bool:
        return self.graph_R == self.graph_C

    @property
    def demands(self) -> np.ndarray:
        return np.array([agent.demand for agent in self.agents], dtype=float)

    @property
    def total_demand(self) -> float:
        return float(self.demands.sum())

    @property
    def generator_indices(self) -> List[int]:
        """Agents with a non-degenerate capacity box."""
        return [i for i, agent in enumerate(self.agents) if not agent.is_fixed]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "n": self.n}
        if self.same_graph:
            data["edges"] = [list(e) for e in self.graph_R.edges]
        else:
            data["edges_R"] = [list(e) for e in self.graph_R.edges]
            data["edges_C"] = [list(e) for e in self.graph_C.edges]
        data["agents"] = [agent.to_dict() for agent in self.agents]
        data["alpha"] = self.alpha
        data["trigger"] = self.schedule.to_dict()
        data["K"] = self.K
        data["seed"] = self.seed
        if self.m != 1:
            data["m"] = self.m
        return data


def _require(data: Dict[str, Any], key: str, path: str = "") -> Any:
    if not isinstance(data, dict):
        raise ScenarioParseError("expected a JSON object", field=path or "<root>")
    if key not in data:
        raise ScenarioParseError("missing field", field=f"{path}{key}")
    return data[key]


def scenario_from_dict(data: Dict[str, Any]) -> Scenario:
    """
    Build a Scenario from its JSON object form.

    Raises:
        ScenarioParseError: Missing or mistyped field
        InvalidGraph, InvalidCostModel: Structurally invalid graph or cost
    """
    try:
        name = str(_require(data, "name"))
        n = int(_require(data, "n"))
    except ScenarioParseError:
        raise
    except (TypeError, ValueError) as e:
        raise ScenarioParseError(f"bad value: {e}", field="n") from e

    if "edges" in data:
        graph_R = DiGraph.from_edges(n, _edge_list(data, "edges"))
        graph_C = graph_R
    else:
        graph_R = DiGraph.from_edges(n, _edge_list(data, "edges_R"))
        graph_C = DiGraph.from_edges(n, _edge_list(data, "edges_C"))

    raw_agents = _require(data, "agents")
    if not isinstance(raw_agents, list):
        raise ScenarioParseError("expected a list", field="agents")
    agents = []
    for index, raw in enumerate(raw_agents):
        path = f"agents[{index}]."
        try:
            agents.append(CostModel.from_dict(raw))
        except InvalidCostModel:
            raise
        except KeyError as e:
            raise ScenarioParseError("missing field", field=f"{path}{e.args[0]}") from e
        except (TypeError, ValueError, AttributeError) as e:
            raise ScenarioParseError(
                f"bad agent entry: {e}", field=path.rstrip(".")
            ) from e

    trigger = _require(data, "trigger")
    try:
        schedule = TriggerSchedule(E=float(_require(trigger, "E", "trigger.")),
                                   s=float(_require(trigger, "s", "trigger.")))
        alpha = float(_require(data, "alpha"))
        K = int(_require(data, "K"))
        seed = data.get("seed")
        seed = None if seed is None else int(seed)
        m = int(data.get("m", 1))
    except ScenarioParseError:
        raise
    except (TypeError, ValueError) as e:
        raise ScenarioParseError(f"bad value: {e}") from e

    return Scenario(
        name=name,
        graph_R=graph_R,
        graph_C=graph_C,
        agents=tuple(agents),
        alpha=alpha,
        schedule=schedule,
        K=K,
        seed=seed,
        m=m,
    )


def _edge_list(data: Dict[str, Any], key: str) -> List[List[int]]:
    edges = _require(data, key)
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 for e in edges
    ):
        raise ScenarioParseError("expected a list of [i, j] pairs", field=key)
    return edges


def validate_scenario(scenario: Scenario) -> None:
    """
    Check the standing assumptions on a scenario.

    Raises:
        InvalidScenario: Names the violated assumption
    """
    if scenario.graph_R.n != scenario.graph_C.n:
        raise InvalidScenario(
            f"pull graph has {scenario.graph_R.n} nodes, "
            f"push graph {scenario.graph_C.n}",
            assumption="graph pair",
        )
    if len(scenario.agents) != scenario.n:
        raise InvalidScenario(
            f"{len(scenario.agents)} agents for {scenario.n} graph nodes",
            assumption="agent count",
        )
    if not (math.isfinite(scenario.alpha) and scenario.alpha > 0):
        raise InvalidScenario(
            f"step size must be positive, got {scenario.alpha}",
            assumption="step size",
        )
    if scenario.K < 0:
        raise InvalidScenario(
            f"horizon must be >= 0, got {scenario.K}", assumption="horizon"
        )
    if scenario.m < 1:
        raise InvalidScenario(
            f"resource dimension must be >= 1, got {scenario.m}",
            assumption="resource dimension",
        )

    # Strong convexity is enforced by CostModel; Slater here
    total = scenario.total_demand
    lo = sum(agent.box_lo for agent in scenario.agents)
    hi = sum(agent.box_hi for agent in scenario.agents)
    if not (lo <= total <= hi):
        raise InvalidScenario(
            f"total demand {total} outside aggregate capacity [{lo}, {hi}]",
            assumption="Slater",
        )

    report = check_spanning_trees(scenario.graph_R, scenario.graph_C)
    if not report.ok:
        raise InvalidScenario(
            "pull graph and reversed push graph share no spanning-tree root",
            assumption="spanning trees",
        )

    R = build_row_stochastic(scenario.graph_R)
    C = build_col_stochastic(scenario.graph_C)
    if np.max(np.abs(R.sum(axis=1) - 1.0)) >= STOCHASTIC_TOL or np.max(
        np.abs(C.sum(axis=0) - 1.0)
    ) >= STOCHASTIC_TOL:
        raise InvalidScenario("mixing matrices are not stochastic",
                              assumption="stochastic weights")


def _resolve(path: Union[str, Path]) -> Tuple[str, str]:
    """Return (label, text) for a filesystem path or a bundled scenario name."""
    candidate = Path(path)
    if candidate.is_file():
        return str(candidate), candidate.read_text()
    name = candidate.name if candidate.suffix == ".json" else f"{candidate.name}.json"
    bundled = resources.files(BUNDLED_PACKAGE).joinpath(name)
    if bundled.is_file():
        return f"bundled:{name}", bundled.read_text()
    raise FileNotFoundError(f"scenario not found: {path}")


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Load and validate a scenario file.

    Args:
        path: JSON file path, or the name of a bundled scenario ("case1")

    Returns:
        Validated Scenario

    Raises:
        ScenarioParseError: Malformed JSON or missing field
        InvalidScenario: Assumption check failed
    """
    label, text = _resolve(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{label}: {e.msg}", line=e.lineno) from e
    scenario = scenario_from_dict(data)
    validate_scenario(scenario)
    logger.info("loaded scenario %s from %s (n=%d)", scenario.name, label, scenario.n)
    return scenario


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> Path:
    """Write a scenario in the JSON schema read by :func:`load_scenario`."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w") as f:
        json.dump(scenario.to_dict(), f, indent=2)
        f.write("\n")
    return target


def scenario_digest(scenario: Scenario) -> str:
    """SHA-256 of the canonical JSON form."""
    canonical = json.dumps(scenario.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def gen_large_scenario(
    n: int,
    gen_fraction: float = CASE3_GEN_FRACTION,
    seed: int = CASE3_SEED,
    chords_per_node: int = 3,
    name: Optional[str] = None,
) -> Scenario:
    """
    Seeded random dispatch scenario on a strongly connected digraph.

    A directed Hamiltonian cycle over a random permutation guarantees strong
    connectivity; every node then receives from up to ``chords_per_node``
    extra random sources. Generators draw a in [0.01, 0.05], b in [1, 5] and
    capacity in [50, 150]; total demand is 60% of total capacity, spread over
    all buses by a Dirichlet draw.

    Args:
        n: Number of agents, at least 2
        gen_fraction: Share of agents that are generators
        seed: RNG seed
        chords_per_node: Extra in-edges per node
        name: Scenario name (default "gen<n>_s<seed>")

    Returns:
        Validated Scenario
    """
    if n < 2:
        raise ValueError(f"generated scenarios need n >= 2, got {n}")
    rng = np.random.default_rng(seed)

    order = rng.permutation(n)
    edges = {(int(order[(k + 1) % n]), int(order[k])) for k in range(n)}
    for i in range(n):
        others = np.delete(np.arange(n), i)
        count = min(chords_per_node, len(others))
        for j in rng.choice(others, size=count, replace=False):
            edges.add((i, int(j)))
    graph = DiGraph.from_edges(n, sorted(edges))

    n_gen = min(n, max(1, int(round(gen_fraction * n))))
    generators = set(int(i) for i in rng.choice(n, size=n_gen, replace=False))
    capacity = np.zeros(n)
    coeffs = []
    for i in range(n):
        if i in generators:
            a = round(float(rng.uniform(0.01, 0.05)), 4)
            b = round(float(rng.uniform(1.0, 5.0)), 3)
            capacity[i] = round(float(rng.uniform(50.0, 150.0)), 1)
        else:
            a, b = 1.0, 0.0
        coeffs.append((a, b))

    shares = rng.dirichlet(np.ones(n))
    demands = np.round(0.6 * capacity.sum() * shares, 3)

    agents = tuple(
        CostModel(
            a=a,
            b=b,
            box_lo=0.0,
            box_hi=float(capacity[i]),
            demand=float(demands[i]),
        )
        for i, (a, b) in enumerate(coeffs)
    )
    scenario = Scenario(
        name=name or f"gen{n}_s{seed}",
        graph_R=graph,
        graph_C=graph,
        agents=agents,
        alpha=0.015,
        schedule=TriggerSchedule(E=0.5, s=0.98),
        K=5000,
        seed=seed,
    )
    validate_scenario(scenario)
    return scenario


def case3_scenario() -> Scenario:
    """Large-scale case: the documented 118-agent generator recipe."""
    return gen_large_scenario(CASE3_N, CASE3_GEN_FRACTION, CASE3_SEED, name="case3")
