"""Centralized reference solution of the dispatch problem.

The balance constraint couples the agents only through one multiplier per
resource, so the optimum is found by bisecting on that multiplier until
the aggregate best response meets total demand.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from .errors import Infeasible, NonConvergence
from .logging import BRACKET_EXPANDED
from .objective import BOUND_TOL, CostBank, CostModel, local_argmin, marginal_cost
from .scenario import Scenario

logger = logging.getLogger(__name__)

GAP_TOL = 1e-10
WIDTH_TOL = 1e-13
MAX_EXPANSIONS = 60
MAX_BISECTIONS = 500


@dataclass
class OracleSolution:
    """Optimal allocation, multiplier and dual value."""

    W_star: np.ndarray
    x_star: np.ndarray
    f_star: float
    kkt_residual: float
    iterations: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "W_star": self.W_star.tolist(),
            "x_star": self.x_star.tolist(),
            "f_star": self.f_star,
            "kkt_residual": self.kkt_residual,
            "iterations": self.iterations,
        }

    def to_json(self, path: Union[str, Path]) -> Path:
        target = Path(path)
        with open(target, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
        return target


def aggregate_response(models: List[CostModel], x: float) -> float:
    """Total allocation when every agent best-responds to multiplier x."""
    return float(sum(local_argmin(model, -x) for model in models))


def _bisect(models: List[CostModel], total: float) -> tuple:
    b = np.array([m.b for m in models])
    a = np.array([m.a for m in models])
    hi = np.array([m.box_hi for m in models])
    x_lo = -float(np.max(b + 2.0 * a * hi)) - 1.0
    x_hi = -float(np.min(b)) + 1.0

    # Response is non-increasing in x: the excess starts >= 0 at x_lo, ends <= 0 at x_hi
    for _ in range(MAX_EXPANSIONS):
        if aggregate_response(models, x_lo) >= total:
            break
        width = x_hi - x_lo
        x_lo -= width
        logger.debug("%s: lower end to %g", BRACKET_EXPANDED, x_lo)
    for _ in range(MAX_EXPANSIONS):
        if aggregate_response(models, x_hi) <= total:
            break
        width = x_hi - x_lo
        x_hi += width
        logger.debug("%s: upper end to %g", BRACKET_EXPANDED, x_hi)

    r_lo = aggregate_response(models, x_lo)
    r_hi = aggregate_response(models, x_hi)
    iterations = 0
    x_mid = 0.5 * (x_lo + x_hi)
    for iterations in range(1, MAX_BISECTIONS + 1):
        x_mid = 0.5 * (x_lo + x_hi)
        r_mid = aggregate_response(models, x_mid)
        if not (r_hi - 1e-9 <= r_mid <= r_lo + 1e-9):
            raise NonConvergence(
                f"aggregate response not monotone at x={x_mid}: "
                f"{r_hi} <= {r_mid} <= {r_lo} violated"
            )
        gap = r_mid - total
        if abs(gap) < GAP_TOL or (x_hi - x_lo) < WIDTH_TOL:
            break
        if gap > 0:
            x_lo, r_lo = x_mid, r_mid
        else:
            x_hi, r_hi = x_mid, r_mid
    return x_mid, iterations


def solve_centralized(scenario: Scenario) -> OracleSolution:
    """
    Solve the dispatch problem by bisection on the balance multiplier.

    Args:
        scenario: Scenario with m resources (solved componentwise)

    Returns:
        OracleSolution; x_star has length m, W_star is n x m

    Raises:
        Infeasible: Total demand lies outside the aggregate capacity
    """
    models = list(scenario.agents)
    total = scenario.total_demand
    lo = sum(m.box_lo for m in models)
    hi = sum(m.box_hi for m in models)
    if total > hi or total < lo:
        raise Infeasible(
            f"total demand {total} outside aggregate capacity [{lo}, {hi}]"
        )

    x, iterations = _bisect(models, total)
    m = scenario.m
    x_star = np.full(m, x)
    W_star = np.array([[float(local_argmin(model, -x))] * m for model in models])

    bank = CostBank(models)
    f_star = bank.dual_value(x_star)
    solution = OracleSolution(
        W_star=W_star,
        x_star=x_star,
        f_star=f_star,
        kkt_residual=0.0,
        iterations=iterations,
    )
    solution.kkt_residual = kkt_check(scenario, solution).stationarity
    logger.info(
        "oracle %s: x*=%.6f f*=%.6f after %d bisections",
        scenario.name,
        x,
        f_star,
        iterations,
    )
    return solution


@dataclass
class KKTReport:
    """Optimality residuals of a candidate solution."""

    stationarity: float
    balance: float
    at_lower: List[int] = field(default_factory=list)
    at_upper: List[int] = field(default_factory=list)

    @property
    def max_violation(self) -> float:
        return max(self.stationarity, self.balance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stationarity": self.stationarity,
            "balance": self.balance,
            "at_lower": self.at_lower,
            "at_upper": self.at_upper,
        }


def kkt_check(
    scenario: Scenario, solution: OracleSolution, tol: float = BOUND_TOL
) -> KKTReport:
    """
    Evaluate the KKT conditions at a candidate solution.

    Interior agents need F'(w) + x = 0; an agent at its lower bound needs
    F'(w) + x >= 0 and one at its upper bound F'(w) + x <= 0. Agents with a
    single-point box impose nothing.

    Returns:
        KKTReport with the largest stationarity violation and the balance residual
    """
    W = np.asarray(solution.W_star, dtype=float)
    x = np.asarray(solution.x_star, dtype=float).reshape(-1)
    stationarity = 0.0
    at_lower: List[int] = []
    at_upper: List[int] = []
    for i, model in enumerate(scenario.agents):
        if model.is_fixed:
            continue
        for j in range(W.shape[1]):
            w = W[i, j]
            r = float(marginal_cost(model, w)) + x[j]
            if w <= model.box_lo + tol:
                violation = max(0.0, -r)
                if i not in at_lower:
                    at_lower.append(i)
            elif w >= model.box_hi - tol:
                violation = max(0.0, r)
                if i not in at_upper:
                    at_upper.append(i)
            else:
                violation = abs(r)
            stationarity = max(stationarity, violation)

    balance = W.sum(axis=0) - scenario.total_demand
    return KKTReport(
        stationarity=stationarity,
        balance=float(np.max(np.abs(balance))),
        at_lower=at_lower,
        at_upper=at_upper,
    )
