"""Per-agent generation costs, the local argmin subproblem and dual gradients.

Costs are F(w) = a w^2 + b w, optionally plus d exp((w + e) / f), restricted
to a box [lo, hi]. The dual of the allocation problem only ever needs the
minimizer of F(w) - price * w over the box, which :func:`local_argmin`
provides in closed form (quadratic) or with a bracketed root finder
(quadratic + exponential).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, NamedTuple, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidCostModel, RootFindFailure

ROOT_XTOL = 1e-12
BOUND_TOL = 1e-9

ArrayLike = Union[float, np.ndarray]


class CostKind(str, Enum):
    QUADRATIC = "quadratic"
    QUADRATIC_EXP = "quadratic_exp"


@dataclass(frozen=True)
class CostModel:
    """Cost, capacity box and local demand of one agent.

    Attributes:
        kind: Quadratic or quadratic plus exponential
        a: Curvature ($/MW^2h), strictly positive
        b: Linear cost ($/MWh)
        exp_d, exp_e, exp_f: Exponential term d * exp((w + e) / f)
        box_lo, box_hi: Capacity bounds (MW)
        demand: Local demand (MW)
    """

    kind: CostKind = CostKind.QUADRATIC
    a: float = 1.0
    b: float = 0.0
    exp_d: float = 0.0
    exp_e: float = 0.0
    exp_f: float = 1.0
    box_lo: float = 0.0
    box_hi: float = 0.0
    demand: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", CostKind(self.kind))
        values = (self.a, self.b, self.exp_d, self.exp_e, self.exp_f,
                  self.box_lo, self.box_hi, self.demand)
        if not all(math.isfinite(v) for v in values):
            raise InvalidCostModel(f"non-finite coefficient in {self}")
        if self.a <= 0:
            raise InvalidCostModel(f"curvature a must be positive, got {self.a}")
        if self.box_lo > self.box_hi:
            raise InvalidCostModel(f"empty box [{self.box_lo}, {self.box_hi}]")
        if self.kind is CostKind.QUADRATIC_EXP:
            if self.exp_f <= 0:
                raise InvalidCostModel(
                    f"exponential scale f must be positive, got {self.exp_f}"
                )
            if self.exp_d < 0:
                raise InvalidCostModel(
                    f"exponential weight d must be non-negative, got {self.exp_d}"
                )

    @property
    def is_fixed(self) -> bool:
        """True for load buses and other agents with a single-point box."""
        return self.box_lo == self.box_hi

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "a": self.a, "b": self.b}
        if self.kind is CostKind.QUADRATIC_EXP:
            data.update({"d": self.exp_d, "e": self.exp_e, "f": self.exp_f})
        data.update({"lo": self.box_lo, "hi": self.box_hi, "demand": self.demand})
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CostModel":
        """Inverse of :meth:`to_dict`; raises KeyError on a missing field."""
        kind = CostKind(data.get("kind", CostKind.QUADRATIC.value))
        extra = {}
        if kind is CostKind.QUADRATIC_EXP:
            extra = {"exp_d": float(data["d"]), "exp_e": float(data["e"]),
                     "exp_f": float(data["f"])}
        return cls(
            kind=kind,
            a=float(data["a"]),
            b=float(data["b"]),
            box_lo=float(data["lo"]),
            box_hi=float(data["hi"]),
            demand=float(data["demand"]),
            **extra,
        )


class SmoothnessParams(NamedTuple):
    """Dual Lipschitz constant L and primal smoothness constant mu."""

    L: float
    mu: float


def _as_output(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return value if np.ndim(like) else float(value)


def eval_cost(model: CostModel, w: ArrayLike) -> ArrayLike:
    """Cost F(w); evaluation outside the box is permitted."""
    x = np.asarray(w, dtype=float)
    value = model.a * x * x + model.b * x
    if model.kind is CostKind.QUADRATIC_EXP:
        value = value + model.exp_d * np.exp((x + model.exp_e) / model.exp_f)
    return _as_output(value, w)


def marginal_cost(model: CostModel, w: ArrayLike) -> ArrayLike:
    """Derivative F'(w)."""
    x = np.asarray(w, dtype=float)
    value = 2.0 * model.a * x + model.b
    if model.kind is CostKind.QUADRATIC_EXP:
        growth = np.exp((x + model.exp_e) / model.exp_f)
        value = value + (model.exp_d / model.exp_f) * growth
    return _as_output(value, w)


def curvature(model: CostModel, w: ArrayLike) -> ArrayLike:
    """Second derivative F''(w)."""
    x = np.asarray(w, dtype=float)
    value = np.full_like(x, 2.0 * model.a)
    if model.kind is CostKind.QUADRATIC_EXP:
        growth = np.exp((x + model.exp_e) / model.exp_f)
        value = value + (model.exp_d / model.exp_f**2) * growth
    return _as_output(value, w)


def _solve_exp(model: CostModel, price: float) -> float:
    lo, hi = model.box_lo, model.box_hi
    if lo == hi:
        return lo

    def excess(w: float) -> float:
        return float(marginal_cost(model, w)) - price

    g_lo, g_hi = excess(lo), excess(hi)
    if not (math.isfinite(g_lo) and math.isfinite(g_hi)):
        raise RootFindFailure(
            f"marginal cost not finite on [{lo}, {hi}] at price {price}"
        )
    # F' is strictly increasing, so the sign at the box ends decides the clip
    if g_lo >= 0.0:
        return lo
    if g_hi <= 0.0:
        return hi
    try:
        root = brentq(excess, lo, hi, xtol=ROOT_XTOL, maxiter=500)
    except (ValueError, RuntimeError) as e:
        raise RootFindFailure(f"no bracketed root for price {price}: {e}") from e
    return min(max(float(root), lo), hi)


def local_argmin(model: CostModel, w_tilde: ArrayLike) -> ArrayLike:
    """
    Minimizer of F(w) - w_tilde * w over the box, componentwise.

    Args:
        model: Agent cost model
        w_tilde: Price (scalar or vector of length m)

    Returns:
        Allocation with the same shape as w_tilde

    Raises:
        RootFindFailure: Exponential model whose marginal cost overflows
    """
    price = np.asarray(w_tilde, dtype=float)
    if model.kind is CostKind.QUADRATIC:
        w = np.clip((price - model.b) / (2.0 * model.a), model.box_lo, model.box_hi)
    else:
        flat = [_solve_exp(model, float(p)) for p in price.ravel()]
        w = np.asarray(flat, dtype=float).reshape(price.shape)
    return _as_output(w, w_tilde)


def dual_gradient(model: CostModel, x: ArrayLike) -> ArrayLike:
    """Local dual gradient: demand minus the allocation at price -x."""
    w = np.asarray(local_argmin(model, -np.asarray(x, dtype=float)))
    return _as_output(model.demand - w, x)


def smoothness(models: Sequence[CostModel]) -> SmoothnessParams:
    """
    Dual Lipschitz and primal smoothness constants over the dispatchable agents.

    Agents with a single-point box have a constant dual gradient and do not
    enter either constant.
    """
    free = [m for m in models if not m.is_fixed] or list(models)
    if not free:
        raise InvalidCostModel("no agents to derive smoothness constants from")
    L = max(1.0 / (2.0 * m.a) for m in free)
    mu = max(float(curvature(m, m.box_hi)) for m in free)
    return SmoothnessParams(L=L, mu=mu)


def _column(values: Sequence[float]) -> np.ndarray:
    return np.asarray(values, dtype=float).reshape(-1, 1)


class CostBank:
    """Vectorized view of all agents' costs for the simulation loop.

    Quadratic agents are handled with array arithmetic; exponential agents
    fall back to :func:`local_argmin` row by row.
    """

    def __init__(self, models: Sequence[CostModel]):
        self.models = tuple(models)
        self.a = _column([m.a for m in self.models])
        self.b = _column([m.b for m in self.models])
        self.lo = _column([m.box_lo for m in self.models])
        self.hi = _column([m.box_hi for m in self.models])
        self.demand = _column([m.demand for m in self.models])
        self.fixed = np.array([m.is_fixed for m in self.models], dtype=bool)
        self._exp_rows = [
            i for i, m in enumerate(self.models) if m.kind is CostKind.QUADRATIC_EXP
        ]

    @property
    def n(self) -> int:
        return len(self.models)

    def demands(self, m: int = 1) -> np.ndarray:
        return np.repeat(self.demand, m, axis=1)

    def argmin(self, W_tilde: np.ndarray) -> np.ndarray:
        """Row-wise local_argmin of an n x m price matrix."""
        W = np.clip((W_tilde - self.b) / (2.0 * self.a), self.lo, self.hi)
        for i in self._exp_rows:
            W[i] = local_argmin(self.models[i], W_tilde[i])
        return W

    def marginal(self, W: np.ndarray) -> np.ndarray:
        grads = 2.0 * self.a * W + self.b
        for i in self._exp_rows:
            grads[i] = marginal_cost(self.models[i], W[i])
        return grads

    def cost(self, W: np.ndarray) -> float:
        return float(sum(np.sum(eval_cost(m, W[i])) for i, m in enumerate(self.models)))

    def dual_gradients(self, x: np.ndarray) -> np.ndarray:
        """Per-agent dual gradients at a common multiplier x of length m."""
        m = np.size(x)
        prices = np.broadcast_to(-np.asarray(x, dtype=float).reshape(1, m), (self.n, m))
        return self.demands(m) - self.argmin(np.array(prices))

    def dual_value(self, x: np.ndarray) -> float:
        """Dual objective sum_i [x.d_i - x.w_i(x) - F_i(w_i(x))]."""
        m = np.size(x)
        xv = np.asarray(x, dtype=float).reshape(1, m)
        W = self.argmin(np.array(np.broadcast_to(-xv, (self.n, m))))
        return float(np.sum(xv * (self.demands(m) - W))) - self.cost(W)

    def interior_mask(self, W: np.ndarray, tol: float = BOUND_TOL) -> np.ndarray:
        """Entries strictly inside a non-degenerate box."""
        inside = (W > self.lo + tol) & (W < self.hi - tol)
        return inside & ~self.fixed.reshape(-1, 1)
