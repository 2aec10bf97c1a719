"""Communication digraphs, stochastic mixing matrices and their spectra.

Edge ``(i, j)`` means agent ``i`` receives from agent ``j``. Every agent
keeps a self-loop in the induced weight matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np

from .errors import DegenerateSpectrum, InvalidGraph, NonConvergence

logger = logging.getLogger(__name__)

POWER_TOL = 1e-12
POWER_ACCEPT = 1e-10
POWER_MAX_ITER = 100_000
SIGMA_MARGIN = 1e-6


@dataclass(frozen=True)
class DiGraph:
    """Directed communication graph.

    Attributes:
        n: Number of agents
        edges: Sorted tuple of ``(i, j)`` pairs, "i receives from j"
    """

    n: int
    edges: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidGraph(f"graph needs at least one node, got n={self.n}")
        seen = set()
        for edge in self.edges:
            i, j = edge
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidGraph(
                    f"edge {edge} has an endpoint outside 0..{self.n - 1}"
                )
            if i == j:
                raise InvalidGraph(
                    f"edge {edge} is a self-loop; self-loops are implied"
                )
            if edge in seen:
                raise InvalidGraph(f"duplicate edge {edge}")
            seen.add(edge)
        object.__setattr__(
            self, "edges", tuple(sorted((int(i), int(j)) for i, j in self.edges))
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "DiGraph":
        """Build a graph from any iterable of 2-element pairs."""
        pairs = []
        for edge in edges:
            pair = tuple(edge)
            if len(pair) != 2:
                raise InvalidGraph(f"edge {list(pair)} is not a pair")
            pairs.append((int(pair[0]), int(pair[1])))
        return cls(n=int(n), edges=tuple(pairs))

    def in_neighbors(self, i: int) -> Tuple[int, ...]:
        return tuple(j for a, j in self.edges if a == i)

    def out_neighbors(self, j: int) -> Tuple[int, ...]:
        return tuple(i for i, b in self.edges if b == j)

    def out_degrees(self) -> np.ndarray:
        degrees = np.zeros(self.n, dtype=int)
        for _, j in self.edges:
            degrees[j] += 1
        return degrees

    def transpose(self) -> "DiGraph":
        return DiGraph(n=self.n, edges=tuple((j, i) for i, j in self.edges))

    def to_networkx(self) -> nx.DiGraph:
        """Information-flow view: one arc ``j -> i`` per edge ``(i, j)``."""
        flow = nx.DiGraph()
        flow.add_nodes_from(range(self.n))
        flow.add_edges_from((j, i) for i, j in self.edges)
        return flow

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


class SpanningTreeReport(NamedTuple):
    """Result of the spanning-tree check."""

    ok: bool
    roots: FrozenSet[int]


@dataclass(frozen=True, eq=False)
class NetworkModel:
    """Pull/push graph pair with mixing matrices and spectral constants."""

    graph_R: DiGraph
    graph_C: DiGraph
    R: np.ndarray
    C: np.ndarray
    pi_R: np.ndarray
    pi_C: np.ndarray
    sigma_R: float
    sigma_C: float
    delta_RC: float
    delta_CR: float
    delta_2R: float
    delta_2C: float
    R_shift: np.ndarray = field(repr=False, default=None)  # type: ignore[assignment]
    C_shift: np.ndarray = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        identity = np.eye(self.n)
        if self.R_shift is None:
            object.__setattr__(self, "R_shift", self.R - identity)
        if self.C_shift is None:
            object.__setattr__(self, "C_shift", self.C - identity)

    @property
    def n(self) -> int:
        return self.graph_R.n

    @property
    def pi_dot(self) -> float:
        """Inner product of the two Perron vectors."""
        return float(self.pi_C @ self.pi_R)

    def fanout_R(self) -> np.ndarray:
        """Out-degree of every agent in the pull graph."""
        return self.graph_R.out_degrees()

    def fanout_C(self) -> np.ndarray:
        """Out-degree of every agent in the push graph."""
        return self.graph_C.out_degrees()

    def summary(self) -> dict:
        return {
            "n": self.n,
            "edges_R": len(self.graph_R.edges),
            "edges_C": len(self.graph_C.edges),
            "sigma_R": self.sigma_R,
            "sigma_C": self.sigma_C,
            "delta_RC": self.delta_RC,
            "delta_CR": self.delta_CR,
            "delta_2R": self.delta_2R,
            "delta_2C": self.delta_2C,
            "pi_dot": self.pi_dot,
        }


def build_row_stochastic(graph: DiGraph) -> np.ndarray:
    """
    Uniform pull weights: row i splits evenly over itself and its in-neighbors.

    Args:
        graph: Pull graph

    Returns:
        Row-stochastic n x n matrix with positive diagonal
    """
    A = np.eye(graph.n)
    for i, j in graph.edges:
        A[i, j] = 1.0
    return A / A.sum(axis=1, keepdims=True)


def build_col_stochastic(graph: DiGraph) -> np.ndarray:
    """
    Uniform push weights: column j splits evenly over itself and its out-neighbors.

    Args:
        graph: Push graph

    Returns:
        Column-stochastic n x n matrix with positive diagonal
    """
    A = np.eye(graph.n)
    for i, j in graph.edges:
        A[i, j] = 1.0
    return A / A.sum(axis=0, keepdims=True)


def perron_vector(
    matrix: np.ndarray,
    side: str = "left",
    tol: float = POWER_TOL,
    max_iter: int = POWER_MAX_ITER,
) -> np.ndarray:
    """
    Unit-sum non-negative eigenvector for eigenvalue 1 by power iteration.

    Args:
        matrix: Row-stochastic (side="left") or column-stochastic (side="right")
        side: "left" iterates on the transpose, "right" on the matrix itself
        tol: Residual at which iteration stops
        max_iter: Iteration cap

    Returns:
        Perron vector normalized to sum 1

    Raises:
        NonConvergence: Residual still above 1e-10 after max_iter steps
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    M = np.asarray(matrix, dtype=float)
    A = M.T if side == "left" else M
    n = A.shape[0]

    v = np.full(n, 1.0 / n)
    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        Av = A @ v
        residual = float(np.max(np.abs(Av - v)))
        if residual < tol:
            break
        v = Av / Av.sum()

    if residual > POWER_ACCEPT:
        raise NonConvergence(
            f"power iteration stalled at residual {residual:.3e} after "
            f"{iterations} iterations; spanning-tree assumption likely violated"
        )
    logger.debug(
        "perron_vector(%s): %d iterations, residual %.3e", side, iterations, residual
    )
    return v / v.sum()


def _deflated(matrix: np.ndarray, perron: np.ndarray, side: str) -> np.ndarray:
    ones = np.ones(matrix.shape[0])
    if side == "left":
        return matrix - np.outer(ones, perron)
    return matrix - np.outer(perron, ones)


def contraction_factor(
    matrix: np.ndarray, perron: np.ndarray, side: str = "left"
) -> float:
    """
    Contraction factor of the mixing step on the disagreement subspace.

    Spectral radius of R - 1 pi^T (left) or C - pi 1^T (right), plus a margin
    of 1e-6, kept strictly below 1.

    Raises:
        DegenerateSpectrum: Deflated radius is 1 or more
    """
    radius = float(np.max(np.abs(np.linalg.eigvals(_deflated(matrix, perron, side)))))
    if radius >= 1.0:
        raise DegenerateSpectrum(
            f"deflated {side} mixing matrix has spectral radius {radius:.6f} >= 1"
        )
    return min(radius + SIGMA_MARGIN, 0.5 * (1.0 + radius))


def eigenbasis_condition(
    matrix: np.ndarray, perron: np.ndarray, side: str = "left"
) -> float:
    """Condition number of the eigenvector basis of the deflated matrix, at least 1."""
    _, vectors = np.linalg.eig(_deflated(matrix, perron, side))
    cond = float(np.linalg.cond(vectors))
    if not np.isfinite(cond):
        raise DegenerateSpectrum(f"deflated {side} mixing matrix is defective")
    return max(1.0, cond)


def check_spanning_trees(graph_R: DiGraph, graph_C: DiGraph) -> SpanningTreeReport:
    """
    Check that the pull graph and the reversed push graph share a spanning-tree root.

    A root of the pull graph reaches every agent along information flow; a
    root of the reversed push graph is reached by every agent.

    Args:
        graph_R: Pull graph
        graph_C: Push graph

    Returns:
        SpanningTreeReport with the set of common roots
    """
    if graph_R.n != graph_C.n:
        raise InvalidGraph(f"graphs disagree on node count: {graph_R.n} vs {graph_C.n}")
    n = graph_R.n
    flow_R = graph_R.to_networkx()
    flow_C = graph_C.to_networkx()

    roots_R = {r for r in flow_R.nodes if len(nx.descendants(flow_R, r)) == n - 1}
    roots_C = {r for r in flow_C.nodes if len(nx.ancestors(flow_C, r)) == n - 1}
    common = frozenset(roots_R & roots_C)
    return SpanningTreeReport(ok=bool(common), roots=common)


def build_network(graph_R: DiGraph, graph_C: Optional[DiGraph] = None) -> NetworkModel:
    """
    Assemble the mixing matrices and spectral constants for a graph pair.

    Args:
        graph_R: Pull graph
        graph_C: Push graph (defaults to graph_R)

    Returns:
        Fully populated NetworkModel
    """
    if graph_C is None:
        graph_C = graph_R
    R = build_row_stochastic(graph_R)
    C = build_col_stochastic(graph_C)
    pi_R = perron_vector(R, side="left")
    pi_C = perron_vector(C, side="right")

    sigma_R = contraction_factor(R, pi_R, side="left")
    sigma_C = contraction_factor(C, pi_C, side="right")

    # 2-norm equivalence per matrix; the cross constants compose both bases
    delta_2R = eigenbasis_condition(R, pi_R, side="left")
    delta_2C = eigenbasis_condition(C, pi_C, side="right")
    delta_cross = max(1.0, delta_2R * delta_2C)

    logger.debug("network n=%d sigma_R=%.6f sigma_C=%.6f", graph_R.n, sigma_R, sigma_C)
    return NetworkModel(
        graph_R=graph_R,
        graph_C=graph_C,
        R=R,
        C=C,
        pi_R=pi_R,
        pi_C=pi_C,
        sigma_R=sigma_R,
        sigma_C=sigma_C,
        delta_RC=delta_cross,
        delta_CR=delta_cross,
        delta_2R=delta_2R,
        delta_2C=delta_2C,
    )
