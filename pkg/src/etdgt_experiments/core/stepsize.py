"""Explicit step-size bounds and the spectral certificate for linear convergence.

The bounds come from two linear error systems. The first (2 x 2) couples the
consensus and tracking errors and yields the contraction factor ``lam`` of
the sublinear analysis; the second (3 x 3, under a Polyak-Lojasiewicz
condition) adds the optimality gap and yields the linear rate.

Every bound here is advisory: the engine accepts any positive step size.
All arithmetic is float64; the weighted norms of the analysis are replaced
by 2-norms together with the eigenbasis condition numbers of the network.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, NamedTuple, Optional

import numpy as np

from .errors import CertificateFailure, LambdaNotContractive
from .logging import ALPHA_ABOVE_BOUND, SCHEDULE_INADMISSIBLE, SIGMA_PERTURBED
from .network import NetworkModel, build_network
from .objective import CostBank, smoothness
from .scenario import Scenario
from .trigger import TriggerSchedule

logger = logging.getLogger(__name__)

SIGMA_TIE_TOL = 1e-9
SIGMA_NUDGE = 1e-6
CERTIFICATE_SHRINK = 0.999


@dataclass(frozen=True)
class BoundInputs:
    """Problem, network and schedule constants entering the bounds.

    Attributes:
        n: Number of agents
        L: Dual Lipschitz constant, max 1/(2a) over dispatchable agents
        sigma_R, sigma_C: Contraction factors of the mixing matrices
        delta_RC, delta_CR: Cross norm-equivalence constants
        delta_2R, delta_2C: Norm-equivalence constants to the 2-norm
        pi_dot: Inner product of the two Perron vectors
        beta: Polyak-Lojasiewicz constant of the dual
        grad_f_X0_norm: Root sum of squared local dual gradients at the start
        lam: Contraction factor of the 2 x 2 error system at alpha_eval
        Psi_lower: |sigma_R - sigma_C|
        e0, S_e: First threshold and sum of all thresholds
        E, s: Trigger schedule magnitude and decay
        k0: Warm-up index of the sublinear analysis
        alpha_eval: Step size at which lam was evaluated
        mu: Primal smoothness constant
        z0_norm: Norm of the initial error vector of the linear analysis
        sigma_perturbed: sigma_C was nudged to break a tie with sigma_R
    """

    n: int
    L: float
    sigma_R: float
    sigma_C: float
    delta_RC: float
    delta_CR: float
    delta_2R: float
    delta_2C: float
    pi_dot: float
    beta: float
    grad_f_X0_norm: float
    lam: float
    Psi_lower: float
    e0: float
    S_e: float
    E: float
    s: float
    k0: float = 0.0
    alpha_eval: float = 0.0
    mu: float = 0.0
    z0_norm: float = 0.0
    sigma_perturbed: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for name in ("L", "pi_dot", "Psi_lower"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("sigma_R", "sigma_C"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ValueError(
                    f"{name} must lie in [0, 1), got {getattr(self, name)}"
                )
        if self.k0 < 0:
            raise ValueError(f"k0 must be >= 0, got {self.k0}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class Theorem1Result(NamedTuple):
    """Sublinear-regime step-size bound."""

    alpha_max: float
    candidate: float
    gamma: float
    bracket: float
    c: Dict[str, float]
    b: Dict[str, float]


class Certificate(NamedTuple):
    """Spectral check of the 3 x 3 error system at a step size."""

    alpha: float
    P: np.ndarray
    lam: float
    spectral_gap: float
    determinant: float
    diagonal_ok: bool
    determinant_ok: bool
    eigen_ok: bool
    h8: float
    nu: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "P": self.P.tolist(),
            "lambda": self.lam,
            "spectral_gap": self.spectral_gap,
            "det_I_minus_P": self.determinant,
            "diagonal_ok": self.diagonal_ok,
            "determinant_ok": self.determinant_ok,
            "eigen_ok": self.eigen_ok,
            "h8": self.h8,
            "nu": self.nu.tolist(),
        }


class Theorem2Result(NamedTuple):
    """Linear-regime step-size bound with its certificate."""

    alpha_max: float
    terms: Dict[str, float]
    d: Dict[str, float]
    h: Dict[str, float]
    certificate: Certificate


def _lemma5(
    n: int,
    L: float,
    sigma_R: float,
    sigma_C: float,
    delta_RC: float,
    delta_CR: float,
) -> float:
    root_n = math.sqrt(n)
    first = (1.0 - sigma_R) * (1.0 - sigma_C) / (
        (root_n * L + root_n + 3.0) * L * delta_RC * delta_CR
    )
    return min(first, 1.0 / delta_RC)


def lemma5_bound(inputs: BoundInputs) -> float:
    """Largest step size keeping the 2 x 2 error system contractive."""
    return _lemma5(inputs.n, inputs.L, inputs.sigma_R, inputs.sigma_C,
                   inputs.delta_RC, inputs.delta_CR)


def _contraction(n: int, L: float, sigma_R: float, sigma_C: float,
                 delta_RC: float, delta_CR: float, alpha: float) -> np.ndarray:
    root_n = math.sqrt(n)
    return np.array([
        [sigma_R + alpha * root_n * L, alpha * delta_RC],
        [(2.0 + alpha * root_n * L) * L * delta_CR, sigma_C + alpha * L],
    ])


def contraction_matrix(inputs: BoundInputs, alpha: float) -> np.ndarray:
    """2 x 2 matrix propagating consensus and tracking errors."""
    return _contraction(inputs.n, inputs.L, inputs.sigma_R, inputs.sigma_C,
                        inputs.delta_RC, inputs.delta_CR, alpha)


def input_gain_matrix(inputs: BoundInputs) -> np.ndarray:
    """2 x 2 gain of the gradient and trigger-error inputs of the same system."""
    return np.array([
        [1.0, 1.0 + inputs.sigma_R],
        [inputs.L, 2.0 * inputs.L + 1.0 + inputs.sigma_C],
    ])


def spectral_radius(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(matrix, dtype=float)))))


def c_constants(inputs: BoundInputs) -> Dict[str, float]:
    """Transient constants of the 2 x 2 system."""
    L, psi = inputs.L, inputs.Psi_lower
    root_n = math.sqrt(inputs.n)
    g0 = inputs.grad_f_X0_norm
    cross = 2.0 * L * inputs.delta_CR + L
    return {
        "c0": g0 / psi,
        "c1": 1.0 + L / psi,
        "c2": (1.0 + inputs.sigma_R + (2.0 * L + 1.0 + inputs.sigma_C) / psi) * root_n,
        "c3": g0,
        "c4": L + cross / psi,
        "c5": (
            1.0 + inputs.sigma_C + 2.0 * L + (1.0 - inputs.sigma_R) * cross / psi
        )
        * root_n,
    }


def b_constants(inputs: BoundInputs) -> Dict[str, float]:
    """Network and smoothness constants of the descent inequality."""
    L, p = inputs.L, inputs.pi_dot
    return {
        "b1": L * math.sqrt(inputs.n) * p * inputs.delta_2R,
        "b2": inputs.delta_2C,
        "b3": 3.0 * L * inputs.delta_2C**2,
        "b4": 3.0 * L**3 * inputs.n * p**2 * inputs.delta_2R**2,
    }


def theorem1_bound(inputs: BoundInputs) -> Theorem1Result:
    """
    Step-size bound for the sublinear rate of the dual gradient norm.

    Args:
        inputs: Bound inputs with lam < 1

    Returns:
        Theorem1Result; gamma is evaluated at 0.999 times the returned bound
        (capped by the 2 x 2 bound) and is positive

    Raises:
        LambdaNotContractive: lam >= 1
    """
    lam = inputs.lam
    if not lam < 1.0:
        raise LambdaNotContractive(
            f"error-system contraction factor {lam} is not below 1"
        )
    c = c_constants(inputs)
    b = b_constants(inputs)
    p = inputs.pi_dot
    one_minus = 1.0 - lam

    bracket = (
        3.0 * inputs.L * p**2 / 2.0
        + (c["c1"] * b["b1"] + c["c4"] * b["b2"]) / one_minus
        + (c["c0"] * b["b1"] + c["c3"] * b["b2"]) / one_minus
        + (c["c1"] ** 2 * b["b3"] + c["c4"] ** 2 * b["b4"]) / one_minus**2
        + (c["c2"] * b["b1"] + c["c5"] * b["b2"]) / 2.0
    )
    alpha_max = p / bracket
    candidate = CERTIFICATE_SHRINK * min(alpha_max, lemma5_bound(inputs))
    gamma = candidate * p - candidate**2 * bracket
    return Theorem1Result(alpha_max=alpha_max, candidate=candidate, gamma=gamma,
                          bracket=bracket, c=c, b=b)


def d_constants(inputs: BoundInputs) -> Dict[str, float]:
    """Coefficients of the 3 x 3 error system."""
    n, L, p = inputs.n, inputs.L, inputs.pi_dot
    sR2, sC2 = inputs.sigma_R**2, inputs.sigma_C**2
    c_ratio = (1.0 + sC2) / (1.0 - sC2)
    dCR2 = inputs.delta_CR**2
    d2R2, d2C2 = inputs.delta_2R**2, inputs.delta_2C**2
    return {
        "d1": 4.0 * n * L**2,
        "d2": 2.0 * (3.0 - sR2) / (1.0 - sR2) * inputs.delta_RC**2,
        "d3": 8.0 * n * L,
        "d4": 32.0 * c_ratio * L**2 * dCR2,
        "d5": 16.0 * c_ratio * n * L**4 * dCR2,
        "d6": 8.0 * c_ratio * L**2,
        "d7": 32.0 * c_ratio * n * L**3,
        "d8": 0.5 * L**2 * n * p**2 * d2R2,
        "d9": 1.5 * L**3 * n * p**2 * d2R2,
        "d10": 0.5 * d2C2,
        "d11": 1.5 * L * d2C2,
        "d12": 2.0 * inputs.beta * p,
        "d13": 2.0 * L + 3.0 * p**2 * L**2,
    }


def h_constants(
    inputs: BoundInputs, d: Optional[Dict[str, float]] = None
) -> Dict[str, float]:
    """Coefficients of the cubic sufficient condition and the drift bound h7."""
    d = d or d_constants(inputs)
    sR2, sC2 = inputs.sigma_R**2, inputs.sigma_C**2
    gap_R = (1.0 - sR2) ** 2 / (1.0 + sR2)
    lead = (1.0 - sR2) ** 2 * (1.0 - sC2) / (16.0 * (1.0 + sR2))
    half_C = (1.0 - sC2) / 2.0
    return {
        "h1": lead * d["d12"],
        "h2": lead * d["d13"]
        + d["d3"] * d["d4"] * d["d10"]
        + half_C * d["d3"] * d["d8"]
        + gap_R * d["d7"] * d["d10"],
        "h3": d["d2"] * d["d4"] * d["d12"],
        "h4": d["d2"] * d["d7"] * d["d8"] + d["d3"] * d["d5"] * d["d10"]
        + d["d3"] * d["d4"] * d["d11"] + half_C * d["d3"] * d["d9"]
        + gap_R * d["d7"] * d["d11"] + d["d2"] * d["d5"] * d["d12"],
        "h5": d["d2"] * d["d5"] * d["d13"],
        "h6": d["d2"] * d["d7"] * d["d9"] + d["d3"] * d["d5"] * d["d11"],
        "h7": float(np.sum(pl_drift(inputs))),
    }


def pl_matrix(
    inputs: BoundInputs, alpha: float, d: Optional[Dict[str, float]] = None
) -> np.ndarray:
    """3 x 3 propagation of squared consensus and tracking errors and the gap."""
    d = d or d_constants(inputs)
    sR2, sC2 = inputs.sigma_R**2, inputs.sigma_C**2
    a2 = alpha * alpha
    return np.array([
        [(3.0 * sR2 - sR2**2) / (1.0 + sR2) + d["d1"] * a2, d["d2"] * a2, d["d3"] * a2],
        [d["d4"] + d["d5"] * a2, (1.0 + sC2) / 2.0 + d["d6"] * a2, d["d7"] * a2],
        [
            d["d8"] + d["d9"] * a2,
            d["d10"] + d["d11"] * a2,
            1.0 - d["d12"] * alpha + d["d13"] * a2,
        ],
    ])


def pl_drift(inputs: BoundInputs) -> np.ndarray:
    """Gain of the squared trigger error in the 3 x 3 system."""
    sR, sC = inputs.sigma_R, inputs.sigma_C
    sR2, sC2 = sR * sR, sC * sC
    n = inputs.n
    return np.array([
        (3.0 + sR2) / (1.0 + sR2) * (1.0 + sR) ** 2 * n,
        2.0 * (1.0 + sC2) / (1.0 - sC2)
        * ((1.0 + sC) ** 2 + 4.0 * (1.0 + sR) ** 2 * (inputs.delta_CR * inputs.L) ** 2)
        * n,
        0.0,
    ])


def pl_gaps(
    inputs: BoundInputs, alpha: float, d: Optional[Dict[str, float]] = None
) -> np.ndarray:
    """Diagonal of I - P, formed without subtracting from one."""
    d = d or d_constants(inputs)
    sR2, sC2 = inputs.sigma_R**2, inputs.sigma_C**2
    a2 = alpha * alpha
    return np.array([
        (1.0 - sR2) ** 2 / (1.0 + sR2) - d["d1"] * a2,
        (1.0 - sC2) / 2.0 - d["d6"] * a2,
        d["d12"] * alpha - d["d13"] * a2,
    ])


def determinant_test(
    P: np.ndarray, lam_star: float = 1.0, gaps: Optional[np.ndarray] = None
) -> tuple:
    """
    Test rho(P) < lam_star for a non-negative irreducible 3 x 3 matrix.

    The condition is det(lam_star I - P) > 0 given every diagonal entry and
    the leading 2 x 2 minor of lam_star I - P are positive. The determinant
    is expanded term by term; every subtracted term is a product of
    non-negative entries.

    Args:
        P: Non-negative 3 x 3 matrix
        lam_star: Radius to test against
        gaps: Precomputed diagonal of lam_star I - P, when P sits close to lam_star

    Returns:
        (passed, determinant, diagonal_ok)
    """
    M = np.asarray(P, dtype=float)
    if gaps is None:
        gaps = lam_star - np.diag(M)
    g1, g2, g3 = (float(g) for g in gaps)
    diagonal_ok = bool(g1 > 0 and g2 > 0 and g3 > 0)
    minor_ok = g1 * g2 - M[0, 1] * M[1, 0] > 0
    det = (
        g1 * g2 * g3
        - M[0, 1] * M[1, 2] * M[2, 0]
        - M[0, 2] * M[1, 0] * M[2, 1]
        - M[0, 2] * g2 * M[2, 0]
        - g1 * M[1, 2] * M[2, 1]
        - M[0, 1] * M[1, 0] * g3
    )
    return bool(diagonal_ok and minor_ok and det > 0), float(det), diagonal_ok


def _perron_pair(G: np.ndarray) -> tuple:
    # Smallest real eigenvalue of I - P pairs with the Perron vector of P
    values, vectors = np.linalg.eig(G)
    index = int(np.argmin(values.real))
    nu = np.abs(vectors[:, index].real)
    return float(values[index].real), nu


def certificate_at(
    inputs: BoundInputs, alpha: float, d: Optional[Dict[str, float]] = None
) -> Certificate:
    """Evaluate the 3 x 3 system at alpha with both spectral checks."""
    d = d or d_constants(inputs)
    P = pl_matrix(inputs, alpha, d)
    gaps = pl_gaps(inputs, alpha, d)
    passed, det, diagonal_ok = determinant_test(P, gaps=gaps)
    G = -P
    np.fill_diagonal(G, gaps)
    gap, nu = _perron_pair(G)
    h8 = math.sqrt(3.0) * float(nu.max() / nu.min()) if nu.min() > 0 else math.inf
    return Certificate(
        alpha=alpha,
        P=P,
        lam=1.0 - gap,
        spectral_gap=gap,
        determinant=det,
        diagonal_ok=diagonal_ok,
        determinant_ok=passed,
        eigen_ok=gap > 0,
        h8=h8,
        nu=nu,
    )


def theorem2_bound(inputs: BoundInputs) -> Theorem2Result:
    """
    Step-size bound for linear convergence under the Polyak-Lojasiewicz condition.

    Args:
        inputs: Bound inputs with beta > 0

    Returns:
        Theorem2Result whose certificate is evaluated at 0.999 times the bound

    Raises:
        CertificateFailure: Determinant test fails at the certified step size
    """
    if not inputs.beta > 0:
        raise ValueError(f"beta must be positive, got {inputs.beta}")
    d = d_constants(inputs)
    h = h_constants(inputs, d)
    n, L, p = inputs.n, inputs.L, inputs.pi_dot
    sR2, sC2 = inputs.sigma_R**2, inputs.sigma_C**2
    tail = h["h3"] + h["h4"] + h["h5"] + h["h6"]
    terms = {
        "inv_d12": 1.0 / d["d12"],
        "consensus": (1.0 - sR2) / (4.0 * math.sqrt(n) * L * math.sqrt(1.0 + sR2)),
        "tracking": (1.0 - sC2) / (4.0 * math.sqrt(2.0) * L * math.sqrt(1.0 + sC2)),
        "descent": 2.0 * inputs.beta * p / (2.0 * L + 3.0 * L**2 * p**2),
        # Positive root of h1 a - h2 a^2 - tail a^3, written to avoid cancellation
        "cubic": 2.0
        * h["h1"]
        / (h["h2"] + math.sqrt(h["h2"] ** 2 + 4.0 * h["h1"] * tail)),
    }
    alpha_max = min(terms.values())
    certificate = certificate_at(inputs, CERTIFICATE_SHRINK * alpha_max, d)
    if not certificate.determinant_ok:
        raise CertificateFailure(
            f"determinant test fails at alpha={certificate.alpha:.6e}: "
            f"det(I-P)={certificate.determinant:.6e}, "
            f"diagonal_ok={certificate.diagonal_ok}"
        )
    return Theorem2Result(
        alpha_max=alpha_max, terms=terms, d=d, h=h, certificate=certificate
    )


def trigger_admissible(
    schedule: TriggerSchedule, lam: float, h7: float, z0_norm: float
) -> bool:
    """
    Whether a geometric schedule supports the linear envelope.

    Requires s strictly above sqrt(lam) and E >= z0_norm (s^2 - lam) / h7.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    if not schedule.s > math.sqrt(lam):
        return False
    return schedule.E >= z0_norm * (schedule.s**2 - lam) / h7


def linear_envelope(
    schedule: TriggerSchedule, lam: float, h7: float, h8: float, k: int
) -> float:
    """Bound on squared consensus error plus optimality gap at round k."""
    denom = schedule.s**2 - lam
    if denom <= 0:
        return math.nan
    return math.sqrt(2.0) * h7 * h8 * schedule.E**2 * schedule.s ** (2 * k) / denom


def sublinear_envelope(
    inputs: BoundInputs,
    result: Theorem1Result,
    k: int,
    initial_gap: float,
    warmup_sum: float,
    alpha: Optional[float] = None,
) -> float:
    """
    Bound on the running average of squared dual gradient norms after k rounds.

    Args:
        inputs: Bound inputs
        result: Output of :func:`theorem1_bound`
        k: Number of rounds, at least 1
        initial_gap: f(x_bar_0) - f*
        warmup_sum: Sum of squared gradient norms up to the warm-up index
        alpha: Step size (defaults to the candidate of ``result``)
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a = result.candidate if alpha is None else alpha
    c, b = result.c, result.b
    p = inputs.pi_dot
    gamma = a * p - a * a * result.bracket
    if gamma <= 0:
        return math.inf
    one_minus = 1.0 - inputs.lam
    eS = inputs.e0 * inputs.S_e
    drift = c["c2"] * b["b1"] + c["c5"] * b["b2"]
    lead = c["c0"] * b["b1"] + c["c3"] * b["b2"]
    quad = (
        c["c0"] ** 2 * b["b3"]
        + c["c3"] ** 2 * b["b4"]
        + (c["c2"] ** 2 * b["b3"] + c["c5"] ** 2 * b["b4"]) * eS
    )
    value = initial_gap / (gamma * k)
    value += drift * eS / (2.0 * one_minus**2 * gamma * k)
    value += a * lead / (one_minus * gamma * k) * (1.0 + warmup_sum)
    value += a * a * quad / (one_minus**2 * gamma * k)
    return value


def _initial_errors(
    scenario: Scenario, network: NetworkModel, oracle: Optional[Any]
) -> tuple:
    bank = CostBank(scenario.agents)
    m = scenario.m
    x0 = np.zeros(m)
    grad0 = bank.dual_gradients(x0)
    W0 = np.clip(np.zeros((scenario.n, m)), bank.lo, bank.hi)
    S0 = bank.demands(m) - W0
    tracking = S0 - np.outer(network.pi_C, S0.sum(axis=0))
    gap0 = 0.0
    if oracle is not None:
        gap0 = bank.dual_value(x0) - oracle.f_star
    # Consensus error of the zero start vanishes
    z0 = np.array([0.0, float(np.sum(tracking**2)), gap0])
    return float(np.linalg.norm(grad0)), float(np.linalg.norm(z0)), gap0


def bound_inputs(
    scenario: Scenario,
    network: Optional[NetworkModel] = None,
    alpha: Optional[float] = None,
    oracle: Optional[Any] = None,
) -> BoundInputs:
    """
    Assemble bound inputs from a scenario.

    lam is evaluated at the scenario step size when it satisfies the 2 x 2
    bound, otherwise at half that bound.

    Args:
        scenario: Validated scenario
        network: Prebuilt network model
        alpha: Step size overriding the scenario's
        oracle: Optional OracleSolution, enables the optimality-gap entry of z0
    """
    if network is None:
        network = build_network(scenario.graph_R, scenario.graph_C)
    L, mu = smoothness(scenario.agents)
    sigma_R, sigma_C = network.sigma_R, network.sigma_C
    perturbed = False
    if abs(sigma_R - sigma_C) < SIGMA_TIE_TOL:
        sigma_C = min(sigma_C + SIGMA_NUDGE, 1.0 - SIGMA_NUDGE)
        if abs(sigma_R - sigma_C) < SIGMA_TIE_TOL:
            sigma_C = sigma_R - SIGMA_NUDGE
        perturbed = True
        logger.warning(
            "%s to %.9f to separate it from sigma_R", SIGMA_PERTURBED, sigma_C
        )

    n = scenario.n
    step = scenario.alpha if alpha is None else float(alpha)
    first = _lemma5(n, L, sigma_R, sigma_C, network.delta_RC, network.delta_CR)
    alpha_eval = step if step < first else 0.5 * first
    lam = spectral_radius(
        _contraction(
            n, L, sigma_R, sigma_C, network.delta_RC, network.delta_CR, alpha_eval
        )
    )
    if 0.0 < lam < 1.0:
        k0 = max(0.0, (math.log(alpha_eval) - math.log(1.0 - lam)) / math.log(lam))
    else:
        k0 = 0.0

    g0, z0_norm, _ = _initial_errors(scenario, network, oracle)
    schedule = scenario.schedule
    return BoundInputs(
        n=n,
        L=L,
        sigma_R=sigma_R,
        sigma_C=sigma_C,
        delta_RC=network.delta_RC,
        delta_CR=network.delta_CR,
        delta_2R=network.delta_2R,
        delta_2C=network.delta_2C,
        pi_dot=network.pi_dot,
        beta=n / mu,
        grad_f_X0_norm=g0,
        lam=lam,
        Psi_lower=abs(sigma_R - sigma_C),
        e0=schedule.E,
        S_e=schedule.total,
        E=schedule.E,
        s=schedule.s,
        k0=k0,
        alpha_eval=alpha_eval,
        mu=mu,
        z0_norm=z0_norm,
        sigma_perturbed=perturbed,
    )


def bound_report(
    scenario: Scenario,
    network: Optional[NetworkModel] = None,
    oracle: Optional[Any] = None,
    warmup: Optional[Callable[[float], float]] = None,
    horizon: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Every constant, bound and certificate for a scenario as a nested dict.

    Logs a warning when the scenario step size exceeds a bound or when the
    trigger schedule is not admissible for the linear envelope.

    Args:
        scenario: Validated scenario
        network: Prebuilt network model
        oracle: Optional OracleSolution for the initial optimality gap
        warmup: Maps the warm-up index k0 to the sum of squared gradient
            norms over rounds t <= k0, usually read from a finished trace
        horizon: Round at which to evaluate the sublinear envelope

    Returns:
        Nested dict; the ``theorem1`` section carries ``warmup_sum`` and
        ``envelope`` when both ``warmup`` and ``horizon`` are given
    """
    if network is None:
        network = build_network(scenario.graph_R, scenario.graph_C)
    inputs = bound_inputs(scenario, network, oracle=oracle)
    lemma5 = lemma5_bound(inputs)
    t1 = theorem1_bound(inputs)
    t2 = theorem2_bound(inputs)
    cert = t2.certificate
    h7 = t2.h["h7"]

    admissible = False
    if 0.0 < cert.lam < 1.0:
        admissible = trigger_admissible(
            scenario.schedule, cert.lam, h7, inputs.z0_norm
        )
    if not admissible:
        logger.warning(
            "%s: s=%g vs sqrt(lambda)=%.9f",
            SCHEDULE_INADMISSIBLE,
            scenario.schedule.s,
            math.sqrt(max(cert.lam, 0.0)),
        )

    exceeds = {
        "lemma5": scenario.alpha >= lemma5,
        "theorem1": scenario.alpha >= t1.alpha_max,
        "theorem2": scenario.alpha >= t2.alpha_max,
    }
    for name, above in exceeds.items():
        if above:
            logger.warning(
                "%s: alpha=%g, %s bound", ALPHA_ABOVE_BOUND, scenario.alpha, name
            )

    sublinear: Dict[str, Any] = {}
    if warmup is not None and horizon is not None and horizon >= 1:
        warmup_sum = float(warmup(inputs.k0))
        # Without the oracle the initial gap is unknown
        gap0 = math.nan
        if oracle is not None:
            gap0 = _initial_errors(scenario, network, oracle)[2]
        sublinear = {
            "warmup_sum": warmup_sum,
            "envelope_k": horizon,
            "envelope": sublinear_envelope(inputs, t1, horizon, gap0, warmup_sum),
        }

    return {
        "scenario": scenario.name,
        "alpha": scenario.alpha,
        "network": network.summary(),
        "inputs": inputs.to_dict(),
        "lemma4": {
            "P": contraction_matrix(inputs, inputs.alpha_eval).tolist(),
            "Q": input_gain_matrix(inputs).tolist(),
        },
        "lemma5": {"alpha_max": lemma5},
        "theorem1": {
            "alpha_max": t1.alpha_max,
            "candidate": t1.candidate,
            "gamma": t1.gamma,
            "bracket": t1.bracket,
            "k0": inputs.k0,
            **sublinear,
            **t1.c,
            **t1.b,
        },
        "theorem2": {
            "alpha_max": t2.alpha_max,
            "terms": t2.terms,
            **t2.d,
            **t2.h,
            "Q": pl_drift(inputs).tolist(),
            "certificate": cert.to_dict(),
        },
        "trigger_admissible": admissible,
        "alpha_exceeds": exceeds,
    }
