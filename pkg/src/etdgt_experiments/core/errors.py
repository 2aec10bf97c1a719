"""Exception hierarchy for ET-DGT experiments.

Every error raised by the library derives from :class:`ETDGTError`. Leaf
classes also inherit the builtin that matches the failure kind, so code that
catches ``ValueError`` or ``RuntimeError`` keeps working.
"""

from typing import Optional


class ETDGTError(Exception):
    """Base class for all library errors."""


# Validation-type errors (CLI exit code 2)


class InvalidGraph(ETDGTError, ValueError):
    """Digraph with out-of-range endpoints, duplicates, or no nodes."""


class InvalidCostModel(ETDGTError, ValueError):
    """Cost model violating a > 0, lo <= hi, or f > 0."""


class InvalidScenario(ETDGTError, ValueError):
    """Scenario failing one of the standing assumptions.

    Attributes:
        assumption: Short name of the violated assumption
    """

    def __init__(self, message: str, assumption: Optional[str] = None):
        self.assumption = assumption
        if assumption:
            message = f"{assumption}: {message}"
        super().__init__(message)


ValidationError = InvalidScenario


class ScenarioParseError(ETDGTError, ValueError):
    """Scenario file that is not valid JSON or misses a field.

    Attributes:
        line: 1-based line of a JSON syntax error, if known
        field: Dotted path of the offending field, if known
    """

    def __init__(
        self, message: str, line: Optional[int] = None, field: Optional[str] = None
    ):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


ParseError = ScenarioParseError


class OutOfOrder(ETDGTError, ValueError):
    """Broadcast recorded at an iteration not after the previous one."""


class Infeasible(ETDGTError, ValueError):
    """Total demand outside the aggregate box capacity."""


class LambdaNotContractive(ETDGTError, ValueError):
    """Contraction factor of the error system is not below one."""


# Solver-type errors (CLI exit code 3)


class NonConvergence(ETDGTError, RuntimeError):
    """Power iteration failed to reach the residual target."""


class DegenerateSpectrum(ETDGTError, RuntimeError):
    """Deflated mixing matrix has spectral radius >= 1."""


class RootFindFailure(ETDGTError, RuntimeError):
    """One-dimensional local solver could not bracket a root."""


class CertificateFailure(ETDGTError, RuntimeError):
    """Determinant test rejected the linear-rate certificate."""


VALIDATION_ERRORS = (
    InvalidGraph,
    InvalidCostModel,
    InvalidScenario,
    ScenarioParseError,
)
