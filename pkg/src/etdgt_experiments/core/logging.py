"""Run-event log handling.

Library modules log through ``logging.getLogger(__name__)``. The handler
below watches those records and raises flags for events worth surfacing in
a run summary (perturbed contraction factors, inadmissible trigger
schedules, step sizes beyond the advisory bounds).
"""

import logging
from typing import Any, Dict, List

PACKAGE_LOGGER = "etdgt_experiments"

# Message markers emitted by the library; the handler keys its flags on them.
SIGMA_PERTURBED = "sigma_C perturbed"
SCHEDULE_INADMISSIBLE = "trigger schedule not admissible"
ALPHA_ABOVE_BOUND = "step size above advisory bound"
BRACKET_EXPANDED = "oracle bracket expanded"


class RunEventHandler(logging.Handler):
    """Handler that records notable solver events as flags."""

    def __init__(self, level: int = logging.DEBUG):
        super().__init__(level)
        self.sigma_perturbed = False
        self.schedule_inadmissible = False
        self.alpha_above_bound = False
        self.bracket_expanded = False
        self.warnings: List[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        try:
            message = record.getMessage()
        except Exception:
            self.handleError(record)
            return

        if SIGMA_PERTURBED in message:
            self.sigma_perturbed = True
        if SCHEDULE_INADMISSIBLE in message:
            self.schedule_inadmissible = True
        if ALPHA_ABOVE_BOUND in message:
            self.alpha_above_bound = True
        if BRACKET_EXPANDED in message:
            self.bracket_expanded = True
        if record.levelno >= logging.WARNING:
            self.warnings.append(message)

    def reset(self) -> None:
        self.sigma_perturbed = False
        self.schedule_inadmissible = False
        self.alpha_above_bound = False
        self.bracket_expanded = False
        self.warnings = []

    def status(self) -> Dict[str, Any]:
        return {
            "sigma_perturbed": self.sigma_perturbed,
            "schedule_inadmissible": self.schedule_inadmissible,
            "alpha_above_bound": self.alpha_above_bound,
            "bracket_expanded": self.bracket_expanded,
            "warnings": list(self.warnings),
        }


# Global handler instance, attached once to the package logger
_global_handler = RunEventHandler()
logging.getLogger(PACKAGE_LOGGER).addHandler(_global_handler)


def configure_logging(verbose: bool = False) -> None:
    """Send package log records to stderr.

    Args:
        verbose: Emit DEBUG records instead of INFO and above
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    if not any(isinstance(h, logging.StreamHandler) for h in logger.handlers):
        stream = logging.StreamHandler()
        stream.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
        )
        logger.addHandler(stream)


def reset_log_flags() -> None:
    """Reset all event flags."""
    _global_handler.reset()


def get_log_status() -> Dict[str, Any]:
    """Get the current status of event flags."""
    return _global_handler.status()
