"""Tests for the run-event log handler."""

import logging

from etdgt_experiments.core.logging import (
    ALPHA_ABOVE_BOUND,
    SCHEDULE_INADMISSIBLE,
    RunEventHandler,
    configure_logging,
    get_log_status,
    reset_log_flags,
)


def test_handler_raises_flags():
    handler = RunEventHandler()
    logger = logging.getLogger("etdgt_test_events")
    logger.propagate = False
    logger.setLevel(logging.DEBUG)
    logger.addHandler(handler)
    try:
        logger.warning("%s: alpha=0.02", ALPHA_ABOVE_BOUND)
        logger.info("%s at k=3", SCHEDULE_INADMISSIBLE)
    finally:
        logger.removeHandler(handler)

    status = handler.status()
    assert status["alpha_above_bound"]
    assert status["schedule_inadmissible"]
    assert not status["sigma_perturbed"]
    assert status["warnings"] == [f"{ALPHA_ABOVE_BOUND}: alpha=0.02"]

    handler.reset()
    assert handler.status()["warnings"] == []


def test_package_logger_feeds_global_flags():
    configure_logging(verbose=False)
    reset_log_flags()
    logger = logging.getLogger("etdgt_experiments.core.stepsize")
    logger.warning("%s", ALPHA_ABOVE_BOUND)
    assert get_log_status()["alpha_above_bound"]
    reset_log_flags()
    assert not get_log_status()["alpha_above_bound"]
