"""Tests for run configuration presets."""

import pytest

from etdgt_experiments.core.config import (
    PRESET_CONFIGS,
    RunConfig,
    list_available_presets,
    load_run_config,
)


def test_presets_listed():
    names = {"case1", "case2", "case3"}
    assert set(list_available_presets()) == set(PRESET_CONFIGS) == names


def test_preset_with_overrides():
    config = load_run_config("case1", K=100, alpha=None, algorithms=("ddgt",))
    assert config.scenario == "case1"
    assert config.K == 100
    assert config.alpha is None
    assert config.algorithms == ("ddgt",)


def test_unknown_preset_and_algorithm():
    with pytest.raises(ValueError):
        load_run_config("case9")
    with pytest.raises(ValueError):
        RunConfig(scenario="case1", algorithms=("gossip",))
    with pytest.raises(ValueError):
        RunConfig()


def test_apply_to_overrides_scenario(case1):
    config = RunConfig(scenario="case1", alpha=0.01, trigger_E=0.0, K=50, seed=4)
    scenario = config.apply_to(case1)
    assert scenario.alpha == 0.01
    assert scenario.schedule.E == 0.0
    assert scenario.schedule.s == case1.schedule.s
    assert (scenario.K, scenario.seed) == (50, 4)
    assert RunConfig(scenario="case1").apply_to(case1) is case1
