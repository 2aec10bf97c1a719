"""Run configuration presets for the dispatch experiments."""

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Tuple

from .scenario import CASE3_GEN_FRACTION, CASE3_N, CASE3_SEED, Scenario
from .trigger import TriggerSchedule

ALGORITHMS = ("etdgt", "ddgt")


@dataclass
class RunConfig:
    """Configuration of one experiment invocation.

    ``None`` fields fall back to the values stored in the scenario.
    """

    scenario: Optional[str] = None
    algorithms: Tuple[str, ...] = ALGORITHMS
    K: Optional[int] = None
    alpha: Optional[float] = None
    trigger_E: Optional[float] = None
    trigger_s: Optional[float] = None
    out_dir: str = "results"
    seed: Optional[int] = None
    workers: int = 2
    gen_n: Optional[int] = None
    gen_fraction: float = CASE3_GEN_FRACTION

    def __post_init__(self) -> None:
        self.algorithms = tuple(self.algorithms)
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(
                f"Unknown algorithm(s) {unknown}. Available: {list(ALGORITHMS)}"
            )
        if self.scenario is None and self.gen_n is None:
            raise ValueError("RunConfig needs a scenario or a generator size gen_n")

    def apply_to(self, scenario: Scenario) -> Scenario:
        """
        Copy of a scenario with this config's overrides applied.

        Args:
            scenario: Base scenario

        Returns:
            Scenario with alpha, schedule, K and seed replaced where set
        """
        changes: Dict[str, Any] = {}
        if self.alpha is not None:
            changes["alpha"] = float(self.alpha)
        if self.K is not None:
            changes["K"] = int(self.K)
        if self.seed is not None:
            changes["seed"] = int(self.seed)
        if self.trigger_E is not None or self.trigger_s is not None:
            E = scenario.schedule.E if self.trigger_E is None else self.trigger_E
            s = scenario.schedule.s if self.trigger_s is None else self.trigger_s
            changes["schedule"] = TriggerSchedule(E=float(E), s=float(s))
        return replace(scenario, **changes) if changes else scenario


PRESET_CONFIGS = {
    "case1": RunConfig(scenario="case1", K=2000),
    "case2": RunConfig(scenario="case2", K=2000),
    "case3": RunConfig(
        gen_n=CASE3_N, gen_fraction=CASE3_GEN_FRACTION, seed=CASE3_SEED, K=5000
    ),
}


def load_run_config(preset: Optional[str] = None, **kwargs: Any) -> RunConfig:
    """
    Load a run configuration.

    Args:
        preset: Name of preset configuration to use
        **kwargs: Configuration overrides; None values are ignored

    Returns:
        RunConfig object
    """
    overrides = {k: v for k, v in kwargs.items() if v is not None}
    if preset:
        if preset not in PRESET_CONFIGS:
            available = list(PRESET_CONFIGS.keys())
            raise ValueError(
                f"Unknown preset '{preset}'. Available presets: {available}"
            )
        return replace(PRESET_CONFIGS[preset], **overrides)
    return RunConfig(**overrides)


def list_available_presets() -> Dict[str, str]:
    """
    List available configuration presets.

    Returns:
        Dictionary mapping preset names to descriptions
    """
    return {
        "case1": "14-agent quadratic dispatch, alpha=0.02, trigger (0.35, 0.91)",
        "case2": (
            "14-agent quadratic plus exponential dispatch, "
            "alpha=0.015, trigger (0.03, 0.96)"
        ),
        "case3": (
            f"{CASE3_N}-agent generated dispatch, seed {CASE3_SEED}, "
            "trigger (0.5, 0.98)"
        ),
    }
