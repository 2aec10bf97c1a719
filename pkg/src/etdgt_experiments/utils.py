"""General utility functions for the dispatch experiments."""

import importlib.metadata
import math
import platform
from typing import Any, Dict, Optional

import numpy as np

DEPENDENCIES = ("numpy", "scipy", "pandas", "networkx")


def package_versions() -> Dict[str, Optional[str]]:
    """
    Installed version of every runtime dependency.

    Returns:
        Dictionary mapping package names to versions, None when missing
    """
    versions: Dict[str, Optional[str]] = {}
    for name in DEPENDENCIES:
        try:
            versions[name] = importlib.metadata.version(name)
        except importlib.metadata.PackageNotFoundError:
            versions[name] = None
    return versions


def environment_report() -> Dict[str, Any]:
    """
    Interpreter, platform, dependency versions and numpy build configuration.

    Returns:
        JSON-ready dictionary
    """
    try:
        numpy_config = np.show_config(mode="dicts")
    except TypeError:
        # numpy before 1.26 only prints its configuration
        numpy_config = None
    return {
        "python": platform.python_version(),
        "platform": platform.platform(),
        "packages": package_versions(),
        "float64_eps": float(np.finfo(np.float64).eps),
        "numpy_config": to_jsonable(numpy_config),
    }


def format_power(value_mw: float) -> str:
    """
    Format a power quantity in MW or kW.

    Args:
        value_mw: Power in MW

    Returns:
        Formatted power string
    """
    if abs(value_mw) >= 1.0:
        return f"{value_mw:.4f} MW"
    elif abs(value_mw) >= 1e-3:
        return f"{value_mw * 1e3:.3f} kW"
    else:
        return f"{value_mw:.3e} MW"


def format_ratio(ratio: float) -> str:
    """Format a ratio as a percentage."""
    if not math.isfinite(ratio):
        return "n/a"
    return f"{ratio * 100:.1f}%"


def to_jsonable(value: Any) -> Any:
    """
    Convert numpy values and non-finite floats for json.dump.

    NaN and infinities become None; arrays become nested lists.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value
