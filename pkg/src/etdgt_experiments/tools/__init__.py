"""
Command-line tools.

The experiment tool is exposed as the ``etdgt`` console script.
"""

# Tools are imported by their main functions, not as modules
# since they are intended to be used as console scripts

__all__ = []  # Console scripts are defined in pyproject.toml
