"""Experiment driver: configuration, caches, grids and reports."""

from .config import ConfigError, ExperimentConfig, digits_for
from .main import main, run_grid, validate_report

__all__ = ["ConfigError", "ExperimentConfig", "digits_for", "main", "run_grid", "validate_report"]
