"""Experiment configs, the case runner, report writers and the command line."""

from .config import ConfigError, ExperimentConfig, load_config
from .report import emit_report
from .runner import Row, RunReport, run_experiment, run_suite

__all__ = [
    "ConfigError", "ExperimentConfig", "load_config", "emit_report",
    "Row", "RunReport", "run_experiment", "run_suite",
]
