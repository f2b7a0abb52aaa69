"""Configuration, drivers and study pipelines."""

from .config import RunConfig, config_from_dict, load_config
from .runner import Problem, RunResult, build_problem, run_simulation
from .studies import (
    AnisotropyResult,
    ErrorRecord,
    StabilityRecord,
    anisotropy_study,
    convergence_study,
    records_from_errors,
    stability_study,
)

__all__ = [
    "AnisotropyResult",
    "ErrorRecord",
    "Problem",
    "RunConfig",
    "RunResult",
    "StabilityRecord",
    "anisotropy_study",
    "build_problem",
    "config_from_dict",
    "convergence_study",
    "load_config",
    "records_from_errors",
    "run_simulation",
    "stability_study",
]
