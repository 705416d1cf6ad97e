"""Preference-based global optimization under unknown constraints."""

from .acquisition import AcquisitionConfig
from .loop import OptimizerRun, RunConfig, RunResult, run_headless
from .model import Dataset, Domain, QueryResponse
from .surrogate import FitConfig, RbfKind

__all__ = [
    "AcquisitionConfig", "Dataset", "Domain", "FitConfig", "OptimizerRun",
    "QueryResponse", "RbfKind", "RunConfig", "RunResult", "run_headless",
]
