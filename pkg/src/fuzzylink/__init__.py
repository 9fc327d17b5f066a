"""Fuzzy record linkage.

Links rows of two tabular datasets by fuzzy blocking, approximate string
matching, FAHP-derived weights, fuzzy weighted averages, Mamdani inference
and fuzzy c-means clustering into Match / Possible Match / Non-match.
"""
from .config import ConfigError, LinkageConfig, load_config, validate_config
from .fuzzy_core import Interval, ShoulderKind, TriangularFuzzyNumber
from .pipeline import compare, emit_report, run_linkage, run_linkage_files

__all__ = [
    "ConfigError",
    "Interval",
    "LinkageConfig",
    "ShoulderKind",
    "TriangularFuzzyNumber",
    "compare",
    "emit_report",
    "load_config",
    "run_linkage",
    "run_linkage_files",
    "validate_config",
]

__version__ = "0.1.0"
