"""Experiment file parsing."""

from .errors import DataLoadError, ParseError
from .experiment_parser import YamlExperimentParser, apply_overrides, parse_override

__all__ = [
    "YamlExperimentParser",
    "ParseError",
    "DataLoadError",
    "apply_overrides",
    "parse_override",
]
