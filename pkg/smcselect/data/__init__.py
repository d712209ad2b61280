"""Regression datasets and expanded design matrices."""

from smcselect.model.expansion import PRESETS, ExpansionSpec

from .dataset import RawDataset, load_csv
from .design import Column, ColumnKind, DesignError, DesignMatrix, expand_design
from .synthetic import correlated_dataset, generate_correlated, generate_toy, toy_dataset

__all__ = [
    "RawDataset",
    "load_csv",
    "ExpansionSpec",
    "PRESETS",
    "Column",
    "ColumnKind",
    "DesignError",
    "DesignMatrix",
    "expand_design",
    "generate_toy",
    "generate_correlated",
    "toy_dataset",
    "correlated_dataset",
]
