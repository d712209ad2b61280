"""Parametric proposal families on B^d."""

from .family import (
    BinaryModel,
    brute_force_marginals,
    brute_force_table,
    log_density,
    sample_and_evaluate,
)
from .logistic import LogisticConditionalsModel, Structure, fit_logistic_conditionals, select_structure
from .product import ProductModel, fit_product
from .sample import WeightedSample, weighted_moments

__all__ = [
    "BinaryModel",
    "WeightedSample",
    "weighted_moments",
    "ProductModel",
    "fit_product",
    "LogisticConditionalsModel",
    "Structure",
    "select_structure",
    "fit_logistic_conditionals",
    "sample_and_evaluate",
    "log_density",
    "brute_force_marginals",
    "brute_force_table",
]
