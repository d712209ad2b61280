import os
import sys

import numpy as np
import pytest

# Add the project root to sys.path so that smcselect is importable
# This is needed because of the flat layout structure
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), "../.."))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from smcselect.data import ExpansionSpec, expand_design, generate_correlated, generate_toy, toy_dataset  # noqa: E402
from smcselect.posterior import PosteriorModel  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def toy_design():
    return generate_toy(seed=0)


@pytest.fixture(scope="session")
def toy_target(toy_design):
    return PosteriorModel.from_design(toy_design)


@pytest.fixture(scope="session")
def synthetic_target():
    return PosteriorModel.from_design(generate_correlated(seed=1))


@pytest.fixture(scope="session")
def constrained_design():
    """Toy covariates with all pairwise interactions: 4 mains + 6 products."""
    spec = ExpansionSpec(add_constant=False, add_interactions=True)
    return expand_design(toy_dataset(seed=3), spec)


@pytest.fixture(scope="session")
def constrained_target(constrained_design):
    return PosteriorModel.from_design(constrained_design, constrained=True)


@pytest.fixture(scope="session")
def collinear_target():
    """Eight factors with two near-duplicate proxies each (d = 16)."""
    return PosteriorModel.from_design(generate_correlated(seed=3, n_latent=8))
