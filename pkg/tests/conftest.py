import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from skewroute.core import Arm
from skewroute.corpus import SyntheticSpec, generate_synthetic


@pytest.fixture(scope="session")
def default_corpus():
    """The default synthetic corpus (n=10000, seed 42)."""
    return generate_synthetic(SyntheticSpec())


@pytest.fixture(scope="session")
def small_corpus():
    return generate_synthetic(SyntheticSpec(n_queries=200, seed=7))


@pytest.fixture
def two_arms():
    return [Arm("small", 0.0485, 0), Arm("large", 0.5724, 1)]
