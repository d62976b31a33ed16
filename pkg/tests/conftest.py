import numpy as np
import pytest

from superstar.params import DeformationParams


@pytest.fixture
def p11():
    """The reference parameter point used throughout the suite."""
    return DeformationParams(1.3, 0.4, 2, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
