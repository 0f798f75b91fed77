import numpy as np
import pytest

from smoothlab import smooth


@pytest.fixture(scope="session")
def sieve10k() -> smooth.SmoothSieve:
    return smooth.build_sieve(10**4)


@pytest.fixture(scope="session")
def sieve1m() -> smooth.SmoothSieve:
    return smooth.build_sieve(10**6)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))
