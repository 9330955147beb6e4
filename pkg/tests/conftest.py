import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("ahv", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ahv")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_field(rng, scale=1.0):
    X = np.zeros((4, 4), dtype=complex)
    X[:3] = scale * (rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
    return X


def random_affine(rng, spread=0.3):
    C = np.eye(4, dtype=complex)
    C[:3] += spread * (rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
    return C
