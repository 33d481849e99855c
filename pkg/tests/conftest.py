import numpy as np
import pytest
from fastapi.testclient import TestClient

from main import app
from pathgauge.utils import generators

RANDOM_SEED = 20240501


@pytest.fixture()
def d1():
    return generators.diamond_network()


@pytest.fixture()
def m1():
    return generators.max_pool_network()


@pytest.fixture()
def client():
    yield TestClient(app)


@pytest.fixture()
def rng():
    return np.random.default_rng(RANDOM_SEED)


@pytest.fixture(scope="session")
def random_nets():
    """Random DAGs shared by the oracle suites."""
    return generators.random_networks(RANDOM_SEED, 1000)


@pytest.fixture(scope="session")
def bias_free_pool_nets():
    """Random DAGs whose k-max-pooling neurons have null biases."""
    return generators.random_networks(RANDOM_SEED + 1, 200, null_pool_biases=True)


@pytest.fixture()
def network_file(tmp_path):
    """Writes YAML text to a temporary network file."""

    def write(text: str, name: str = "network.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
