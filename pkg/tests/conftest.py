import random

import pytest

from src.utils import load_config


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)
