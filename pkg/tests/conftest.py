import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from bcwb import corpus

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CORPUS = corpus.names()


@pytest.fixture(scope="session")
def models():
    return {name: corpus.load(name) for name in CORPUS}


@pytest.fixture(scope="session")
def iwasawa(models):
    return models["iwasawa"]


@pytest.fixture(scope="session")
def h6(models):
    return models["h6"]


@pytest.fixture(scope="session")
def h7(models):
    return models["h7"]
