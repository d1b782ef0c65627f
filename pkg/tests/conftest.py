import pytest

from glycosim import ModelParams, engine


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    engine.warmup()


@pytest.fixture()
def params():
    return ModelParams()
