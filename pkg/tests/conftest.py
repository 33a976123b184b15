import pytest
from hypothesis import settings

from shiftsieve import qexpansion as qe
from shiftsieve.specfun import MellinTransform

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

ALL_WEIGHTS = (12, 16, 18, 20, 22, 26)


@pytest.fixture(scope="session")
def delta_4k():
    return qe.eigenform(12, 4000)


@pytest.fixture(scope="session")
def forms_1e5():
    return {k: qe.eigenform(k, 100_000) for k in ALL_WEIGHTS}


@pytest.fixture(scope="session")
def delta_1e6():
    return qe.eigenform(12, 1_000_002)


@pytest.fixture(scope="session")
def mellin():
    return MellinTransform()
