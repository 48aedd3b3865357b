import pytest

from qdiff import catalog


@pytest.fixture(scope="session")
def mq2():
    return catalog.aiii(2)


@pytest.fixture(scope="session")
def mq3():
    return catalog.aiii(3)


@pytest.fixture(scope="session")
def plane():
    return catalog.quantum_plane()


@pytest.fixture(scope="session")
def fq2():
    return catalog.fq(2)
