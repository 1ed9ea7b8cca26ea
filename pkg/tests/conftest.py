import pytest

from grem_algebra import modern_graph


@pytest.fixture(scope="session")
def modern():
    return modern_graph()
