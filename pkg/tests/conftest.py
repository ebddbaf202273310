import pytest

from spinising import graphs, kasteleyn

FIXTURE_NAMES = ["theta", "k4", "prism3", "cube"]


@pytest.fixture(scope="session")
def fixture_graphs():
    return {name: graphs.generate(name) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session")
def fixture_orientations(fixture_graphs):
    return {name: kasteleyn.make_kasteleyn(g) for name, g in fixture_graphs.items()}
